// Command-line front end: sharp, sweep, mirsky, extremal, verify, selftest.
//
// Exit codes: 0 success, 1 verification or self-test failure, 2 invalid
// input or violated hypothesis, 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "markovsharp/markovsharp.hpp"

namespace ms = markovsharp;

namespace {

struct RunConfig {
  std::string weight = "legendre";
  std::string lambdas;
  int n = -1;
  int n_min = -1;
  int n_max = -1;
  int n_step = 1;
  std::string case_id;
  std::string format = "json";
  std::string out;
  double tol = 1e-12;
  double slack = 0.1;
  bool perturb = false;
};

ms::WeightSpec resolve_weight(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return ms::weight_from_json_text(arg);
  if (arg == "legendre" || arg == "chebyshev1" || arg == "laguerre0" || arg == "hermite") return ms::named_preset(arg);
  std::ifstream in(arg);
  if (!in) throw ms::InvalidArgument("--weight: '" + arg + "' is neither a preset, inline JSON nor a readable file");
  std::stringstream buf;
  buf << in.rdbuf();
  return ms::weight_from_json_text(buf.str());
}

ms::SobolevSpec parse_lambdas(const std::string& s) {
  ms::SobolevSpec sob;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) sob.lambdas.push_back(ms::parse_double(item));
  return sob;
}

ms::Limits limits_from_env() {
  ms::Limits lim;
  if (const char* env = std::getenv("MARKOVSHARP_MAX_N")) {
    const int v = std::atoi(env);
    if (v < 1) throw ms::InvalidArgument("MARKOVSHARP_MAX_N must be a positive integer");
    lim.max_n = v;
  }
  return lim;
}

void require_n(int n) {
  if (n < 1) throw ms::InvalidArgument("n must be \xE2\x89\xA5 1");
}

std::vector<int> n_range(const RunConfig& cfg, int default_min, int default_max) {
  const int lo = cfg.n_min >= 0 ? cfg.n_min : (cfg.n >= 0 ? 1 : default_min);
  const int hi = cfg.n_max >= 0 ? cfg.n_max : (cfg.n >= 0 ? cfg.n : default_max);
  require_n(lo);
  if (hi < lo) throw ms::InvalidArgument("n range is empty (n-max < n-min)");
  if (cfg.n_step < 1) throw ms::InvalidArgument("--n-step must be >= 1");
  std::vector<int> ns;
  for (int n = lo; n <= hi; n += cfg.n_step) ns.push_back(n);
  return ns;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ms::InvalidArgument("cannot open --out file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const RunConfig& cfg, const ms::json& j) {
  Output out(cfg.out);
  out.stream() << j.dump(2) << '\n';
}

int cmd_sharp(const RunConfig& cfg) {
  require_n(cfg.n);
  const ms::WeightSpec w = resolve_weight(cfg.weight);
  const ms::SobolevSpec sob = parse_lambdas(cfg.lambdas);
  ms::StieltjesOptions st;
  st.tolerance = cfg.tol;
  const ms::MarkovProblem problem(w, cfg.n, limits_from_env(), st);
  const ms::SharpResult r = sob.lambdas.empty() ? problem.sharp_l2(cfg.n) : problem.sharp_sobolev(sob, cfg.n);
  if (cfg.format == "csv") {
    Output out(cfg.out);
    ms::write_csv(out.stream(), r);
  } else {
    emit_json(cfg, ms::to_json(r, problem.spec(), sob));
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  const std::vector<int> ns = n_range(cfg, 1, 20);
  const ms::WeightSpec w = resolve_weight(cfg.weight);
  const ms::SobolevSpec sob = parse_lambdas(cfg.lambdas);
  ms::StieltjesOptions st;
  st.tolerance = cfg.tol;
  const ms::MarkovProblem problem(w, ns.back(), limits_from_env(), st);

  std::vector<double> sharp, sobolev, mirsky;
  for (int n : ns) {
    sharp.push_back(problem.sharp_l2(n).value);
    sobolev.push_back(sob.trivial() ? sharp.back() : problem.sharp_sobolev(sob, n).value);
    mirsky.push_back(problem.mirsky(n));
  }
  const auto classical = ms::classical_equivalent(problem.spec());
  const bool sqrt_envelope = classical && ms::base_of(classical->family) == ms::Base::exp_quadratic;
  const double p = ms::family_exponent(problem.spec());
  double c_star = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) c_star = std::max(c_star, sobolev[i] / std::pow(ns[i], p));
  auto envelope = [&](int n) { return sqrt_envelope ? std::sqrt(2.0 * n) : c_star * std::pow(n, p); };

  Output out(cfg.out);
  if (cfg.format == "csv") {
    ms::write_csv_row(out.stream(), {"n", "sharp", "sobolev", "mirsky", "envelope"});
    for (std::size_t i = 0; i < ns.size(); ++i)
      ms::write_csv_row(out.stream(), {std::to_string(ns[i]), ms::format_double(sharp[i]),
                                       ms::format_double(sobolev[i]), ms::format_double(mirsky[i]),
                                       ms::format_double(envelope(ns[i]))});
  } else {
    ms::json rows = ms::json::array();
    for (std::size_t i = 0; i < ns.size(); ++i)
      rows.push_back({{"n", ns[i]},
                      {"sharp", sharp[i]},
                      {"sobolev", sobolev[i]},
                      {"mirsky", mirsky[i]},
                      {"envelope", envelope(ns[i])}});
    out.stream() << ms::json{{"weight", ms::to_json(problem.spec())}, {"lambdas", sob.lambdas}, {"rows", rows}}.dump(2)
                 << '\n';
  }
  return 0;
}

int cmd_mirsky(const RunConfig& cfg) {
  require_n(cfg.n);
  const ms::WeightSpec w = resolve_weight(cfg.weight);
  ms::StieltjesOptions st;
  st.tolerance = cfg.tol;
  const ms::MarkovProblem problem(w, cfg.n, limits_from_env(), st);
  const double bound = problem.mirsky(cfg.n);
  const double sharp = problem.sharp_l2(cfg.n).value;
  if (cfg.format == "csv") {
    Output out(cfg.out);
    ms::write_csv_row(out.stream(), {"n", "mirsky", "sharp"});
    ms::write_csv_row(out.stream(), {std::to_string(cfg.n), ms::format_double(bound), ms::format_double(sharp)});
  } else {
    emit_json(cfg, {{"n", cfg.n}, {"mirsky", bound}, {"sharp", sharp}, {"weight", ms::to_json(problem.spec())}});
  }
  return 0;
}

int cmd_extremal(const RunConfig& cfg) {
  require_n(cfg.n);
  const ms::WeightSpec w = resolve_weight(cfg.weight);
  const ms::SobolevSpec sob = parse_lambdas(cfg.lambdas);
  ms::StieltjesOptions st;
  st.tolerance = cfg.tol;
  const ms::MarkovProblem problem(w, cfg.n, limits_from_env(), st);
  const ms::SharpResult r = sob.lambdas.empty() ? problem.sharp_l2(cfg.n) : problem.sharp_sobolev(sob, cfg.n);
  const ms::ExtremalPolynomial poly(r, problem.recurrence_table(), sob);

  // Sample over the interval, or over the Gauss nodes' hull when unbounded.
  double lo = problem.spec().lower, hi = problem.spec().upper;
  if (!std::isfinite(lo)) lo = problem.rule().nodes.front();
  if (!std::isfinite(hi)) hi = problem.rule().nodes.back();
  const int samples = 201;
  std::vector<double> xs, ps, dps;
  for (int i = 0; i < samples; ++i) {
    const double x = lo + (hi - lo) * i / (samples - 1);
    xs.push_back(x);
    ps.push_back(poly(x));
    dps.push_back(poly.derivative(x, 1));
  }
  Output out(cfg.out);
  if (cfg.format == "csv") {
    ms::write_csv_row(out.stream(), {"x", "p", "dp"});
    for (int i = 0; i < samples; ++i)
      ms::write_csv_row(out.stream(),
                        {ms::format_double(xs[i]), ms::format_double(ps[i]), ms::format_double(dps[i])});
  } else {
    ms::json j = ms::to_json(r, problem.spec(), sob);
    j["achieved_ratio"] = poly.achieved_ratio();
    j["norm"] = poly.norm();
    ms::json pts = ms::json::array();
    for (int i = 0; i < samples; ++i) pts.push_back({xs[i], ps[i], dps[i]});
    j["samples"] = pts;
    out.stream() << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.case_id.empty()) throw ms::InvalidArgument("verify needs --case");
  const ms::CaseId id = ms::case_from_string(cfg.case_id);
  const std::vector<int> ns = n_range(cfg, 4, 40);
  const ms::WeightSpec w = resolve_weight(cfg.weight);
  const ms::SobolevSpec sob = parse_lambdas(cfg.lambdas);
  ms::VerifyOptions opt;
  opt.slack = cfg.slack;
  opt.limits = limits_from_env();
  opt.stieltjes.tolerance = cfg.tol;
  const ms::BoundCheck check = ms::verify_theorem(id, w, sob, ns, opt);
  if (cfg.format == "csv") {
    Output out(cfg.out);
    ms::write_csv(out.stream(), check);
  } else {
    emit_json(cfg, ms::to_json(check));
  }
  for (const auto& f : check.failures) std::cerr << "verify: " << f << '\n';
  return check.pass ? 0 : 1;
}

int cmd_selftest(const RunConfig& cfg) {
  ms::SelftestOptions opt;
  opt.perturb_rule = cfg.perturb;
  const auto suites = ms::run_selftest(opt);
  bool all = true;
  Output out(cfg.out);
  if (cfg.format == "csv") {
    ms::write_csv_row(out.stream(), {"suite", "pass", "worst", "tolerance"});
    for (const auto& s : suites)
      ms::write_csv_row(out.stream(), {s.name, s.pass ? "true" : "false", ms::format_double(s.worst),
                                       ms::format_double(s.tolerance)});
  } else {
    ms::json arr = ms::json::array();
    for (const auto& s : suites)
      arr.push_back(
          {{"suite", s.name}, {"pass", s.pass}, {"worst", s.worst}, {"tolerance", s.tolerance}, {"detail", s.detail}});
    out.stream() << arr.dump(2) << '\n';
  }
  for (const auto& s : suites) {
    std::cerr << (s.pass ? "PASS " : "FAIL ") << s.name << " (" << s.detail << ")\n";
    all = all && s.pass;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp Markov-type constants for weighted L2 and Sobolev norms"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, bool with_range) {
    sub->add_option("--weight", cfg.weight, "preset (legendre, chebyshev1, laguerre0, hermite), inline JSON or file");
    sub->add_option("--lambdas", cfg.lambdas, "Sobolev weights lambda_1,...,lambda_k");
    sub->add_option("--n", cfg.n, "polynomial degree");
    if (with_range) {
      sub->add_option("--n-min", cfg.n_min, "first degree of the range");
      sub->add_option("--n-max", cfg.n_max, "last degree of the range");
      sub->add_option("--n-step", cfg.n_step, "step of the range");
    }
    sub->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--tol", cfg.tol, "agreement tolerance for computed recurrences");
  };

  auto* sharp = app.add_subcommand("sharp", "sharp constant for one degree");
  common(sharp, false);
  auto* sweep = app.add_subcommand("sweep", "table of sharp constants over a degree range");
  common(sweep, true);
  auto* mirsky = app.add_subcommand("mirsky", "Mirsky upper bound next to the sharp constant");
  common(mirsky, false);
  auto* extremal = app.add_subcommand("extremal", "extremal polynomial and samples of it");
  common(extremal, false);
  auto* verify = app.add_subcommand("verify", "check sharp constants against a growth bound");
  common(verify, true);
  verify->add_option("--case", cfg.case_id, "1, 2, 3, 4, 5.1, 5.2, 6, mirsky or schmidt");
  verify->add_option("--slack", cfg.slack, "allowed excess of the fitted exponent");
  auto* selftest = app.add_subcommand("selftest", "kernel self-checks");
  selftest->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));
  selftest->add_option("--out", cfg.out, "output file (default stdout)");
  selftest->add_flag("--perturb", cfg.perturb, "distort one quadrature weight (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sharp) return cmd_sharp(cfg);
    if (*sweep) return cmd_sweep(cfg);
    if (*mirsky) return cmd_mirsky(cfg);
    if (*extremal) return cmd_extremal(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*selftest) return cmd_selftest(cfg);
  } catch (const ms::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ms::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
