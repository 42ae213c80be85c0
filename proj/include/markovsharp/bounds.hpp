#pragma once

// Growth exponents of the sharp constants for each weight class, the
// Lupas sup-norm constant used to derive them, and a fitter that checks
// computed sharp constants against the predicted power of n.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "markovsharp/error.hpp"
#include "markovsharp/markov.hpp"
#include "markovsharp/weight.hpp"

namespace markovsharp {

enum class CaseId {
  laguerre_1,
  gen_hermite_2,
  jacobi_3,
  gen_jacobi_4,
  gen_laguerre_51,
  gen_laguerre_52,
  gen_hermite_6,
  mirsky,
  schmidt
};

inline const char* to_string(CaseId c) {
  switch (c) {
    case CaseId::laguerre_1: return "laguerre_1";
    case CaseId::gen_hermite_2: return "gen_hermite_2";
    case CaseId::jacobi_3: return "jacobi_3";
    case CaseId::gen_jacobi_4: return "gen_jacobi_4";
    case CaseId::gen_laguerre_51: return "gen_laguerre_51";
    case CaseId::gen_laguerre_52: return "gen_laguerre_52";
    case CaseId::gen_hermite_6: return "gen_hermite_6";
    case CaseId::mirsky: return "mirsky";
    case CaseId::schmidt: return "schmidt";
  }
  return "unknown";
}

/// Accepts the enum names and the short forms 1, 2, 3, 4, 5.1, 5.2, 6.
inline CaseId case_from_string(const std::string& s) {
  static const std::pair<const char*, CaseId> shorts[] = {
      {"1", CaseId::laguerre_1},        {"2", CaseId::gen_hermite_2},     {"3", CaseId::jacobi_3},
      {"4", CaseId::gen_jacobi_4},      {"5.1", CaseId::gen_laguerre_51}, {"5.2", CaseId::gen_laguerre_52},
      {"6", CaseId::gen_hermite_6}};
  for (const auto& [name, id] : shorts)
    if (s == name) return id;
  for (CaseId c : {CaseId::laguerre_1, CaseId::gen_hermite_2, CaseId::jacobi_3, CaseId::gen_jacobi_4,
                   CaseId::gen_laguerre_51, CaseId::gen_laguerre_52, CaseId::gen_hermite_6, CaseId::mirsky,
                   CaseId::schmidt})
    if (s == to_string(c)) return c;
  throw InvalidArgument("unknown case '" + s + "'");
}

struct ExponentReport {
  double b = 0.0;                   // b or b'
  double a = 0.0;                   // a or a'
  std::vector<double> intermediates;  // g_j + g_{j+1} + |g_j - g_{j+1}| + 2 per padded pair
};

/// alpha + beta + |alpha - beta| + 2.
inline double v_exponent(double alpha, double beta) { return alpha + beta + std::abs(alpha - beta) + 2.0; }

namespace detail {

inline ExponentReport padded_pair_exponents(const std::vector<double>& padded) {
  ExponentReport r;
  r.b = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < padded.size(); ++j) {
    if (std::max(padded[j], padded[j + 1]) < -0.5)
      throw HypothesisViolation("hypothesis max(gamma_j, gamma_{j+1}) >= -1/2 fails for the pair (" +
                                format_number(padded[j]) + ", " + format_number(padded[j + 1]) + ")");
    const double term = v_exponent(padded[j], padded[j + 1]);
    r.intermediates.push_back(term);
    r.b = std::max(r.b, term);
  }
  return r;
}

}  // namespace detail

/// Exponent a = max(2, (b+1)/2) for |x-c_j|^{gamma_j} e^{-x^2}, with
/// b = max over consecutive pairs of the zero-padded exponent list.
inline ExponentReport exponent_case6(const std::vector<double>& gammas) {
  double sum = 0.0;
  for (double g : gammas) {
    if (!(g > -1.0)) throw HypothesisViolation("every gamma_j must exceed -1 (got " + format_number(g) + ")");
    sum += g;
  }
  if (sum < 0.0) throw HypothesisViolation("sum of gamma_j must be >= 0 (got " + format_number(sum) + ")");
  std::vector<double> padded{0.0};
  padded.insert(padded.end(), gammas.begin(), gammas.end());
  padded.push_back(0.0);
  ExponentReport r = detail::padded_pair_exponents(padded);
  r.a = std::max(2.0, (r.b + 1.0) / 2.0);
  return r;
}

/// Exponent a' = max(2, (b'+2)/2) for |x-c_j|^{gamma_j} e^{-x} on [0, inf).
/// Factors located left of 0 are smooth on the interval and drop out of b'.
inline ExponentReport exponent_case52(const std::vector<double>& gammas, const std::vector<double>& cs) {
  if (gammas.size() != cs.size()) throw InvalidArgument("exponent_case52: gammas and cs differ in length");
  if (cs.empty()) throw HypothesisViolation("at least one singular factor is required");
  for (std::size_t j = 1; j < cs.size(); ++j)
    if (!(cs[j] > cs[j - 1])) throw HypothesisViolation("locations c_j must be strictly increasing");
  if (cs.back() < 0.0) throw HypothesisViolation("the last location c_r must be >= 0");
  double sum = 0.0;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    sum += gammas[j];
    if (cs[j] >= 0.0 && !(gammas[j] > -1.0))
      throw HypothesisViolation("gamma_j must exceed -1 where c_j >= 0");
  }
  if (!(sum > -1.0)) throw HypothesisViolation("sum of gamma_j must exceed -1 (got " + format_number(sum) + ")");

  std::size_t first = 0;  // r_0 - 1 in 1-based terms
  while (cs[first] < 0.0) ++first;
  std::vector<double> padded{0.0};
  padded.insert(padded.end(), gammas.begin() + static_cast<std::ptrdiff_t>(first), gammas.end());
  padded.push_back(0.0);
  ExponentReport r = detail::padded_pair_exponents(padded);
  r.a = std::max(2.0, (r.b + 2.0) / 2.0);
  return r;
}

/// Constant L with ||P||_inf <= L ||P||_{L^2((1-x)^alpha (1+x)^beta)} on
/// [-1,1] for every P of degree <= n:
///   L^2 = Gamma(n+alpha+beta+2) / (2^{alpha+beta+1} Gamma(q+1) Gamma(n+q'+1)) * binom(n+q+1, n),
/// q = max(alpha, beta) >= -1/2, q' = min(alpha, beta). Evaluated in logs.
inline double lupas_constant(int n, double alpha, double beta) {
  if (n < 0) throw InvalidArgument("lupas_constant: n must be >= 0");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw InvalidArgument("lupas_constant: alpha, beta must exceed -1");
  const double q = std::max(alpha, beta), qp = std::min(alpha, beta);
  if (q < -0.5) throw HypothesisViolation("Lupas hypothesis violated: max(alpha, beta) must be >= -1/2");
  const double log_binom = std::lgamma(n + q + 2.0) - std::lgamma(n + 1.0) - std::lgamma(q + 2.0);
  const double log_sq = std::lgamma(n + alpha + beta + 2.0) - (alpha + beta + 1.0) * std::log(2.0) -
                        std::lgamma(q + 1.0) - std::lgamma(n + qp + 1.0) + log_binom;
  return std::exp(0.5 * log_sq);
}

/// Gamma(n+x) / (Gamma(n+y) n^{x-y}) for each n. Integer shifts use the
/// exact product form, so Gamma(n+1)/(Gamma(n) n) is exactly 1.
inline std::vector<double> gamma_ratio_convergence(double x, double y, const std::vector<int>& ns) {
  std::vector<double> out;
  out.reserve(ns.size());
  for (int n : ns) {
    if (!(n + std::min(x, y) > 0.0)) throw InvalidArgument("gamma_ratio_convergence: pole of Gamma at n + x or n + y");
    const double d = x - y;
    if (d == std::round(d) && std::abs(d) <= 64.0) {
      const int steps = static_cast<int>(std::abs(d));
      const double lo = d >= 0 ? y : x;
      double r = 1.0;
      for (int i = 0; i < steps; ++i) r *= (n + lo + i) / static_cast<double>(n);
      out.push_back(d >= 0 ? r : 1.0 / r);
    } else {
      out.push_back(std::exp(std::lgamma(n + x) - std::lgamma(n + y) - d * std::log(static_cast<double>(n))));
    }
  }
  return out;
}

struct PowerFit {
  double constant = 0.0;
  double exponent = 0.0;
};

/// Least-squares fit of log value = log C + e log n over the larger half
/// of the sample (by n).
inline PowerFit growth_fit(const std::vector<double>& ns, const std::vector<double>& values) {
  if (ns.size() != values.size()) throw InvalidArgument("growth_fit: size mismatch");
  if (ns.size() < 4) throw InvalidArgument("growth_fit: need at least 4 points");
  std::vector<std::size_t> idx(ns.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ns[a] < ns[b]; });
  const std::size_t keep = (ns.size() + 1) / 2;
  std::vector<double> lx, ly;
  for (std::size_t i = ns.size() - keep; i < ns.size(); ++i) {
    const double n = ns[idx[i]], v = values[idx[i]];
    if (!(n > 0.0) || !(v > 0.0)) throw InvalidArgument("growth_fit: n and values must be positive");
    lx.push_back(std::log(n));
    ly.push_back(std::log(v));
  }
  const double k = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / k;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 1e-14)) throw InvalidArgument("growth_fit: degenerate fit (all n equal)");
  PowerFit f;
  f.exponent = sxy / sxx;
  f.constant = std::exp(my - f.exponent * mx);
  return f;
}

template <typename Int>
PowerFit growth_fit(const std::vector<Int>& ns, const std::vector<double>& values) {
  return growth_fit(std::vector<double>(ns.begin(), ns.end()), values);
}

struct BoundCheck {
  CaseId case_id = CaseId::jacobi_3;
  std::vector<int> n_range;
  std::vector<double> sharp_values;     // Sobolev sharp constants (L^2 when all lambdas vanish)
  std::vector<double> l2_values;        // weighted L^2 sharp constants
  std::vector<double> mirsky_values;
  std::vector<double> envelope_values;  // smallest C n^{predicted} above every sharp value, or sqrt(2n)
  double fitted_constant = 0.0;
  double fitted_exponent = 0.0;
  double predicted_exponent = 0.0;
  double slack = 0.1;
  std::vector<std::string> failures;
  bool pass = false;
};

struct VerifyOptions {
  double slack = 0.1;
  Limits limits{};
  StieltjesOptions stieltjes{};
};

namespace detail {

inline void require_base(const WeightSpec& spec, Base base, CaseId id) {
  if (base_of(spec.family) != base)
    throw HypothesisViolation(std::string("case ") + to_string(id) + " does not apply to a " +
                              to_string(spec.family) + " weight");
}

}  // namespace detail

/// Exponent of n in the upper bound for the given weight class; checks the
/// class's hypotheses on the way.
inline double predicted_exponent(CaseId id, const WeightSpec& spec) {
  const auto factors = singular_factors(spec);
  std::vector<double> gammas, cs;
  for (const auto& s : factors) {
    gammas.push_back(s.exponent);
    cs.push_back(s.location);
  }
  const auto classical = classical_equivalent(spec);
  switch (id) {
    case CaseId::laguerre_1:
      if (!classical || classical->family != Family::laguerre)
        throw HypothesisViolation("case laguerre_1 needs a Laguerre weight x^alpha e^{-x}");
      return 1.0;
    case CaseId::gen_hermite_2:
      if (!classical || base_of(classical->family) != Base::exp_quadratic || classical->alpha < 0.0)
        throw HypothesisViolation("case gen_hermite_2 needs a weight |x|^alpha e^{-x^2} with alpha >= 0");
      return 0.5;
    case CaseId::schmidt:
      if (!classical || classical->family != Family::hermite)
        throw HypothesisViolation("case schmidt needs the Hermite weight e^{-x^2}");
      return 0.5;
    case CaseId::jacobi_3:
      if (!classical || classical->family != Family::jacobi)
        throw HypothesisViolation("case jacobi_3 needs a Jacobi weight");
      return 2.0;
    case CaseId::gen_jacobi_4:
      detail::require_base(spec, Base::none, id);
      return 2.0;
    case CaseId::gen_laguerre_51: {
      detail::require_base(spec, Base::exp_linear, id);
      if (factors.empty() || factors.back().location < 0.0)
        throw HypothesisViolation("case gen_laguerre_51 needs c_r >= 0");
      double head = 0.0;
      for (std::size_t j = 0; j + 1 < factors.size(); ++j) head += factors[j].exponent;
      if (std::abs(head) > 1e-12)
        throw HypothesisViolation("case gen_laguerre_51 needs sum_{j<r} gamma_j = 0 (got " + format_number(head) + ")");
      return 2.0;
    }
    case CaseId::gen_laguerre_52:
      detail::require_base(spec, Base::exp_linear, id);
      return exponent_case52(gammas, cs).a;
    case CaseId::gen_hermite_6:
      detail::require_base(spec, Base::exp_quadratic, id);
      return exponent_case6(gammas).a;
    case CaseId::mirsky:
      return std::numeric_limits<double>::quiet_NaN();  // taken from the bound's own growth
  }
  return std::numeric_limits<double>::quiet_NaN();
}

/// Computes sharp constants over ns and checks them against the growth
/// predicted for the weight class. Only upper bounds are checked.
inline BoundCheck verify_theorem(CaseId id, const WeightSpec& raw, const SobolevSpec& sob, std::vector<int> ns,
                                 const VerifyOptions& opt = {}) {
  const WeightSpec spec = make_weight(raw);
  sob.validate(opt.limits);
  if (ns.empty()) throw InvalidArgument("verify_theorem: empty n range");
  std::sort(ns.begin(), ns.end());
  if (ns.front() < 1) throw InvalidArgument("verify_theorem: n must be >= 1");

  BoundCheck check;
  check.case_id = id;
  check.slack = opt.slack;
  check.n_range = ns;
  double predicted = predicted_exponent(id, spec);

  const MarkovProblem problem(spec, ns.back(), opt.limits, opt.stieltjes);
  for (int n : ns) {
    check.sharp_values.push_back(problem.sharp_sobolev(sob, n).value);
    check.l2_values.push_back(problem.sharp_l2(n).value);
    check.mirsky_values.push_back(problem.mirsky(n));
  }
  const PowerFit fit = growth_fit(ns, check.sharp_values);
  check.fitted_constant = fit.constant;
  check.fitted_exponent = fit.exponent;
  if (id == CaseId::mirsky) predicted = growth_fit(ns, check.mirsky_values).exponent;
  check.predicted_exponent = predicted;

  const bool sqrt_envelope = id == CaseId::gen_hermite_2 || id == CaseId::schmidt;
  double c_star = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i)
    c_star = std::max(c_star, check.sharp_values[i] / std::pow(ns[i], predicted));
  for (int n : ns)
    check.envelope_values.push_back(sqrt_envelope ? std::sqrt(2.0 * n) : c_star * std::pow(n, predicted));

  if (check.fitted_exponent > predicted + opt.slack)
    check.failures.push_back("fitted exponent " + format_number(check.fitted_exponent) + " exceeds " +
                             format_number(predicted) + " + " + format_number(opt.slack));
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const int n = ns[i];
    const double s = check.sharp_values[i];
    if (check.mirsky_values[i] < check.l2_values[i] * (1.0 - 1e-9))
      check.failures.push_back("Mirsky bound below the sharp constant at n=" + std::to_string(n));
    if (s > check.l2_values[i] * (1.0 + 1e-9))
      check.failures.push_back("Sobolev constant above the L2 constant at n=" + std::to_string(n));
    if (sqrt_envelope && s > std::sqrt(2.0 * n) * (1.0 + 1e-9))
      check.failures.push_back("sharp constant above sqrt(2n) at n=" + std::to_string(n));
    if (id == CaseId::schmidt && sob.trivial() && std::abs(s - std::sqrt(2.0 * n)) > 1e-10 * std::sqrt(2.0 * n))
      check.failures.push_back("sharp constant differs from sqrt(2n) at n=" + std::to_string(n));
  }
  check.pass = check.failures.empty();
  return check;
}

/// Exponent used for the sweep envelope of a weight without a named case.
inline double family_exponent(const WeightSpec& spec) {
  const auto classical = classical_equivalent(spec);
  if (classical) {
    switch (classical->family) {
      case Family::laguerre: return 1.0;
      case Family::hermite:
      case Family::gen_hermite: return 0.5;
      default: return 2.0;
    }
  }
  switch (base_of(spec.family)) {
    case Base::none: return 2.0;
    case Base::exp_linear:
      try {
        return predicted_exponent(CaseId::gen_laguerre_51, spec);
      } catch (const HypothesisViolation&) {
        return predicted_exponent(CaseId::gen_laguerre_52, spec);
      }
    case Base::exp_quadratic: return predicted_exponent(CaseId::gen_hermite_6, spec);
  }
  return 2.0;
}

}  // namespace markovsharp
