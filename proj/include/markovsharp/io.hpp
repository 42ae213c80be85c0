#pragma once

// JSON and CSV forms of weights, rules, sharp results and bound checks.
// Numbers are written in shortest round-trip form with a '.' separator,
// independent of the global locale.

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "markovsharp/bounds.hpp"
#include "markovsharp/error.hpp"
#include "markovsharp/markov.hpp"
#include "markovsharp/quadrature.hpp"
#include "markovsharp/weight.hpp"

namespace markovsharp {

using json = nlohmann::json;

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  if (s == "inf" || s == "+inf" || s == "Infinity") return kInf;
  if (s == "-inf" || s == "-Infinity") return -kInf;
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

namespace detail {

inline double json_real(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_double(j.get<std::string>());
  throw InvalidArgument(std::string("weight JSON: '") + what + "' must be a number");
}

inline json json_real_out(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

}  // namespace detail

/// Parses {"family", "interval", "alpha", "beta", "singularities", "scale"};
/// omitted fields take the family defaults. The result is validated.
inline WeightSpec weight_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("weight JSON must be an object");
  for (const auto& [key, _] : j.items())
    if (key != "family" && key != "interval" && key != "alpha" && key != "beta" && key != "singularities" &&
        key != "scale")
      throw InvalidArgument("weight JSON: unknown field '" + key + "'");
  if (!j.contains("family") || !j["family"].is_string()) throw InvalidArgument("weight JSON: missing 'family'");
  WeightSpec w;
  w.family = family_from_string(j["family"].get<std::string>());
  std::tie(w.lower, w.upper) = default_interval(w.family);
  if (j.contains("interval")) {
    const json& iv = j["interval"];
    if (!iv.is_array() || iv.size() != 2) throw InvalidArgument("weight JSON: 'interval' must be [a, b]");
    w.lower = detail::json_real(iv[0], "interval");
    w.upper = detail::json_real(iv[1], "interval");
  }
  if (j.contains("alpha")) w.alpha = detail::json_real(j["alpha"], "alpha");
  if (j.contains("beta")) w.beta = detail::json_real(j["beta"], "beta");
  if (j.contains("scale")) w.scale = detail::json_real(j["scale"], "scale");
  if (j.contains("singularities")) {
    const json& s = j["singularities"];
    if (!s.is_array()) throw InvalidArgument("weight JSON: 'singularities' must be a list of [c, gamma]");
    for (const json& e : s) {
      if (!e.is_array() || e.size() != 2) throw InvalidArgument("weight JSON: singularity entries are [c, gamma]");
      w.singularities.push_back({detail::json_real(e[0], "c"), detail::json_real(e[1], "gamma")});
    }
  }
  return make_weight(w);
}

inline WeightSpec weight_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("weight JSON: ") + e.what());
  }
  return weight_from_json(j);
}

inline json to_json(const WeightSpec& w) {
  json j;
  j["family"] = to_string(w.family);
  j["interval"] = json::array({detail::json_real_out(w.lower), detail::json_real_out(w.upper)});
  j["alpha"] = w.alpha;
  j["beta"] = w.beta;
  json s = json::array();
  for (const auto& f : w.singularities) s.push_back(json::array({f.location, f.exponent}));
  j["singularities"] = s;
  j["scale"] = w.scale;
  return j;
}

/// legendre, chebyshev1, laguerre0, hermite.
inline WeightSpec named_preset(const std::string& name) {
  WeightSpec w;
  if (name == "legendre") {
    w.family = Family::jacobi;
  } else if (name == "chebyshev1") {
    w.family = Family::jacobi;
    w.alpha = w.beta = -0.5;
  } else if (name == "laguerre0") {
    w.family = Family::laguerre;
  } else if (name == "hermite") {
    w.family = Family::hermite;
  } else {
    throw InvalidArgument("unknown weight preset '" + name + "'");
  }
  std::tie(w.lower, w.upper) = default_interval(w.family);
  return make_weight(w);
}

inline json to_json(const SharpResult& r, const WeightSpec& w, const SobolevSpec& sob) {
  json j;
  j["n"] = r.n;
  j["value"] = r.value;
  j["coeffs"] = r.coeffs;
  j["residual"] = r.residual;
  j["weight"] = to_json(w);
  j["lambdas"] = sob.lambdas;
  return j;
}

inline json to_json(const BoundCheck& c) {
  json j;
  j["case_id"] = to_string(c.case_id);
  j["n_range"] = c.n_range;
  j["sharp_values"] = c.sharp_values;
  j["l2_values"] = c.l2_values;
  j["mirsky_values"] = c.mirsky_values;
  j["envelope_values"] = c.envelope_values;
  j["fitted_constant"] = c.fitted_constant;
  j["fitted_exponent"] = c.fitted_exponent;
  j["predicted_exponent"] = c.predicted_exponent;
  j["slack"] = c.slack;
  j["failures"] = c.failures;
  j["pass"] = c.pass;
  return j;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
  os << '\n';
}

inline void write_csv(std::ostream& os, const BoundCheck& c) {
  write_csv_row(os, {"case_id", "n", "sharp", "predicted_envelope", "fitted_constant", "fitted_exponent", "pass"});
  for (std::size_t i = 0; i < c.n_range.size(); ++i)
    write_csv_row(os, {to_string(c.case_id), std::to_string(c.n_range[i]), format_double(c.sharp_values[i]),
                       format_double(c.envelope_values[i]), format_double(c.fitted_constant),
                       format_double(c.fitted_exponent), c.pass ? "true" : "false"});
}

inline void write_csv(std::ostream& os, const SharpResult& r) {
  write_csv_row(os, {"n", "value", "residual", "coeffs"});
  std::string coeffs;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) coeffs += (i ? " " : "") + format_double(r.coeffs[i]);
  write_csv_row(os, {std::to_string(r.n), format_double(r.value), format_double(r.residual), coeffs});
}

inline void write_csv(std::ostream& os, const QuadRule& rule) {
  os << "# weight_id: " << rule.weight_id << '\n';
  os << "# exactness: " << rule.exactness << '\n';
  write_csv_row(os, {"node", "weight"});
  for (std::size_t i = 0; i < rule.size(); ++i)
    write_csv_row(os, {format_double(rule.nodes[i]), format_double(rule.weights[i])});
}

inline QuadRule read_rule_csv(std::istream& is) {
  QuadRule rule;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.rfind("# weight_id: ", 0) == 0) {
      rule.weight_id = line.substr(13);
    } else if (line.rfind("# exactness: ", 0) == 0) {
      rule.exactness = std::stoi(line.substr(13));
    } else if (line == "node,weight") {
      header = true;
    } else if (!line.empty()) {
      const auto comma = line.find(',');
      if (!header || comma == std::string::npos) throw InvalidArgument("rule CSV: malformed line '" + line + "'");
      rule.nodes.push_back(parse_double(line.substr(0, comma)));
      rule.weights.push_back(parse_double(line.substr(comma + 1)));
    }
  }
  return rule;
}

}  // namespace markovsharp
