#pragma once

// Weight families: classical Jacobi/Laguerre/Hermite and their generalized
// versions carrying extra singular factors |x - c_j|^{gamma_j}.
//
//   jacobi       (b-x)^alpha (x-a)^beta                           on [a,b]
//   laguerre     x^alpha e^{-x}                                   on [0,inf)
//   hermite      e^{-x^2}                                         on R
//   gen_jacobi   (b-x)^alpha (x-a)^beta prod |x-c_j|^{gamma_j}    on [a,b]
//   gen_laguerre x^alpha prod |x-c_j|^{gamma_j} e^{-x}            on [0,inf)
//   gen_hermite  |x|^alpha prod |x-c_j|^{gamma_j} e^{-x^2}        on R
//
// Every weight is multiplied by `scale`. The bounded factor h of the
// generalized families is taken to be identically one.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "markovsharp/error.hpp"

namespace markovsharp {

enum class Family { jacobi, laguerre, hermite, gen_jacobi, gen_laguerre, gen_hermite };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::jacobi: return "jacobi";
    case Family::laguerre: return "laguerre";
    case Family::hermite: return "hermite";
    case Family::gen_jacobi: return "gen_jacobi";
    case Family::gen_laguerre: return "gen_laguerre";
    case Family::gen_hermite: return "gen_hermite";
  }
  return "unknown";
}

inline Family family_from_string(const std::string& s) {
  for (Family f : {Family::jacobi, Family::laguerre, Family::hermite, Family::gen_jacobi,
                   Family::gen_laguerre, Family::gen_hermite})
    if (s == to_string(f)) return f;
  throw InvalidArgument("unknown weight family '" + s + "'");
}

/// Exponential part of the weight.
enum class Base { none, exp_linear, exp_quadratic };

inline Base base_of(Family f) {
  switch (f) {
    case Family::jacobi:
    case Family::gen_jacobi: return Base::none;
    case Family::laguerre:
    case Family::gen_laguerre: return Base::exp_linear;
    default: return Base::exp_quadratic;
  }
}

struct Singularity {
  double location = 0.0;
  double exponent = 0.0;

  friend bool operator==(const Singularity&, const Singularity&) = default;
};

struct WeightSpec {
  Family family = Family::jacobi;
  double lower = -1.0;
  double upper = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<Singularity> singularities;
  double scale = 1.0;

  bool is_generalized() const {
    return family == Family::gen_jacobi || family == Family::gen_laguerre ||
           family == Family::gen_hermite;
  }
  bool contains(double x) const { return x >= lower && x <= upper; }

  friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Interval each family lives on (Jacobi families default to [-1,1]).
inline std::pair<double, double> default_interval(Family f) {
  switch (base_of(f)) {
    case Base::none: return {-1.0, 1.0};
    case Base::exp_linear: return {0.0, kInf};
    default: return {-kInf, kInf};
  }
}

inline std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

/// Compact human-readable identifier used to tag rules and tables.
inline std::string describe(const WeightSpec& w) {
  std::ostringstream os;
  os << to_string(w.family) << "[" << format_number(w.lower) << "," << format_number(w.upper) << "]";
  os << "(alpha=" << format_number(w.alpha) << ",beta=" << format_number(w.beta);
  for (const auto& s : w.singularities)
    os << ",|x-" << format_number(s.location) << "|^" << format_number(s.exponent);
  if (w.scale != 1.0) os << ",scale=" << format_number(w.scale);
  os << ")";
  return os.str();
}

/// Validates a raw description; returns it unchanged when well formed.
/// Only integrability and ordering are checked here. Hypotheses that a
/// particular growth bound needs (sums of exponents) are checked by the
/// bound verifiers.
inline WeightSpec make_weight(WeightSpec raw) {
  const auto& w = raw;
  auto fail = [](const std::string& msg) { throw InvalidArgument(msg); };
  auto finite = [](double x) { return std::isfinite(x); };

  if (std::isnan(w.lower) || std::isnan(w.upper) || !(w.lower < w.upper)) fail("empty interval");
  if (!finite(w.scale) || !(w.scale > 0.0)) fail("scale must be a positive finite number");
  if (!finite(w.alpha) || !finite(w.beta)) fail("alpha and beta must be finite");

  const auto [dlo, dhi] = default_interval(w.family);
  switch (base_of(w.family)) {
    case Base::none:
      if (!finite(w.lower) || !finite(w.upper)) fail(std::string(to_string(w.family)) + ": interval must be finite");
      if (w.alpha <= -1.0 || w.beta <= -1.0) fail("non-integrable endpoint singularity (alpha, beta must exceed -1)");
      break;
    case Base::exp_linear:
      if (w.lower != dlo || w.upper != dhi) fail(std::string(to_string(w.family)) + ": interval must be [0, inf)");
      if (w.alpha <= -1.0) fail("non-integrable endpoint singularity (alpha must exceed -1)");
      if (w.beta != 0.0) fail(std::string(to_string(w.family)) + ": beta is not used and must be 0");
      break;
    case Base::exp_quadratic:
      if (w.lower != dlo || w.upper != dhi) fail(std::string(to_string(w.family)) + ": interval must be (-inf, inf)");
      if (w.beta != 0.0) fail(std::string(to_string(w.family)) + ": beta is not used and must be 0");
      if (w.family == Family::hermite && w.alpha != 0.0) fail("hermite: use gen_hermite for |x|^alpha");
      if (w.family == Family::gen_hermite && w.alpha < 0.0) fail("gen_hermite: alpha must be >= 0");
      break;
  }

  if (!w.is_generalized() && !w.singularities.empty())
    fail(std::string(to_string(w.family)) + ": singular factors need the gen_ family");

  for (std::size_t j = 0; j < w.singularities.size(); ++j) {
    const auto& s = w.singularities[j];
    if (!finite(s.location) || !finite(s.exponent)) fail("singularity entries must be finite");
    if (j > 0 && !(s.location > w.singularities[j - 1].location))
      fail("singularity locations must be strictly increasing");
    if (w.contains(s.location) && s.exponent <= -1.0)
      fail("non-integrable singularity at c=" + format_number(s.location) + " (gamma must exceed -1)");
  }
  return raw;
}

/// All power-type factors of the weight as one sorted list: the endpoint
/// exponents (alpha, beta) become factors at the endpoints, |x|^alpha of
/// gen_hermite becomes a factor at 0, and coincident locations are merged.
/// Endpoint factors with exponent 0 are dropped; listed singularities are
/// always kept, so that a zero exponent still marks a split point.
inline std::vector<Singularity> singular_factors(const WeightSpec& w) {
  std::vector<Singularity> out;
  auto add = [&](double c, double g, bool keep_zero) {
    if (g == 0.0 && !keep_zero) return;
    for (auto& s : out)
      if (s.location == c) {
        s.exponent += g;
        return;
      }
    out.push_back({c, g});
  };
  switch (base_of(w.family)) {
    case Base::none:
      add(w.lower, w.beta, false);
      add(w.upper, w.alpha, false);
      break;
    case Base::exp_linear:
    case Base::exp_quadratic:
      add(0.0, w.alpha, false);
      break;
  }
  for (const auto& s : w.singularities) add(s.location, s.exponent, true);
  std::sort(out.begin(), out.end(),
            [](const Singularity& a, const Singularity& b) { return a.location < b.location; });
  return out;
}

inline double base_factor(Base b, double x) {
  switch (b) {
    case Base::none: return 1.0;
    case Base::exp_linear: return std::exp(-x);
    default: return std::exp(-x * x);
  }
}

/// w(x); zero outside the interval.
inline double weight_value(const WeightSpec& w, double x) {
  if (!w.contains(x)) return 0.0;
  double v = w.scale * base_factor(base_of(w.family), x);
  for (const auto& s : singular_factors(w)) v *= std::pow(std::abs(x - s.location), s.exponent);
  return v;
}

/// When the weight coincides with a classical family (possibly the
/// |x|^alpha e^{-x^2} generalized Hermite weight), returns that classical
/// description. Zero exponents are ignored.
inline std::optional<WeightSpec> classical_equivalent(const WeightSpec& w) {
  std::vector<Singularity> active;
  for (const auto& s : singular_factors(w))
    if (s.exponent != 0.0) active.push_back(s);

  WeightSpec c;
  c.lower = w.lower;
  c.upper = w.upper;
  c.scale = w.scale;
  switch (base_of(w.family)) {
    case Base::none:
      c.family = Family::jacobi;
      for (const auto& s : active) {
        if (s.location == w.lower) c.beta += s.exponent;
        else if (s.location == w.upper) c.alpha += s.exponent;
        else return std::nullopt;
      }
      return c;
    case Base::exp_linear:
      c.family = Family::laguerre;
      for (const auto& s : active) {
        if (s.location == 0.0) c.alpha += s.exponent;
        else return std::nullopt;
      }
      return c;
    case Base::exp_quadratic:
      for (const auto& s : active) {
        if (s.location == 0.0) c.alpha += s.exponent;
        else return std::nullopt;
      }
      c.family = c.alpha == 0.0 ? Family::hermite : Family::gen_hermite;
      return c;
  }
  return std::nullopt;
}

}  // namespace markovsharp
