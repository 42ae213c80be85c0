#pragma once

// Positive quadrature rules for integrals of the form  integral f(x) w(x) dx.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "markovsharp/error.hpp"
#include "markovsharp/linalg.hpp"
#include "markovsharp/orthopoly.hpp"
#include "markovsharp/weight.hpp"

namespace markovsharp {

struct QuadRule {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // strictly positive
  int exactness = -1;           // polynomial degree integrated exactly; -1 = tolerance-controlled
  std::string weight_id;

  std::size_t size() const { return nodes.size(); }
  double mass() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }
};

/// Gauss rule with m nodes (Golub-Welsch). Nodes whose weight underflows
/// to zero are dropped; they carry no information in double precision.
inline QuadRule gauss_rule(const RecurrenceTable& rec, int m) {
  if (m < 1) throw InvalidArgument("gauss_rule: need at least one node");
  if (m > static_cast<int>(rec.diag.size()))
    throw InvalidArgument("gauss_rule: recurrence table too short for " + std::to_string(m) + " nodes");
  SymTridiag t;
  t.diag.assign(rec.diag.begin(), rec.diag.begin() + m);
  t.offdiag.assign(rec.offdiag.begin(), rec.offdiag.begin() + (m - 1));
  const TridiagEigen eig = tridiag_eigen(t);

  QuadRule rule;
  rule.exactness = 2 * m - 1;
  rule.weight_id = rec.weight_id;
  for (int i = 0; i < m; ++i) {
    const double w = rec.mass * eig.first_components[i] * eig.first_components[i];
    if (w > 0.0 && std::isfinite(w)) {
      rule.nodes.push_back(eig.values[i]);
      rule.weights.push_back(w);
    }
  }
  return rule;
}

/// Sum of weights_i f(nodes_i).
template <typename F>
double integrate(const QuadRule& rule, F&& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * f(rule.nodes[i]);
  return s;
}

struct CompositeOptions {
  int refinement = 0;     // node counts are multiplied by 2^refinement
  double tail_gap = 2.0;  // distance from the outermost singularity to the tail split
};

namespace detail {

// Gauss-Jacobi rule for (1-t)^a (1+t)^b on [-1,1].
inline QuadRule standard_gauss_jacobi(double a, double b, int m) {
  return gauss_rule(jacobi_recurrence(a, b, -1.0, 1.0, m), m);
}

inline QuadRule standard_gauss_laguerre(int m) { return gauss_rule(laguerre_recurrence(0.0, m), m); }

inline int base_nodes(int degree) { return (degree + 2) / 2 + 20; }

}  // namespace detail

/// Quadrature for a (generalized) weight, split at every singular factor.
///
/// Each finite piece [l, r] gets a Gauss-Jacobi rule whose weight carries
/// the endpoint factors |x-l|^{g_l} |x-r|^{g_r} exactly; the exponential
/// and the remaining (smooth on the piece) factors enter the integrand.
/// Unbounded families are split at a point U beyond the outermost
/// singularity and the tail is mapped onto a Gauss-Laguerre rule:
///   e^{-x}   on [U, inf):    x = U + v
///   e^{-x^2} on |x| >= U:    x = +-sqrt(U^2 + v),  dx = dv / (2 sqrt(U^2+v))
/// so no truncation radius is needed. `degree` is the polynomial degree
/// the rule should integrate; accuracy is tolerance-controlled
/// (exactness = -1) and improved through options.refinement.
///
/// A weight without singular factors gets the plain Gauss rule of its
/// classical family.
inline QuadRule composite_rule(const WeightSpec& spec, int degree, CompositeOptions opt = {}) {
  if (degree < 0) throw InvalidArgument("composite_rule: degree must be >= 0");
  const int factor = 1 << std::clamp(opt.refinement, 0, 16);
  const int m = detail::base_nodes(degree) * factor;
  const std::vector<Singularity> factors = singular_factors(spec);
  const std::string id = describe(spec);

  if (factors.empty() || !spec.is_generalized()) {
    const int nodes = (degree + 2) / 2;
    QuadRule r = gauss_rule(recurrence_classical(spec, nodes), nodes);
    r.weight_id = id;
    return r;
  }

  const Base base = base_of(spec.family);
  auto exponent_at = [&](double x) {
    for (const auto& s : factors)
      if (s.location == x) return s.exponent;
    return 0.0;
  };
  // Power factors not located at l or r (smooth on the piece [l, r]).
  auto algebraic = [&](double x, double l, double r) {
    double v = spec.scale;
    for (const auto& s : factors)
      if (s.location != l && s.location != r) v *= std::pow(std::abs(x - s.location), s.exponent);
    return v;
  };

  std::vector<double> cuts;
  double split = 0.0;
  switch (base) {
    case Base::none: {
      cuts.push_back(spec.lower);
      for (const auto& s : factors)
        if (s.location > spec.lower && s.location < spec.upper) cuts.push_back(s.location);
      cuts.push_back(spec.upper);
      break;
    }
    case Base::exp_linear: {
      double outer = 0.0;
      cuts.push_back(0.0);
      for (const auto& s : factors)
        if (s.location > 0.0) {
          cuts.push_back(s.location);
          outer = s.location;
        }
      split = outer + opt.tail_gap;
      cuts.push_back(split);
      break;
    }
    case Base::exp_quadratic: {
      double outer = 0.0;
      for (const auto& s : factors) outer = std::max(outer, std::abs(s.location));
      split = outer + opt.tail_gap;
      cuts.push_back(-split);
      for (const auto& s : factors) cuts.push_back(s.location);
      cuts.push_back(split);
      break;
    }
  }

  QuadRule rule;
  rule.exactness = -1;
  rule.weight_id = id;
  auto push = [&](double x, double w) {
    if (w > 0.0 && std::isfinite(w)) {
      rule.nodes.push_back(x);
      rule.weights.push_back(w);
    }
  };

  if (base == Base::exp_quadratic) {
    const QuadRule lag = detail::standard_gauss_laguerre(m);
    const double u0 = split * split;
    for (std::size_t i = lag.size(); i-- > 0;) {
      const double u = u0 + lag.nodes[i];
      const double x = -std::sqrt(u);
      const double w = lag.weights[i] * std::exp(-u0) / (2.0 * std::sqrt(u)) * algebraic(x, kInf, kInf);
      push(x, w);
    }
  }

  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double l = cuts[p], r = cuts[p + 1];
    const double gl = exponent_at(l), gr = exponent_at(r);
    const double mid = 0.5 * (l + r), half = 0.5 * (r - l);
    const QuadRule gj = detail::standard_gauss_jacobi(gr, gl, m);
    const double jac = std::pow(half, 1.0 + gl + gr);
    for (std::size_t i = 0; i < gj.size(); ++i) {
      const double x = mid + half * gj.nodes[i];
      push(x, gj.weights[i] * jac * base_factor(base, x) * algebraic(x, l, r));
    }
  }

  if (base == Base::exp_linear) {
    const QuadRule lag = detail::standard_gauss_laguerre(m);
    for (std::size_t i = 0; i < lag.size(); ++i) {
      const double x = split + lag.nodes[i];
      // e^{-x} = e^{-split} e^{-v}; the Laguerre weight supplies e^{-v}.
      push(x, lag.weights[i] * std::exp(-split) * algebraic(x, kInf, kInf));
    }
  } else if (base == Base::exp_quadratic) {
    const QuadRule lag = detail::standard_gauss_laguerre(m);
    const double u0 = split * split;
    for (std::size_t i = 0; i < lag.size(); ++i) {
      const double u = u0 + lag.nodes[i];
      const double x = std::sqrt(u);
      const double w = lag.weights[i] * std::exp(-u0) / (2.0 * std::sqrt(u)) * algebraic(x, kInf, kInf);
      push(x, w);
    }
  }
  return rule;
}

}  // namespace markovsharp
