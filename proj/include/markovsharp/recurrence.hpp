#pragma once

// Recurrence coefficients for weights without a closed form, by the
// discretized Stieltjes procedure on a composite rule.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "markovsharp/error.hpp"
#include "markovsharp/orthopoly.hpp"
#include "markovsharp/quadrature.hpp"
#include "markovsharp/weight.hpp"

namespace markovsharp {

/// Orthonormal recurrence of the discrete measure sum_i W_i delta(x - x_i).
/// When the rule integrates polynomials of degree <= 2n+1 against w
/// accurately, the result approximates the recurrence of w.
inline RecurrenceTable recurrence_stieltjes(const WeightSpec& spec, const QuadRule& rule, int n) {
  if (n < 0) throw InvalidArgument("recurrence_stieltjes: n must be >= 0");
  const std::size_t count = rule.size();
  if (count < static_cast<std::size_t>(n) + 1)
    throw InvalidArgument("recurrence_stieltjes: rule has fewer nodes than n+1");

  RecurrenceTable rec;
  rec.n_max = n;
  rec.weight_id = describe(spec);
  rec.diag.resize(n + 1);
  rec.offdiag.resize(n);
  rec.mass = rule.mass();
  if (!(rec.mass > 0.0)) throw NumericalFailure("recurrence_stieltjes: quadrature insufficient (zero mass)");

  // Vectors are kept as sqrt(W_i) p_k(x_i), which are orthonormal in R^count.
  std::vector<double> prev(count, 0.0), cur(count), next(count);
  for (std::size_t i = 0; i < count; ++i) cur[i] = std::sqrt(rule.weights[i] / rec.mass);

  for (int k = 0; k <= n; ++k) {
    double a = 0.0;
    for (std::size_t i = 0; i < count; ++i) a += rule.nodes[i] * cur[i] * cur[i];
    rec.diag[k] = a;
    if (k == n) break;
    const double b_prev = k > 0 ? rec.offdiag[k - 1] : 0.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      next[i] = (rule.nodes[i] - a) * cur[i] - b_prev * prev[i];
      ss += next[i] * next[i];
    }
    const double b = std::sqrt(ss);
    const double scale = std::abs(a) + b_prev;
    if (!(b > 1e-13 * scale) || !std::isfinite(b))
      throw NumericalFailure("recurrence_stieltjes: quadrature insufficient (offdiag lost positivity at k=" +
                             std::to_string(k) + ")");
    rec.offdiag[k] = b;
    for (std::size_t i = 0; i < count; ++i) next[i] /= b;
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return rec;
}

struct StieltjesOptions {
  double tolerance = 1e-12;
  int max_refinements = 6;
  double tail_gap = 2.0;
};

/// Largest change between two tables, relative to max(|entry|, b_scale),
/// where b_scale is the largest off-diagonal. Diagonal entries that vanish
/// by symmetry are compared on the scale of the matrix, not of themselves.
inline double recurrence_change(const RecurrenceTable& a, const RecurrenceTable& b) {
  double scale = 0.0;
  for (double v : b.offdiag) scale = std::max(scale, std::abs(v));
  double change = std::abs(a.mass - b.mass) / std::abs(b.mass);
  for (std::size_t k = 0; k < b.diag.size(); ++k)
    change = std::max(change, std::abs(a.diag[k] - b.diag[k]) / std::max(std::abs(b.diag[k]), scale));
  for (std::size_t k = 0; k < b.offdiag.size(); ++k)
    change = std::max(change, std::abs(a.offdiag[k] - b.offdiag[k]) / std::max(std::abs(b.offdiag[k]), scale));
  return change;
}

/// Stieltjes on composite rules of doubling density until two successive
/// tables agree to opt.tolerance.
inline RecurrenceTable recurrence_stabilized(const WeightSpec& spec, int n, StieltjesOptions opt = {}) {
  const int degree = 2 * n + 1;
  CompositeOptions copt;
  copt.tail_gap = opt.tail_gap;
  RecurrenceTable previous = recurrence_stieltjes(spec, composite_rule(spec, degree, copt), n);
  double change = 0.0;
  for (int level = 1; level <= opt.max_refinements; ++level) {
    copt.refinement = level;
    RecurrenceTable current = recurrence_stieltjes(spec, composite_rule(spec, degree, copt), n);
    change = recurrence_change(previous, current);
    if (change <= opt.tolerance) return current;
    previous = std::move(current);
  }
  throw NumericalFailure("recurrence_stieltjes: no agreement to " + std::to_string(opt.tolerance) + " after " +
                         std::to_string(opt.max_refinements) + " refinements (last change " +
                         std::to_string(change) + ")");
}

/// Closed form when one exists, otherwise stabilized Stieltjes.
inline RecurrenceTable recurrence(const WeightSpec& spec, int n, StieltjesOptions opt = {}) {
  if (classical_equivalent(spec)) return recurrence_classical(spec, n);
  return recurrence_stabilized(spec, n, opt);
}

}  // namespace markovsharp
