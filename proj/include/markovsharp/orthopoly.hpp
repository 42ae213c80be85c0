#pragma once

// Orthonormal polynomials p_0, p_1, ... for a weight, represented by their
// three-term recurrence
//
//   x p_k(x) = b_k p_{k+1}(x) + a_k p_k(x) + b_{k-1} p_{k-1}(x),   p_0 = 1/sqrt(mass),
//
// with every p_k normalized to a positive leading coefficient.

#include <cmath>
#include <string>
#include <vector>

#include "markovsharp/error.hpp"
#include "markovsharp/weight.hpp"

namespace markovsharp {

/// Degree caps. Recurrence-based evaluation of high-degree orthonormal
/// polynomials in double precision degrades beyond a few dozen degrees.
struct Limits {
  int max_n = 60;
  int max_k = 4;
};

struct RecurrenceTable {
  int n_max = 0;
  std::vector<double> diag;     // a_0 .. a_{n_max}
  std::vector<double> offdiag;  // b_0 .. b_{n_max-1}, all > 0
  double mass = 0.0;            // integral of the weight
  std::string weight_id;
};

namespace detail {

inline RecurrenceTable jacobi_recurrence(double alpha, double beta, double lower, double upper, int n) {
  // Standard interval first, then the affine map x = mid + half * t.
  RecurrenceTable r;
  r.n_max = n;
  r.diag.resize(n + 1);
  r.offdiag.resize(n);
  const double ab = alpha + beta;
  for (int k = 0; k <= n; ++k) {
    if (k == 0) {
      r.diag[k] = (beta - alpha) / (ab + 2.0);
    } else {
      const double s = 2.0 * k + ab;
      r.diag[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k <= n; ++k) {
    double monic;
    if (k == 1) {
      monic = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * k + ab;
      monic = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    r.offdiag[k - 1] = std::sqrt(monic);
  }
  const double log_mass = (ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                          std::lgamma(ab + 2.0);

  const double mid = 0.5 * (lower + upper);
  const double half = 0.5 * (upper - lower);
  for (double& a : r.diag) a = mid + half * a;
  for (double& b : r.offdiag) b *= half;
  r.mass = std::exp(log_mass + (ab + 1.0) * std::log(half));
  return r;
}

inline RecurrenceTable laguerre_recurrence(double alpha, int n) {
  RecurrenceTable r;
  r.n_max = n;
  r.diag.resize(n + 1);
  r.offdiag.resize(n);
  for (int k = 0; k <= n; ++k) r.diag[k] = 2.0 * k + alpha + 1.0;
  for (int k = 0; k < n; ++k) r.offdiag[k] = std::sqrt((k + 1.0) * (k + 1.0 + alpha));
  r.mass = std::tgamma(alpha + 1.0);
  return r;
}

// |x|^mu e^{-x^2}; mu = 0 is the Hermite weight.
inline RecurrenceTable hermite_recurrence(double mu, int n) {
  RecurrenceTable r;
  r.n_max = n;
  r.diag.assign(n + 1, 0.0);
  r.offdiag.resize(n);
  for (int k = 0; k < n; ++k) {
    const int m = k + 1;
    r.offdiag[k] = std::sqrt((m + ((m % 2) ? mu : 0.0)) / 2.0);
  }
  r.mass = std::tgamma((mu + 1.0) / 2.0);
  return r;
}

}  // namespace detail

/// Closed-form recurrence for weights equivalent to a classical family.
/// Throws InvalidArgument for generalized weights that are not; those go
/// through the discretized Stieltjes procedure instead.
inline RecurrenceTable recurrence_classical(const WeightSpec& spec, int n) {
  if (n < 0) throw InvalidArgument("recurrence_classical: n must be >= 0");
  const auto c = classical_equivalent(spec);
  if (!c)
    throw InvalidArgument("recurrence_classical: " + describe(spec) +
                          " has no closed-form recurrence; use recurrence_stieltjes");
  RecurrenceTable r;
  switch (c->family) {
    case Family::jacobi: r = detail::jacobi_recurrence(c->alpha, c->beta, c->lower, c->upper, n); break;
    case Family::laguerre: r = detail::laguerre_recurrence(c->alpha, n); break;
    case Family::hermite: r = detail::hermite_recurrence(0.0, n); break;
    case Family::gen_hermite: r = detail::hermite_recurrence(c->alpha, n); break;
    default: throw InvalidArgument("recurrence_classical: unsupported family");
  }
  r.mass *= spec.scale;
  r.weight_id = describe(spec);
  return r;
}

/// p_0(x) .. p_n(x).
inline std::vector<double> eval_orthonormal(const RecurrenceTable& rec, double x, int n) {
  if (n < 0 || n > rec.n_max) throw InvalidArgument("eval_orthonormal: degree out of range");
  std::vector<double> p(n + 1);
  p[0] = 1.0 / std::sqrt(rec.mass);
  if (n >= 1) p[1] = (x - rec.diag[0]) * p[0] / rec.offdiag[0];
  for (int k = 1; k < n; ++k)
    p[k + 1] = ((x - rec.diag[k]) * p[k] - rec.offdiag[k - 1] * p[k - 1]) / rec.offdiag[k];
  return p;
}

/// Table of derivatives: result[m][k] = p_k^{(m)}(x) for m = 0..order,
/// k = 0..n, from the differentiated recurrence
///   b_k p_{k+1}^{(m)} = (x - a_k) p_k^{(m)} + m p_k^{(m-1)} - b_{k-1} p_{k-1}^{(m)}.
inline std::vector<std::vector<double>> eval_derivative_table(const RecurrenceTable& rec, double x, int n,
                                                              int order) {
  if (order < 0) throw InvalidArgument("eval_derivative_table: order must be >= 0");
  std::vector<std::vector<double>> t;
  t.push_back(eval_orthonormal(rec, x, n));
  for (int m = 1; m <= order; ++m) {
    const auto& lower = t[m - 1];
    std::vector<double> d(n + 1, 0.0);
    if (n >= 1) d[1] = m * lower[0] / rec.offdiag[0];
    for (int k = 1; k < n; ++k)
      d[k + 1] = ((x - rec.diag[k]) * d[k] + m * lower[k] - rec.offdiag[k - 1] * d[k - 1]) / rec.offdiag[k];
    t.push_back(std::move(d));
  }
  return t;
}

/// p_0'(x) .. p_n'(x).
inline std::vector<double> eval_derivatives(const RecurrenceTable& rec, double x, int n) {
  return eval_derivative_table(rec, x, n, 1)[1];
}

}  // namespace markovsharp
