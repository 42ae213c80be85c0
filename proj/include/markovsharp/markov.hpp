#pragma once

// Sharp Markov-type constants
//
//   gamma_n* = sup { ||P'|| / ||P|| : P of degree <= n }
//
// for the weighted L^2 norm and for the weighted Sobolev norm
//
//   ||P||_W^2 = ||P||^2 + sum_{j=1..k} lambda_j ||P^{(j)}||^2,
//
// computed in the orthonormal basis of the weight, where both norms become
// quadratic forms in the coefficient vector.

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "markovsharp/error.hpp"
#include "markovsharp/linalg.hpp"
#include "markovsharp/orthopoly.hpp"
#include "markovsharp/quadrature.hpp"
#include "markovsharp/recurrence.hpp"
#include "markovsharp/weight.hpp"

namespace markovsharp {

/// m(i, j) = integral p_j' p_i w, shape n x (n+1): column j holds the
/// coefficients of p_j' in p_0..p_{n-1}. This is the transpose of the
/// customary b_{j,k} layout; the singular values coincide.
struct DerivativeMatrix {
  int n = 0;
  DenseMatrix m;
};

struct SobolevSpec {
  std::vector<double> lambdas;  // lambda_1 .. lambda_k, all >= 0

  int k() const { return static_cast<int>(lambdas.size()); }
  bool trivial() const {
    for (double l : lambdas)
      if (l != 0.0) return false;
    return true;
  }
  void validate(const Limits& limits = {}) const {
    for (double l : lambdas)
      if (!(l >= 0.0) || !std::isfinite(l)) throw InvalidArgument("Sobolev weights lambda_j must be finite and >= 0");
    if (k() > limits.max_k)
      throw InvalidArgument("Sobolev order k=" + std::to_string(k()) + " exceeds the cap " +
                            std::to_string(limits.max_k));
  }
};

struct SharpResult {
  int n = 0;
  double value = 0.0;
  std::vector<double> coeffs;  // extremal polynomial in p_0..p_n, unit norm
  double residual = 0.0;       // |achieved ratio - value| / value
};

inline DerivativeMatrix derivative_matrix(const RecurrenceTable& rec, const QuadRule& rule, int n) {
  if (n < 0) throw InvalidArgument("derivative_matrix: n must be >= 0");
  if (n > rec.n_max) throw InvalidArgument("derivative_matrix: recurrence table too short");
  DerivativeMatrix d;
  d.n = n;
  d.m = DenseMatrix(n, n + 1);
  if (n == 0) return d;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto t = eval_derivative_table(rec, rule.nodes[q], n, 1);
    const double w = rule.weights[q];
    for (int i = 0; i < n; ++i) {
      const double wp = w * t[0][i];
      for (int j = 0; j <= n; ++j) d.m(i, j) += wp * t[1][j];
    }
  }
  // p_j' has degree j-1, so entries with j <= i vanish in exact arithmetic.
  const double tol = 1e-11 * std::max(d.m.max_abs(), 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      if (std::abs(d.m(i, j)) > tol)
        throw NumericalFailure("derivative_matrix: quadrature insufficient (entry (" + std::to_string(i) + "," +
                               std::to_string(j) + ") = " + std::to_string(d.m(i, j)) + ")");
      d.m(i, j) = 0.0;
    }
  return d;
}

/// Matrix of the j-th derivative from degree-n coefficients to degree-(n-j)
/// coefficients, given the derivative matrix of some degree >= n. Its
/// leading blocks are the derivative matrices of lower degrees.
inline DenseMatrix derivative_power(const DenseMatrix& d, int n, int j) {
  DenseMatrix result = DenseMatrix::identity(n + 1);
  for (int s = 0; s < j; ++s) {
    const int deg = n - s;  // current polynomial degree
    if (deg <= 0) return DenseMatrix(0, n + 1);
    result = d.block(deg, deg + 1) * result;
  }
  return result;
}

/// Gram matrices of ||P'||_W^2 (a) and ||P||_W^2 (b) in the orthonormal basis.
struct SobolevForms {
  DenseMatrix a;
  DenseMatrix b;
};

inline SobolevForms sobolev_forms_from(const DenseMatrix& d, const SobolevSpec& sob, int n) {
  SobolevForms f;
  f.b = DenseMatrix::identity(n + 1);
  f.a = gram(derivative_power(d, n, 1));
  for (int j = 1; j <= sob.k(); ++j) {
    const double lambda = sob.lambdas[j - 1];
    if (lambda == 0.0) continue;
    f.b = f.b + lambda * gram(derivative_power(d, n, j));
    f.a = f.a + lambda * gram(derivative_power(d, n, j + 1));
  }
  return f;
}

/// Cached state for one weight up to a maximal degree. Derivative matrices
/// for lower degrees are leading blocks of the one at n_max, so a sweep over
/// n costs one recurrence and one quadrature pass.
class MarkovProblem {
 public:
  MarkovProblem(WeightSpec spec, int n_max, const Limits& limits = {}, StieltjesOptions opt = {})
      : spec_(make_weight(std::move(spec))), n_max_(n_max), limits_(limits) {
    if (n_max < 1) throw InvalidArgument("n must be >= 1");
    if (n_max > limits.max_n)
      throw InvalidArgument("n=" + std::to_string(n_max) + " exceeds the cap " + std::to_string(limits.max_n) +
                            " (set MARKOVSHARP_MAX_N to raise it)");
    rec_ = recurrence(spec_, n_max_, opt);
    rule_ = gauss_rule(rec_, n_max_ + 1);
    deriv_ = derivative_matrix(rec_, rule_, n_max_);
  }

  const WeightSpec& spec() const { return spec_; }
  const RecurrenceTable& recurrence_table() const { return rec_; }
  const QuadRule& rule() const { return rule_; }
  int n_max() const { return n_max_; }
  const Limits& limits() const { return limits_; }

  DerivativeMatrix derivative(int n) const {
    check_degree(n, 0);
    return {n, deriv_.m.block(n, n + 1)};
  }

  SobolevForms sobolev_forms(const SobolevSpec& sob, int n) const {
    check_degree(n, 1);
    sob.validate(limits_);
    return sobolev_forms_from(deriv_.m, sob, n);
  }

  SharpResult sharp_l2(int n) const {
    check_degree(n, 1);
    const LargestSingular s = svd_largest(derivative(n).m);
    SharpResult r;
    r.n = n;
    r.value = s.sigma;
    r.coeffs = s.right_vector;
    r.residual = residual_of(r, SobolevSpec{});
    return r;
  }

  SharpResult sharp_sobolev(const SobolevSpec& sob, int n) const {
    const SobolevForms f = sobolev_forms(sob, n);
    const GenEigenMax g = gen_sym_eigen_max(f.a, f.b);
    SharpResult r;
    r.n = n;
    r.value = std::sqrt(std::max(g.theta, 0.0));
    r.coeffs = g.vector;
    r.residual = residual_of(r, sob);
    return r;
  }

  /// (sum_{nu=1..n} nu ||p_nu'||^2)^{1/2}.
  double mirsky(int n) const {
    check_degree(n, 1);
    double s = 0.0;
    for (int nu = 1; nu <= n; ++nu) {
      double col = 0.0;
      for (int i = 0; i < nu; ++i) col += deriv_.m(i, nu) * deriv_.m(i, nu);
      s += nu * col;
    }
    return std::sqrt(s);
  }

  /// ||P^{(j)}||^2 summed with the Sobolev weights, evaluated directly from
  /// point values on the Gauss rule (exact for degree <= 2 n_max + 1).
  double sobolev_norm_squared(const std::vector<double>& coeffs, const SobolevSpec& sob, int shift) const {
    const int n = static_cast<int>(coeffs.size()) - 1;
    const int order = sob.k() + shift;
    std::vector<double> acc(order + 1, 0.0);
    for (std::size_t q = 0; q < rule_.size(); ++q) {
      const auto t = eval_derivative_table(rec_, rule_.nodes[q], n, order);
      for (int m = 0; m <= order; ++m) {
        double v = 0.0;
        for (int k = 0; k <= n; ++k) v += coeffs[k] * t[m][k];
        acc[m] += rule_.weights[q] * v * v;
      }
    }
    double s = acc[shift];
    for (int j = 1; j <= sob.k(); ++j) s += sob.lambdas[j - 1] * acc[j + shift];
    return s;
  }

 private:
  void check_degree(int n, int lowest) const {
    if (n < lowest) throw InvalidArgument("n must be >= " + std::to_string(lowest));
    if (n > n_max_) throw InvalidArgument("n exceeds the problem's n_max");
  }

  double residual_of(const SharpResult& r, const SobolevSpec& sob) const {
    if (r.value == 0.0) return 0.0;
    const double num = sobolev_norm_squared(r.coeffs, sob, 1);
    const double den = sobolev_norm_squared(r.coeffs, sob, 0);
    const double achieved = std::sqrt(num / den);
    return std::abs(achieved - r.value) / r.value;
  }

  WeightSpec spec_;
  int n_max_;
  Limits limits_;
  RecurrenceTable rec_;
  QuadRule rule_;
  DerivativeMatrix deriv_;
};

inline SharpResult sharp_constant_l2(const WeightSpec& spec, int n, const Limits& limits = {}) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  return MarkovProblem(spec, n, limits).sharp_l2(n);
}

inline SobolevForms sobolev_forms(const WeightSpec& spec, const SobolevSpec& sob, int n, const Limits& limits = {}) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  return MarkovProblem(spec, n, limits).sobolev_forms(sob, n);
}

inline SharpResult sharp_constant_sobolev(const WeightSpec& spec, const SobolevSpec& sob, int n,
                                          const Limits& limits = {}) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  return MarkovProblem(spec, n, limits).sharp_sobolev(sob, n);
}

inline double mirsky_bound(const WeightSpec& spec, int n, const Limits& limits = {}) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  return MarkovProblem(spec, n, limits).mirsky(n);
}

/// P(x) = sum_j coeffs_j p_j(x) together with the ratio it achieves.
class ExtremalPolynomial {
 public:
  ExtremalPolynomial(SharpResult res, RecurrenceTable rec, SobolevSpec sob = {})
      : res_(std::move(res)), rec_(std::move(rec)), sob_(std::move(sob)) {
    if (res_.coeffs.empty()) throw InvalidArgument("extremal_polynomial: empty coefficient vector");
    if (degree() > rec_.n_max) throw InvalidArgument("extremal_polynomial: recurrence table too short");
    const QuadRule rule = gauss_rule(rec_, degree() + 1);
    double num = 0.0, den = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto t = eval_derivative_table(rec_, rule.nodes[q], degree(), sob_.k() + 1);
      std::vector<double> v(t.size(), 0.0);
      for (std::size_t m = 0; m < t.size(); ++m)
        for (int k = 0; k <= degree(); ++k) v[m] += res_.coeffs[k] * t[m][k];
      den += rule.weights[q] * v[0] * v[0];
      num += rule.weights[q] * v[1] * v[1];
      for (int j = 1; j <= sob_.k(); ++j) {
        den += sob_.lambdas[j - 1] * rule.weights[q] * v[j] * v[j];
        num += sob_.lambdas[j - 1] * rule.weights[q] * v[j + 1] * v[j + 1];
      }
    }
    norm_ = std::sqrt(den);
    achieved_ = std::sqrt(num / den);
  }

  int degree() const { return static_cast<int>(res_.coeffs.size()) - 1; }
  double operator()(double x) const { return derivative(x, 0); }

  double derivative(double x, int order) const {
    const auto t = eval_derivative_table(rec_, x, degree(), order);
    double v = 0.0;
    for (int k = 0; k <= degree(); ++k) v += res_.coeffs[k] * t[order][k];
    return v;
  }

  double achieved_ratio() const { return achieved_; }
  double norm() const { return norm_; }
  double residual() const { return res_.value == 0.0 ? 0.0 : std::abs(achieved_ - res_.value) / res_.value; }
  const SharpResult& result() const { return res_; }

 private:
  SharpResult res_;
  RecurrenceTable rec_;
  SobolevSpec sob_;
  double norm_ = 0.0;
  double achieved_ = 0.0;
};

inline ExtremalPolynomial extremal_polynomial(const SharpResult& res, const RecurrenceTable& rec,
                                              const SobolevSpec& sob = {}) {
  return ExtremalPolynomial(res, rec, sob);
}

}  // namespace markovsharp
