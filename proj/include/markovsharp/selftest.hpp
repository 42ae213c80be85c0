#pragma once

// Kernel self-checks: quadrature exactness, orthonormality, eigen and SVD
// residuals, and the Gamma-ratio limit.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "markovsharp/bounds.hpp"
#include "markovsharp/linalg.hpp"
#include "markovsharp/orthopoly.hpp"
#include "markovsharp/quadrature.hpp"
#include "markovsharp/recurrence.hpp"
#include "markovsharp/weight.hpp"

namespace markovsharp {

struct SuiteResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // largest observed error, compared with tolerance
  double tolerance = 0.0;
  std::string detail;
};

struct SelftestOptions {
  bool perturb_rule = false;  // negative control: scale one quadrature weight by 1.01
  unsigned seed = 20240611u;
};

namespace detail {

inline std::vector<WeightSpec> selftest_weights() {
  std::vector<WeightSpec> out;
  auto add = [&](Family f, double alpha, double beta) {
    WeightSpec w;
    w.family = f;
    std::tie(w.lower, w.upper) = default_interval(f);
    w.alpha = alpha;
    w.beta = beta;
    out.push_back(make_weight(w));
  };
  add(Family::jacobi, 0.0, 0.0);
  add(Family::jacobi, -0.5, -0.5);
  add(Family::jacobi, 1.0, 2.5);
  add(Family::laguerre, 0.0, 0.0);
  add(Family::laguerre, 1.5, 0.0);
  add(Family::hermite, 0.0, 0.0);
  add(Family::gen_hermite, 2.0, 0.0);
  return out;
}

inline WeightSpec selftest_generalized_weight() {
  WeightSpec w;
  w.family = Family::gen_jacobi;
  w.singularities = {{0.25, 0.5}};
  return make_weight(w);
}

inline SuiteResult finish(SuiteResult r) {
  r.pass = r.worst <= r.tolerance;
  return r;
}

}  // namespace detail

/// Gauss rules with m nodes against the exact value integral sum c_k p_k w = c_0 sqrt(mass)
/// for random coefficients up to degree 2m-1, relative to sqrt(mass) |c|_1.
inline SuiteResult selftest_quadrature(const SelftestOptions& opt = {}) {
  SuiteResult r{"quadrature exactness", false, 0.0, 1e-11, ""};
  std::mt19937 gen(opt.seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (const WeightSpec& w : detail::selftest_weights()) {
    for (int m : {1, 2, 5, 10, 20}) {
      const RecurrenceTable rec = recurrence_classical(w, 2 * m);
      QuadRule rule = gauss_rule(rec, m);
      if (opt.perturb_rule) rule.weights[rule.size() / 2] *= 1.01;
      std::vector<double> c(2 * m);
      double l1 = 0.0;
      for (double& v : c) {
        v = coef(gen);
        l1 += std::abs(v);
      }
      const double got = integrate(rule, [&](double x) {
        const auto p = eval_orthonormal(rec, x, 2 * m - 1);
        double s = 0.0;
        for (int k = 0; k < 2 * m; ++k) s += c[k] * p[k];
        return s;
      });
      const double exact = c[0] * std::sqrt(rec.mass);
      const double err = std::abs(got - exact) / (std::sqrt(rec.mass) * l1);
      if (err > r.worst) {
        r.worst = err;
        r.detail = describe(w) + ", m=" + std::to_string(m);
      }
    }
  }
  return detail::finish(r);
}

/// Gram matrix of p_0..p_n on an independent rule: Gauss rules for
/// classical weights, a refined composite rule for a generalized one.
inline SuiteResult selftest_orthonormality(const SelftestOptions& opt = {}) {
  SuiteResult r{"orthonormality", false, 0.0, 1e-10, ""};
  auto gram_error = [&](const RecurrenceTable& rec, QuadRule rule, int n, const std::string& label) {
    if (opt.perturb_rule) rule.weights[rule.size() / 2] *= 1.01;
    DenseMatrix g(n + 1, n + 1);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto p = eval_orthonormal(rec, rule.nodes[q], n);
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) g(i, j) += rule.weights[q] * p[i] * p[j];
    }
    double err = 0.0;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) err = std::max(err, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
    if (err > r.worst) {
      r.worst = err;
      r.detail = label + ", n=" + std::to_string(n);
    }
  };
  for (const WeightSpec& w : detail::selftest_weights())
    for (int n : {5, 20, 40}) {
      const RecurrenceTable rec = recurrence_classical(w, 2 * n + 2);
      gram_error(rec, gauss_rule(rec, 2 * n + 2), n, describe(w));
    }
  const WeightSpec g = detail::selftest_generalized_weight();
  const int n = 20;
  const RecurrenceTable rec = recurrence_stabilized(g, n);
  CompositeOptions copt;
  copt.refinement = 3;
  gram_error(rec, composite_rule(g, 2 * n + 1, copt), n, describe(g));
  return detail::finish(r);
}

/// Residuals ||A v - lambda v|| / ||A|| of the eigen, SVD and generalized
/// eigen solvers on seeded random matrices.
inline SuiteResult selftest_eigen(const SelftestOptions& opt = {}) {
  SuiteResult r{"eigen/SVD residuals", false, 0.0, 1e-10, ""};
  std::mt19937 gen(opt.seed + 1);
  std::normal_distribution<double> z(0.0, 1.0);
  auto note = [&](double err, const std::string& label) {
    if (err > r.worst) {
      r.worst = err;
      r.detail = label;
    }
  };
  auto residual = [](const DenseMatrix& a, const std::vector<double>& v, double lambda, const DenseMatrix* b) {
    std::vector<double> av = a * v;
    const std::vector<double> bv = b ? (*b) * v : v;
    for (std::size_t i = 0; i < av.size(); ++i) av[i] -= lambda * bv[i];
    const double scale = a.frobenius() + std::abs(lambda) * (b ? b->frobenius() : 1.0);
    return norm2(av) / (scale * norm2(v));
  };
  for (int n : {1, 3, 8, 25, 60}) {
    DenseMatrix s(n, n), m(n, n + 1), b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = z(gen);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= n; ++j) m(i, j) = z(gen);
    b = gram(m.transpose());
    for (int i = 0; i < n; ++i) b(i, i) += 1.0;

    const SymEigen e = sym_eigen(s);
    for (int k = 0; k < n; ++k)
      note(residual(s, e.vectors.column(k), e.values[k], nullptr), "sym_eigen n=" + std::to_string(n));

    SymTridiag t;
    for (int i = 0; i < n; ++i) t.diag.push_back(z(gen));
    for (int i = 0; i + 1 < n; ++i) t.offdiag.push_back(std::abs(z(gen)) + 0.1);
    const TridiagEigen te = tridiag_eigen(t, true);
    const DenseMatrix td = t.dense();
    for (int k = 0; k < n; ++k)
      note(residual(td, te.vectors->column(k), te.values[k], nullptr), "tridiag_eigen n=" + std::to_string(n));

    const LargestSingular sv = svd_largest(m);
    const DenseMatrix mtm = gram(m);
    note(residual(mtm, sv.right_vector, sv.sigma * sv.sigma, nullptr), "svd_largest n=" + std::to_string(n));

    const GenEigenMax ge = gen_sym_eigen_max(s, b);
    note(residual(s, ge.vector, ge.theta, &b), "gen_sym_eigen_max n=" + std::to_string(n));
  }
  return detail::finish(r);
}

/// Gamma(n+1/2)/(Gamma(n) n^{1/2}) must approach 1 monotonically.
inline SuiteResult selftest_gamma_ratio() {
  SuiteResult r{"gamma ratio limit", false, 0.0, 0.0, ""};
  const std::vector<int> ns{10, 100, 1000, 10000};
  const auto ratios = gamma_ratio_convergence(0.5, 0.0, ns);
  double prev = std::abs(ratios[0] - 1.0);
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    const double d = std::abs(ratios[i] - 1.0);
    if (!(d < prev)) {
      r.worst = std::max(r.worst, d - prev + 1.0);  // any non-decrease fails
      r.detail = "not decreasing at n=" + std::to_string(ns[i]);
    }
    prev = d;
  }
  r.detail = r.detail.empty() ? "|ratio - 1| at n=10000: " + format_number(prev) : r.detail;
  return detail::finish(r);
}

inline std::vector<SuiteResult> run_selftest(const SelftestOptions& opt = {}) {
  return {selftest_quadrature(opt), selftest_orthonormality(opt), selftest_eigen(opt), selftest_gamma_ratio()};
}

}  // namespace markovsharp
