#pragma once

#include <cmath>
#include <vector>

#include "markovsharp/weight.hpp"

namespace testing_support {

using namespace markovsharp;

inline WeightSpec spec_of(Family f, double alpha = 0.0, double beta = 0.0, std::vector<Singularity> s = {}) {
  WeightSpec w;
  w.family = f;
  std::tie(w.lower, w.upper) = default_interval(f);
  w.alpha = alpha;
  w.beta = beta;
  w.singularities = std::move(s);
  return make_weight(w);
}

inline WeightSpec legendre() { return spec_of(Family::jacobi); }
inline WeightSpec jacobi(double a, double b) { return spec_of(Family::jacobi, a, b); }
inline WeightSpec laguerre(double a) { return spec_of(Family::laguerre, a); }
inline WeightSpec hermite() { return spec_of(Family::hermite); }
inline WeightSpec gen_hermite(double a, std::vector<Singularity> s = {}) {
  return spec_of(Family::gen_hermite, a, 0.0, std::move(s));
}
inline WeightSpec gen_laguerre(double a, std::vector<Singularity> s = {}) {
  return spec_of(Family::gen_laguerre, a, 0.0, std::move(s));
}
inline WeightSpec gen_jacobi(std::vector<Singularity> s, double a = 0.0, double b = 0.0) {
  return spec_of(Family::gen_jacobi, a, b, std::move(s));
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Tanh-sinh quadrature on [l, r]. f receives x together with the distances
// x - l and r - x computed without cancellation, so integrable endpoint
// singularities can be evaluated accurately.
template <typename F>
double tanh_sinh(F&& f, double l, double r, double h = 1.0 / 64.0, double t_max = 6.5) {
  const double half = 0.5 * (r - l);
  const double pi2 = 0.5 * 3.14159265358979323846;
  double sum = 0.0;
  const int steps = static_cast<int>(t_max / h);
  for (int i = -steps; i <= steps; ++i) {
    const double t = i * h;
    const double u = pi2 * std::sinh(t);
    const double c = std::cosh(u);
    const double w = half * pi2 * std::cosh(t) / (c * c);
    // 1 - tanh(u) = 2 / (e^{2u} + 1), 1 + tanh(u) = 2 / (e^{-2u} + 1)
    const double dl = half * 2.0 / (std::exp(-2.0 * u) + 1.0);
    const double dr = half * 2.0 / (std::exp(2.0 * u) + 1.0);
    if (dl <= 0.0 || dr <= 0.0 || w == 0.0) continue;
    const double x = u < 0 ? l + dl : r - dr;
    sum += w * f(x, dl, dr);
  }
  return sum * h;
}

// integral of g(x) w(x) over a finite-interval (generalized) Jacobi weight,
// split at every singular factor and integrated piecewise with tanh-sinh.
template <typename G>
double reference_integral(const WeightSpec& w, G&& g) {
  std::vector<double> cuts{w.lower};
  const auto factors = singular_factors(w);
  for (const auto& s : factors)
    if (s.location > w.lower && s.location < w.upper) cuts.push_back(s.location);
  cuts.push_back(w.upper);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double l = cuts[p], r = cuts[p + 1];
    total += tanh_sinh(
        [&](double x, double dl, double dr) {
          double v = w.scale * g(x);
          for (const auto& s : factors) {
            const double d = s.location == l ? dl : s.location == r ? dr : std::abs(x - s.location);
            v *= std::pow(d, s.exponent);
          }
          return v;
        },
        l, r);
  }
  return total;
}

// sup ||P'|| / ||P|| over degree <= n for a finite-interval weight, from the
// Rayleigh quotient assembled in a Legendre basis by tanh-sinh quadrature and
// maximized by power iteration. Shares no code with the library's solver.
inline double brute_force_sharp(const WeightSpec& w, int n, int iterations = 100000) {
  const int size = n + 1;
  const double mid = 0.5 * (w.lower + w.upper), half = 0.5 * (w.upper - w.lower);
  auto basis = [&](double x, std::vector<double>& p, std::vector<double>& dp) {
    const double t = (x - mid) / half;
    p.assign(size, 0.0);
    dp.assign(size, 0.0);
    p[0] = 1.0;
    if (size > 1) p[1] = t;
    for (int k = 1; k + 1 < size; ++k) p[k + 1] = ((2 * k + 1) * t * p[k] - k * p[k - 1]) / (k + 1);
    if (size > 1) dp[1] = 1.0;
    for (int k = 1; k + 1 < size; ++k) dp[k + 1] = dp[k - 1] + (2 * k + 1) * p[k];
    for (double& v : dp) v /= half;
  };
  std::vector<double> g(size * size), h(size * size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j <= i; ++j) {
      std::vector<double> p, dp;
      g[i * size + j] = g[j * size + i] = reference_integral(w, [&](double x) {
        basis(x, p, dp);
        return p[i] * p[j];
      });
      h[i * size + j] = h[j * size + i] = reference_integral(w, [&](double x) {
        basis(x, p, dp);
        return dp[i] * dp[j];
      });
    }
  // G = L L^T
  std::vector<double> l(size * size, 0.0);
  for (int j = 0; j < size; ++j) {
    double d = g[j * size + j];
    for (int k = 0; k < j; ++k) d -= l[j * size + k] * l[j * size + k];
    l[j * size + j] = std::sqrt(d);
    for (int i = j + 1; i < size; ++i) {
      double s = g[i * size + j];
      for (int k = 0; k < j; ++k) s -= l[i * size + k] * l[j * size + k];
      l[i * size + j] = s / l[j * size + j];
    }
  }
  auto solve_lower = [&](std::vector<double>& x) {
    for (int i = 0; i < size; ++i) {
      for (int k = 0; k < i; ++k) x[i] -= l[i * size + k] * x[k];
      x[i] /= l[i * size + i];
    }
  };
  auto solve_upper = [&](std::vector<double>& x) {
    for (int i = size; i-- > 0;) {
      for (int k = i + 1; k < size; ++k) x[i] -= l[k * size + i] * x[k];
      x[i] /= l[i * size + i];
    }
  };
  // C = L^{-1} H L^{-T}, assembled once.
  std::vector<double> c(size * size);
  for (int j = 0; j < size; ++j) {
    std::vector<double> e(size, 0.0);
    e[j] = 1.0;
    solve_upper(e);
    std::vector<double> he(size, 0.0);
    for (int i = 0; i < size; ++i)
      for (int k = 0; k < size; ++k) he[i] += h[i * size + k] * e[k];
    solve_lower(he);
    for (int i = 0; i < size; ++i) c[i * size + j] = he[i];
  }
  std::vector<double> v(size, 1.0), next(size);
  double theta = 0.0;
  for (int it = 0; it < iterations; ++it) {
    for (int i = 0; i < size; ++i) {
      double s = 0.0;
      for (int k = 0; k < size; ++k) s += c[i * size + k] * v[k];
      next[i] = s;
    }
    double nv = 0.0, dot = 0.0;
    for (int i = 0; i < size; ++i) {
      nv += next[i] * next[i];
      dot += next[i] * v[i];
    }
    nv = std::sqrt(nv);
    double vv = 0.0;
    for (double x : v) vv += x * x;
    theta = dot / vv;
    for (int i = 0; i < size; ++i) v[i] = next[i] / nv;
  }
  return std::sqrt(theta);
}

}  // namespace testing_support
