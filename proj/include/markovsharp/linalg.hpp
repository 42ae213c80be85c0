#pragma once

// Dense symmetric eigen kernels sized for the problems in this library
// (matrices of order <= a few hundred).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "markovsharp/error.hpp"

namespace markovsharp {

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static DenseMatrix diagonal(const std::vector<double>& d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.front().size() : 0;
    DenseMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw InvalidArgument("ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Top-left r x c block.
  DenseMatrix block(std::size_t r, std::size_t c) const {
    DenseMatrix b(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) b(i, j) = (*this)(i, j);
    return b;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("matrix product: shape mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline std::vector<double> operator*(const DenseMatrix& a, const std::vector<double>& x) {
  if (a.cols() != x.size()) throw InvalidArgument("matrix-vector product: shape mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

inline DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("matrix sum: shape mismatch");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) += b(i, j);
  return a;
}

inline DenseMatrix operator*(double s, DenseMatrix a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) *= s;
  return a;
}

/// M^T M, the Gram matrix of the columns.
inline DenseMatrix gram(const DenseMatrix& m) {
  DenseMatrix g(m.cols(), m.cols());
  for (std::size_t i = 0; i < m.cols(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < m.rows(); ++r) s += m(r, i) * m(r, j);
      g(i, j) = s;
      g(j, i) = s;
    }
  return g;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

/// Symmetric tridiagonal matrix; offdiag has one entry fewer than diag.
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> offdiag;

  void validate() const {
    if (diag.empty()) throw InvalidArgument("tridiagonal matrix must be non-empty");
    if (offdiag.size() + 1 != diag.size())
      throw InvalidArgument("tridiagonal matrix: offdiag must have size diag.size()-1");
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : diag) m = std::max(m, std::abs(v));
    for (double v : offdiag) m = std::max(m, std::abs(v));
    return m;
  }

  DenseMatrix dense() const {
    const std::size_t n = diag.size();
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = diag[i];
    for (std::size_t i = 0; i + 1 < n; ++i) {
      m(i, i + 1) = offdiag[i];
      m(i + 1, i) = offdiag[i];
    }
    return m;
  }
};

struct TridiagEigen {
  std::vector<double> values;            // ascending
  std::vector<double> first_components;  // first entry of each unit eigenvector
  std::optional<DenseMatrix> vectors;    // columns, only when requested
};

namespace detail {

// Unit vectors are determined up to sign; make the last entry with
// non-negligible magnitude positive.
inline void fix_sign(std::vector<double>& v) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return;
  for (std::size_t i = v.size(); i-- > 0;) {
    if (std::abs(v[i]) > 1e-12 * scale) {
      if (v[i] < 0.0)
        for (double& x : v) x = -x;
      return;
    }
  }
}

inline void fix_column_sign(DenseMatrix& m, std::size_t j) {
  std::vector<double> c = m.column(j);
  fix_sign(c);
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = c[i];
}

}  // namespace detail

/// Implicit QL with Wilkinson shifts. Only the first row of the eigenvector
/// matrix is accumulated unless full_vectors is set (Golub-Welsch needs
/// nothing more).
inline TridiagEigen tridiag_eigen(const SymTridiag& t, bool full_vectors = false) {
  t.validate();
  const int n = static_cast<int>(t.diag.size());
  std::vector<double> d = t.diag;
  std::vector<double> e(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) e[i] = t.offdiag[i];

  // z holds either the full eigenvector matrix (row-major n x n) or just row 0.
  const int zrows = full_vectors ? n : 1;
  std::vector<double> z(static_cast<std::size_t>(zrows) * n, 0.0);
  if (full_vectors) {
    for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i) * n + i] = 1.0;
  } else {
    z[0] = 1.0;
  }

  constexpr int kMaxIter = 60;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxIter) throw NumericalFailure("tridiag_eigen: iteration cap exceeded");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        bool underflow = false;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < zrows; ++k) {
            double* row = &z[static_cast<std::size_t>(k) * n];
            f = row[i + 1];
            row[i + 1] = s * row[i] + c * f;
            row[i] = c * row[i] - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

  TridiagEigen out;
  out.values.resize(n);
  out.first_components.resize(n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    out.first_components[k] = z[order[k]];
  }
  if (full_vectors) {
    DenseMatrix v(n, n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) v(i, k) = z[static_cast<std::size_t>(i) * n + order[k]];
    for (int k = 0; k < n; ++k) detail::fix_column_sign(v, k);
    for (int k = 0; k < n; ++k) out.first_components[k] = v(0, k);
    out.vectors = std::move(v);
  }
  return out;
}

struct SymEigen {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // orthonormal columns
};

inline void require_symmetric(const DenseMatrix& m, const char* who) {
  if (m.rows() != m.cols()) throw InvalidArgument(std::string(who) + ": matrix is not square");
  const double tol = 1e-12 * m.max_abs();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol)
        throw InvalidArgument(std::string(who) + ": matrix is not symmetric");
}

/// Cyclic Jacobi rotations. Slow for large n but accurate to roundoff in
/// every eigenvalue, which matters because the smallest Sobolev forms are
/// badly scaled.
inline SymEigen sym_eigen(const DenseMatrix& input) {
  require_symmetric(input, "sym_eigen");
  const std::size_t n = input.rows();
  DenseMatrix a = input;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = avg;
      a(j, i) = avg;
    }
  DenseMatrix v = DenseMatrix::identity(n);

  const double total = a.frobenius();
  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-17 * total || off == 0.0) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (sweep == kMaxSweeps) throw NumericalFailure("sym_eigen: sweep cap exceeded");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  SymEigen out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    detail::fix_column_sign(out.vectors, k);
  }
  return out;
}

struct LargestSingular {
  double sigma = 0.0;
  std::vector<double> right_vector;
  bool degenerate = false;  // zero matrix: right_vector is an arbitrary unit vector
};

/// Largest singular value from the top eigenpair of M^T M. Only the top of
/// the spectrum is consumed, so squaring the condition number is harmless.
inline LargestSingular svd_largest(const DenseMatrix& m) {
  LargestSingular out;
  const std::size_t n = m.cols();
  if (n == 0) {
    out.degenerate = true;
    return out;
  }
  if (m.rows() == 0 || m.max_abs() == 0.0) {
    out.degenerate = true;
    out.right_vector.assign(n, 0.0);
    out.right_vector.back() = 1.0;
    return out;
  }
  const SymEigen eig = sym_eigen(gram(m));
  out.sigma = std::sqrt(std::max(eig.values.back(), 0.0));
  out.right_vector = eig.vectors.column(n - 1);
  return out;
}

/// Lower Cholesky factor; throws if the matrix is not positive definite.
inline DenseMatrix cholesky(const DenseMatrix& b) {
  const std::size_t n = b.rows();
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = b(j, j);
    for (std::size_t k = 0; k < j; ++k) s -= l(j, k) * l(j, k);
    if (!(s > 0.0)) throw NumericalFailure("B not positive definite");
    const double ljj = std::sqrt(s);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double t = b(i, j);
      for (std::size_t k = 0; k < j; ++k) t -= l(i, k) * l(j, k);
      l(i, j) = t / ljj;
    }
  }
  return l;
}

namespace detail {

// Solves L x = rhs in place.
inline void forward_solve(const DenseMatrix& l, std::vector<double>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x[k];
    x[i] = s / l(i, i);
  }
}

// Solves L^T x = rhs in place.
inline void backward_solve_transposed(const DenseMatrix& l, std::vector<double>& x) {
  for (std::size_t i = x.size(); i-- > 0;) {
    double s = x[i];
    for (std::size_t k = i + 1; k < x.size(); ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
}

}  // namespace detail

struct GenEigenMax {
  double theta = 0.0;
  std::vector<double> vector;  // normalized so that v^T B v = 1
};

/// max over v != 0 of (v^T A v) / (v^T B v) for symmetric A and SPD B.
inline GenEigenMax gen_sym_eigen_max(const DenseMatrix& a, const DenseMatrix& b) {
  require_symmetric(a, "gen_sym_eigen_max(A)");
  require_symmetric(b, "gen_sym_eigen_max(B)");
  if (a.rows() != b.rows()) throw InvalidArgument("gen_sym_eigen_max: A and B differ in size");
  const std::size_t n = a.rows();
  if (n == 0) throw InvalidArgument("gen_sym_eigen_max: empty matrices");
  const DenseMatrix l = cholesky(b);

  // C = L^{-1} A L^{-T}, built column by column.
  DenseMatrix x(n, n);  // X = L^{-1} A
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> col = a.column(j);
    detail::forward_solve(l, col);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = col[i];
  }
  DenseMatrix c(n, n);  // C = L^{-1} X^T
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = x(j, i);
    detail::forward_solve(l, col);
    for (std::size_t i = 0; i < n; ++i) c(i, j) = col[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (c(i, j) + c(j, i));
      c(i, j) = avg;
      c(j, i) = avg;
    }

  const SymEigen eig = sym_eigen(c);
  GenEigenMax out;
  out.theta = eig.values.back();
  out.vector = eig.vectors.column(n - 1);
  detail::backward_solve_transposed(l, out.vector);
  detail::fix_sign(out.vector);
  return out;
}

}  // namespace markovsharp
