#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "markovsharp/linalg.hpp"

using namespace markovsharp;

namespace {

DenseMatrix random_matrix(std::size_t r, std::size_t c, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> z;
  DenseMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = z(gen);
  return m;
}

DenseMatrix random_symmetric(std::size_t n, unsigned seed) {
  DenseMatrix m = random_matrix(n, n, seed);
  return 0.5 * (m + m.transpose());
}

// Largest eigenvalue of a positive semidefinite matrix by power iteration.
double power_iteration(const DenseMatrix& a, int iters) {
  std::vector<double> v(a.rows(), 1.0);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> w = a * v;
    lambda = norm2(w) / norm2(v);
    const double s = norm2(w);
    for (double& x : w) x /= s;
    v = w;
  }
  return lambda;
}

}  // namespace

TEST(TridiagEigen, TwoByTwoHasClosedFormEigenvalues) {
  SymTridiag t{{0.0, 0.0}, {1.0}};
  const TridiagEigen e = tridiag_eigen(t);
  EXPECT_NEAR(e.values[0], -1.0, 1e-15);
  EXPECT_NEAR(e.values[1], 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.first_components[0]), std::sqrt(0.5), 1e-15);
}

TEST(TridiagEigen, DiagonalMatrixIsSortedAscending) {
  SymTridiag t{{3.0, -1.0, 2.0}, {0.0, 0.0}};
  const TridiagEigen e = tridiag_eigen(t);
  EXPECT_DOUBLE_EQ(e.values[0], -1.0);
  EXPECT_DOUBLE_EQ(e.values[1], 2.0);
  EXPECT_DOUBLE_EQ(e.values[2], 3.0);
}

TEST(TridiagEigen, RejectsMismatchedSizes) {
  SymTridiag t{{1.0, 2.0}, {1.0, 1.0}};
  EXPECT_THROW(tridiag_eigen(t), InvalidArgument);
}

TEST(TridiagEigen, TraceAndVectorsAreConsistent) {
  std::mt19937 gen(7);
  std::normal_distribution<double> z;
  SymTridiag t;
  for (int i = 0; i < 30; ++i) t.diag.push_back(z(gen));
  for (int i = 0; i < 29; ++i) t.offdiag.push_back(std::abs(z(gen)) + 0.05);
  const TridiagEigen e = tridiag_eigen(t, true);
  double trace = 0.0, sum = 0.0;
  for (double d : t.diag) trace += d;
  for (double v : e.values) sum += v;
  EXPECT_NEAR(sum, trace, 1e-12);
  const DenseMatrix& v = *e.vectors;
  const DenseMatrix vtv = gram(v);
  for (std::size_t i = 0; i < vtv.rows(); ++i)
    for (std::size_t j = 0; j < vtv.cols(); ++j) EXPECT_NEAR(vtv(i, j), i == j ? 1.0 : 0.0, 1e-12);
  for (std::size_t k = 0; k < v.cols(); ++k) EXPECT_DOUBLE_EQ(e.first_components[k], v(0, k));
}

TEST(SymEigen, ResidualAndOrthogonality) {
  const DenseMatrix a = random_symmetric(40, 3);
  const SymEigen e = sym_eigen(a);
  for (std::size_t k = 0; k < 40; ++k) {
    std::vector<double> v = e.vectors.column(k);
    std::vector<double> av = a * v;
    for (std::size_t i = 0; i < av.size(); ++i) av[i] -= e.values[k] * v[i];
    EXPECT_LT(norm2(av), 1e-12 * a.frobenius());
    if (k > 0) EXPECT_LE(e.values[k - 1], e.values[k]);
  }
}

TEST(SymEigen, SignConventionMakesLastComponentPositive) {
  const DenseMatrix a = random_symmetric(6, 11);
  const SymEigen e = sym_eigen(a);
  for (std::size_t k = 0; k < 6; ++k) {
    const auto v = e.vectors.column(k);
    for (std::size_t i = v.size(); i-- > 0;)
      if (std::abs(v[i]) > 1e-12) {
        EXPECT_GT(v[i], 0.0);
        break;
      }
  }
}

TEST(SymEigen, RejectsNonSymmetricInput) {
  DenseMatrix a = DenseMatrix::identity(3);
  a(0, 2) = 1.0;
  EXPECT_THROW(sym_eigen(a), InvalidArgument);
}

TEST(SvdLargest, MatchesPowerIteration) {
  for (unsigned seed : {1u, 2u, 3u}) {
    const DenseMatrix m = random_matrix(12, 13, seed);
    const LargestSingular s = svd_largest(m);
    EXPECT_NEAR(s.sigma * s.sigma, power_iteration(gram(m), 5000), 1e-9 * s.sigma * s.sigma);
    EXPECT_NEAR(norm2(s.right_vector), 1.0, 1e-13);
  }
}

TEST(SvdLargest, RankOneMatrix) {
  // u v^T with |u| = 2, |v| = 3 has sigma = 6.
  DenseMatrix m(2, 3);
  const double u[2] = {2.0, 0.0};
  const double v[3] = {1.0, 2.0, 2.0};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = u[i] * v[j];
  const LargestSingular s = svd_largest(m);
  EXPECT_NEAR(s.sigma, 6.0, 1e-14);
  EXPECT_NEAR(s.right_vector[0], 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(s.right_vector[2], 2.0 / 3.0, 1e-14);
}

TEST(SvdLargest, ZeroMatrixIsDegenerate) {
  const LargestSingular s = svd_largest(DenseMatrix(1, 2));
  EXPECT_TRUE(s.degenerate);
  EXPECT_EQ(s.sigma, 0.0);
  EXPECT_EQ(s.right_vector.size(), 2u);
}

TEST(Cholesky, ReconstructsMatrix) {
  DenseMatrix m = random_matrix(8, 8, 5);
  DenseMatrix b = gram(m);
  for (int i = 0; i < 8; ++i) b(i, i) += 0.5;
  const DenseMatrix l = cholesky(b);
  const DenseMatrix llt = l * l.transpose();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) EXPECT_NEAR(llt(i, j), b(i, j), 1e-12 * b.max_abs());
}

TEST(Cholesky, RejectsIndefiniteMatrix) {
  const DenseMatrix b = DenseMatrix::diagonal({1.0, -1.0});
  EXPECT_THROW(cholesky(b), NumericalFailure);
}

TEST(GenEigenMax, IdentityMetricReducesToOrdinaryEigenproblem) {
  const DenseMatrix a = random_symmetric(10, 9);
  const GenEigenMax g = gen_sym_eigen_max(a, DenseMatrix::identity(10));
  EXPECT_NEAR(g.theta, sym_eigen(a).values.back(), 1e-12);
}

TEST(GenEigenMax, TwoByTwoDeskCase) {
  // A = diag(0, 2), B = diag(1, 2): max of 2 y^2 / (x^2 + 2 y^2) is 1.
  const GenEigenMax g = gen_sym_eigen_max(DenseMatrix::diagonal({0.0, 2.0}), DenseMatrix::diagonal({1.0, 2.0}));
  EXPECT_NEAR(g.theta, 1.0, 1e-14);
  EXPECT_NEAR(g.vector[0], 0.0, 1e-14);
  EXPECT_NEAR(2.0 * g.vector[1] * g.vector[1], 1.0, 1e-14);
}

TEST(GenEigenMax, ResidualAndNormalization) {
  const DenseMatrix a = random_symmetric(15, 21);
  DenseMatrix b = gram(random_matrix(15, 15, 22));
  for (int i = 0; i < 15; ++i) b(i, i) += 1.0;
  const GenEigenMax g = gen_sym_eigen_max(a, b);
  std::vector<double> av = a * g.vector;
  const std::vector<double> bv = b * g.vector;
  for (std::size_t i = 0; i < av.size(); ++i) av[i] -= g.theta * bv[i];
  EXPECT_LT(norm2(av), 1e-10 * (a.frobenius() + std::abs(g.theta) * b.frobenius()));
  EXPECT_NEAR(dot(g.vector, bv), 1.0, 1e-12);
}

TEST(TridiagEigen, OneByOne) {
  const TridiagEigen e = tridiag_eigen(SymTridiag{{2.5}, {}});
  ASSERT_EQ(e.values.size(), 1u);
  EXPECT_DOUBLE_EQ(e.values[0], 2.5);
}

TEST(TridiagEigen, LegendreJacobiMatrixGivesThreePointNodes) {
  const SymTridiag t{{0.0, 0.0, 0.0}, {1.0 / std::sqrt(3.0), 2.0 / std::sqrt(15.0)}};
  const TridiagEigen e = tridiag_eigen(t);
  EXPECT_NEAR(e.values[0], -std::sqrt(0.6), 1e-15);
  EXPECT_NEAR(e.values[1], 0.0, 1e-15);
  EXPECT_NEAR(e.values[2], std::sqrt(0.6), 1e-15);
}

TEST(SymEigen, SmallExamples) {
  EXPECT_EQ(sym_eigen(DenseMatrix::identity(3)).values, (std::vector<double>{1.0, 1.0, 1.0}));
  const auto d = sym_eigen(DenseMatrix::diagonal({1.0, 4.0, 9.0})).values;
  EXPECT_DOUBLE_EQ(d[0], 1.0);
  EXPECT_DOUBLE_EQ(d[1], 4.0);
  EXPECT_DOUBLE_EQ(d[2], 9.0);
  const auto t = sym_eigen(DenseMatrix::from_rows({{2.0, 1.0}, {1.0, 2.0}})).values;
  EXPECT_NEAR(t[0], 1.0, 1e-15);
  EXPECT_NEAR(t[1], 3.0, 1e-15);
}

TEST(SvdLargest, SmallExamples) {
  EXPECT_NEAR(svd_largest(DenseMatrix::diagonal({3.0, 5.0})).sigma, 5.0, 1e-15);
  const LargestSingular s = svd_largest(DenseMatrix::from_rows({{0.0, std::sqrt(2.0)}}));
  EXPECT_NEAR(s.sigma, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(s.right_vector[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.right_vector[1]), 1.0, 1e-15);
}

TEST(SvdLargest, RandomFiveBySixMatchesPowerIteration) {
  const DenseMatrix m = random_matrix(5, 6, 42);
  const double sigma = svd_largest(m).sigma;
  EXPECT_NEAR(sigma, std::sqrt(power_iteration(gram(m), 10000)), 1e-9 * sigma);
}

TEST(SvdLargest, TransposeInvariant) {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const DenseMatrix m = random_matrix(7, 8, 100 + seed);
    const double a = svd_largest(m).sigma, b = svd_largest(m.transpose()).sigma;
    EXPECT_NEAR(a, b, 1e-12 * a);
  }
}

TEST(GenEigenMax, SmallExamples) {
  EXPECT_NEAR(gen_sym_eigen_max(DenseMatrix::diagonal({1.0, 2.0}), DenseMatrix::identity(2)).theta, 2.0, 1e-15);
  EXPECT_NEAR(gen_sym_eigen_max(DenseMatrix::diagonal({2.0, 1.0}), DenseMatrix::diagonal({1.0, 4.0})).theta, 2.0,
              1e-15);
  DenseMatrix b = gram(random_matrix(6, 6, 8));
  for (int i = 0; i < 6; ++i) b(i, i) += 1.0;
  EXPECT_NEAR(gen_sym_eigen_max(b, b).theta, 1.0, 1e-12);
}

TEST(GenEigenMax, ScalesLinearlyWithA) {
  const DenseMatrix a = random_symmetric(9, 31);
  DenseMatrix b = gram(random_matrix(9, 9, 32));
  for (int i = 0; i < 9; ++i) b(i, i) += 1.0;
  const double base = gen_sym_eigen_max(a, b).theta;
  for (double c : {1e-3, 7.0, 1e3}) EXPECT_NEAR(gen_sym_eigen_max(c * a, b).theta, c * base, 1e-12 * std::abs(c * base));
}

TEST(GenEigenMax, IdentityMetricMatchesLargestEigenvalueOnManySizes) {
  for (int n : {1, 2, 5, 17}) {
    const DenseMatrix a = random_symmetric(n, 50 + n);
    EXPECT_NEAR(gen_sym_eigen_max(a, DenseMatrix::identity(n)).theta, sym_eigen(a).values.back(), 1e-10);
  }
}
