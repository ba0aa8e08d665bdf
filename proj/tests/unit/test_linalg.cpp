#include <gtest/gtest.h>

#include "ngmres/linalg.hpp"
#include "ngmres/random.hpp"

using namespace ngmres;

namespace
{

DenseMatrix mat(std::initializer_list<std::initializer_list<double>> rows)
{
  DenseMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto &row : rows)
  {
    Index j = 0;
    for (double v : row)
    {
      m(i, j++) = v;
    }
    ++i;
  }
  return m;
}

Vector vec(std::initializer_list<double> v)
{
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v)
  {
    out(i++) = x;
  }
  return out;
}

}  // namespace

TEST(Matvec, Identity)
{
  EXPECT_EQ(matvec(DenseMatrix::Identity(2, 2), vec({3, 4})), vec({3, 4}));
}

TEST(Matvec, Zero)
{
  EXPECT_EQ(matvec(DenseMatrix::Zero(2, 2), vec({1, 1})), vec({0, 0}));
}

TEST(Matvec, DiagonalDenseAndSparseAgree)
{
  const DenseMatrix d = mat({{1, 0}, {0, 2}});
  EXPECT_EQ(matvec(d, vec({1, 1})), vec({1, 2}));
  EXPECT_EQ(matvec(to_sparse(d), vec({1, 1})), vec({1, 2}));
}

TEST(Matvec, ShapeMismatchThrows)
{
  EXPECT_THROW(matvec(DenseMatrix::Identity(2, 3), vec({1, 2})), DimensionError);
  EXPECT_THROW(matvec(to_sparse(DenseMatrix::Identity(2, 3)), vec({1, 2})), DimensionError);
}

TEST(Matvec, DistributesOverAddition)
{
  Random rng(7);
  for (int trial = 0; trial < 50; ++trial)
  {
    const DenseMatrix a = rng.normal_matrix(12, 12);
    const SparseMatrix s = to_sparse(a);
    const Vector x = rng.uniform_vector(12, -1, 1);
    const Vector y = rng.uniform_vector(12, -1, 1);
    const Vector lhs = matvec(s, Vector(x + y));
    const Vector rhs = matvec(s, x) + matvec(s, y);
    EXPECT_LE((lhs - rhs).norm(), 1e-14 * (lhs.norm() + 1.0));
  }
}

TEST(Validate, RejectsNonFinite)
{
  DenseMatrix d = DenseMatrix::Identity(2, 2);
  d(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(validate(to_sparse(d)), NonFiniteError);
}

TEST(MinNormLstsq, Identity)
{
  const auto sol = min_norm_lstsq(DenseMatrix::Identity(2, 2), vec({1, 2}));
  EXPECT_NEAR(sol.coefficients(0), 1.0, 1e-15);
  EXPECT_NEAR(sol.coefficients(1), 2.0, 1e-15);
  EXPECT_EQ(sol.numerical_rank, 2);
  EXPECT_FALSE(sol.min_norm_applied);
}

TEST(MinNormLstsq, SingleColumnProjection)
{
  const auto sol = min_norm_lstsq(mat({{1}, {0}}), vec({3, 4}));
  ASSERT_EQ(sol.coefficients.size(), 1);
  EXPECT_NEAR(sol.coefficients(0), 3.0, 1e-15);
  EXPECT_NEAR(sol.residual_norm, 4.0, 1e-15);
}

TEST(MinNormLstsq, RankDeficientPicksMinimumNorm)
{
  const DenseMatrix w = mat({{1, 1}, {1, 1}});
  const Vector f = vec({2, 2});
  // Every b1 + b2 = 2 fits exactly; the grid confirms no point does better
  // and the line's shortest member is (1, 1).
  double best = std::numeric_limits<double>::infinity();
  for (double b1 = -3; b1 <= 3; b1 += 0.25)
  {
    for (double b2 = -3; b2 <= 3; b2 += 0.25)
    {
      best = std::min(best, (f - w * vec({b1, b2})).norm());
    }
  }
  EXPECT_EQ(best, 0.0);

  for (LstsqMethod method : {LstsqMethod::orthogonal, LstsqMethod::normal_equations})
  {
    const auto sol = min_norm_lstsq(w, f, default_rank_tol, method);
    EXPECT_NEAR(sol.coefficients(0), 1.0, 1e-12);
    EXPECT_NEAR(sol.coefficients(1), 1.0, 1e-12);
    EXPECT_EQ(sol.numerical_rank, 1);
    EXPECT_TRUE(sol.min_norm_applied);
    EXPECT_NEAR(sol.residual_norm, 0.0, 1e-12);
  }
}

TEST(MinNormLstsq, BeatsRandomProbes)
{
  Random rng(11);
  for (int trial = 0; trial < 20; ++trial)
  {
    const Index n = 10;
    const Index p = 1 + trial % 6;
    DenseMatrix w = rng.normal_matrix(n, p);
    if (trial % 3 == 0 && p > 1)
    {
      w.col(p - 1) = w.col(0);  // force deficiency
    }
    const Vector f = rng.uniform_vector(n, -1, 1);
    const auto sol = min_norm_lstsq(w, f);
    const double achieved = (f - w * sol.coefficients).norm();
    for (int probe = 0; probe < 1000; ++probe)
    {
      const Vector b = sol.coefficients + rng.uniform_vector(p, -1, 1);
      ASSERT_LE(achieved, (f - w * b).norm() + 1e-10 * f.norm());
    }
  }
}

TEST(MinNormLstsq, MatchesNormalEquationsOnWellConditioned)
{
  Random rng(3);
  for (int trial = 0; trial < 20; ++trial)
  {
    DenseMatrix w = rng.normal_matrix(15, 4);
    w.topRows(4) += 3.0 * DenseMatrix::Identity(4, 4);
    const Vector f = rng.uniform_vector(15, -1, 1);
    const Vector direct = (w.transpose() * w).ldlt().solve(w.transpose() * f);
    const auto qr = min_norm_lstsq(w, f);
    const auto ne = min_norm_lstsq(w, f, default_rank_tol, LstsqMethod::normal_equations);
    EXPECT_LE((qr.coefficients - direct).norm(), 1e-8 * direct.norm());
    EXPECT_LE((ne.coefficients - direct).norm(), 1e-8 * direct.norm());
  }
}

TEST(MinNormLstsq, RejectsBadInput)
{
  EXPECT_THROW(min_norm_lstsq(DenseMatrix::Identity(2, 2), vec({1, 2, 3})), DimensionError);
  EXPECT_THROW(min_norm_lstsq(DenseMatrix::Identity(2, 2), vec({1, 2}), 0.0),
               std::invalid_argument);
  EXPECT_THROW(min_norm_lstsq(DenseMatrix::Identity(2, 2),
                              vec({1, std::numeric_limits<double>::infinity()})),
               NonFiniteError);
}

TEST(SymEigExtremes, Examples)
{
  auto e = sym_eig_extremes(mat({{1, 0}, {0, 3}}));
  EXPECT_NEAR(e.min, 1.0, 1e-14);
  EXPECT_NEAR(e.max, 3.0, 1e-14);
  e = sym_eig_extremes(DenseMatrix::Identity(3, 3));
  EXPECT_NEAR(e.min, 1.0, 1e-14);
  EXPECT_NEAR(e.max, 1.0, 1e-14);
  // det([[2-l,1],[1,2-l]]) = (l-1)(l-3)
  e = sym_eig_extremes(mat({{2, 1}, {1, 2}}));
  EXPECT_NEAR(e.min, 1.0, 1e-14);
  EXPECT_NEAR(e.max, 3.0, 1e-14);
}

TEST(SymEigExtremes, RejectsNonsymmetric)
{
  EXPECT_THROW(sym_eig_extremes(mat({{1, 2}, {0, 1}})), std::invalid_argument);
}

TEST(SpectralQuantities, Diagonal)
{
  EXPECT_NEAR(spectral_norm(mat({{-5, 0}, {0, 2}})), 5.0, 1e-14);
  EXPECT_NEAR(spectral_radius(mat({{0, -1}, {1, 0}})), 1.0, 1e-14);
}
