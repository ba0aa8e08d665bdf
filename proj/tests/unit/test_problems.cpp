#include <gtest/gtest.h>

#include <sstream>

#include "ngmres/matrix_market.hpp"
#include "ngmres/problems.hpp"

using namespace ngmres;

TEST(ConvectionDiffusion, LaplacianWhenNoConvection)
{
  const Index n = 2;
  const double h = 1.0 / (n + 1);
  const Problem p = build_convection_diffusion(n, 0.0, 0.0);
  const DenseMatrix k = p.dense();
  ASSERT_EQ(k.rows(), 4);
  EXPECT_EQ(p.symmetry(), SymmetryClass::symmetric);
  for (Index i = 0; i < 4; ++i)
  {
    EXPECT_NEAR(k(i, i), 4.0 / (h * h), 1e-9);
  }
  EXPECT_EQ(relative_asymmetry(k), 0.0);
  // Grid neighbours of unknown 0 are 1 (x) and 2 (y); 3 is diagonal.
  EXPECT_NEAR(k(0, 1), -1.0 / (h * h), 1e-9);
  EXPECT_NEAR(k(0, 2), -1.0 / (h * h), 1e-9);
  EXPECT_EQ(k(0, 3), 0.0);
}

TEST(ConvectionDiffusion, SymmetricCaseIsDefinite)
{
  for (Index n : {2, 5, 8, 16})
  {
    const auto e = sym_eig_extremes(build_convection_diffusion(n, 0.0, 0.0).dense());
    EXPECT_GT(e.min, 0.0) << n;
  }
}

TEST(ConvectionDiffusion, MeshReynoldsHalfIsNonsymmetric)
{
  const Index n = 32;
  const double sigma = convection_from_mesh_reynolds(n, 0.5);
  EXPECT_NEAR(sigma / (n + 1) / 2.0, 0.5, 1e-15);
  const Problem p = build_convection_diffusion(n, sigma, sigma);
  EXPECT_EQ(p.size(), 1024);
  EXPECT_EQ(p.symmetry(), SymmetryClass::general);
  EXPECT_GT(relative_asymmetry(p.dense()), 0.1);
}

TEST(ConvectionDiffusion, NormalizedStencil)
{
  const Problem p = build_convection_diffusion(3, convection_from_mesh_reynolds(3, 0.5),
                                               convection_from_mesh_reynolds(3, 0.5),
                                               StencilScaling::normalized);
  const DenseMatrix k = p.dense();
  EXPECT_NEAR(k(4, 4), 4.0, 1e-14);
  EXPECT_NEAR(k(4, 5), -0.5, 1e-14);  // -1 + gamma (east)
  EXPECT_NEAR(k(4, 3), -1.5, 1e-14);  // -1 - gamma (west)
}

TEST(ConvectionDiffusion, RightHandSideMatchesOnes)
{
  for (StencilScaling s : {StencilScaling::physical, StencilScaling::normalized})
  {
    const Problem p = build_convection_diffusion(6, 3.0, -2.0, s);
    EXPECT_EQ(matvec(p.matrix(), ones_guess(p.size())), p.rhs());
    ASSERT_TRUE(p.exact_solution().has_value());
    EXPECT_EQ(*p.exact_solution(), ones_guess(p.size()));
  }
}

TEST(ShiftedSkew, SymmetricInputGivesIdentity)
{
  const Problem p = to_shifted_skew(build_convection_diffusion(3, 0.0, 0.0));
  EXPECT_EQ(p.dense(), DenseMatrix::Identity(9, 9));
}

TEST(ShiftedSkew, HandExample)
{
  DenseMatrix k = DenseMatrix::Zero(2, 2);
  k(0, 1) = 1.0;
  const DenseMatrix a = to_shifted_skew(to_sparse(k)).dense();
  EXPECT_EQ(a(0, 0), 1.0);
  EXPECT_EQ(a(0, 1), -0.5);
  EXPECT_EQ(a(1, 0), 0.5);
  EXPECT_EQ(a(1, 1), 1.0);
}

TEST(ShiftedSkew, SymmetricPartIsIdentity)
{
  const Index n = 32;
  const double sigma = convection_from_mesh_reynolds(n, 0.5);
  const Problem p = to_shifted_skew(build_convection_diffusion(n, sigma, sigma));
  EXPECT_EQ(p.symmetry(), SymmetryClass::shifted_skew_symmetric);
  const DenseMatrix a = p.dense();
  EXPECT_LE((a + a.transpose() - 2.0 * DenseMatrix::Identity(n * n, n * n)).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(CyclicShift, FiveByFive)
{
  const Problem p = build_cyclic_shift(5);
  DenseMatrix expected = DenseMatrix::Zero(5, 5);
  expected(0, 4) = 1.0;
  for (Index i = 1; i < 5; ++i)
  {
    expected(i, i - 1) = 1.0;
  }
  EXPECT_EQ(p.dense(), expected);
  Vector b = Vector::Zero(5);
  b(0) = 1.0;
  EXPECT_EQ(p.rhs(), b);
  Vector xstar = Vector::Zero(5);
  xstar(4) = 1.0;
  EXPECT_EQ(matvec(p.matrix(), xstar), b);
}

TEST(CyclicShift, IsAnIsometry)
{
  const Problem p = build_cyclic_shift(17);
  const Vector x = random_guess(17, 4);
  EXPECT_NEAR(matvec(p.matrix(), x).norm(), x.norm(), 1e-14);
}

TEST(ProblemConstruction, DeclaredClassIsVerified)
{
  DenseMatrix k = DenseMatrix::Identity(2, 2);
  k(0, 1) = 1.0;
  EXPECT_THROW(Problem(to_sparse(k), Vector::Ones(2), SymmetryClass::symmetric, "bad"),
               std::invalid_argument);
  EXPECT_THROW(Problem(to_sparse(k), Vector::Ones(3), SymmetryClass::general, "bad"),
               DimensionError);
}

TEST(ProblemConstruction, GeneratedProblemsPassTheirOwnClass)
{
  for (std::uint64_t seed = 0; seed < 8; ++seed)
  {
    for (SymmetryClass s : {SymmetryClass::general, SymmetryClass::symmetric,
                            SymmetryClass::shifted_skew_symmetric})
    {
      const Problem p = build_random_with_symmetry(10, s, seed);
      EXPECT_TRUE(has_symmetry(p.matrix(), p.symmetry()));
    }
  }
}

TEST(ProblemConstruction, PositiveRealShift)
{
  const Problem p = build_random_positive_real(20, 0.1, 5);
  const DenseMatrix a = p.dense();
  const auto e = sym_eig_extremes(0.5 * (a + a.transpose()));
  EXPECT_NEAR(e.min, 0.1, 1e-12);
}

TEST(ProblemConstruction, SeededGuessesRepeat)
{
  EXPECT_EQ(random_guess(50, 42), random_guess(50, 42));
  EXPECT_NE(random_guess(50, 42), random_guess(50, 43));
  EXPECT_LE(random_guess(50, 42).cwiseAbs().maxCoeff(), 1.0);
}

TEST(MatrixMarket, CoordinateIdentity)
{
  std::istringstream in("%%MatrixMarket matrix coordinate real general\n"
                        "% comment\n"
                        "2 2 2\n"
                        "1 1 1.0\n"
                        "2 2 1.0\n");
  EXPECT_EQ(to_dense(read_matrix_market(in)), DenseMatrix::Identity(2, 2));
}

TEST(MatrixMarket, SymmetricExpansion)
{
  std::istringstream in("%%MatrixMarket matrix coordinate real symmetric\n"
                        "2 2 3\n"
                        "1 1 2\n"
                        "2 1 1\n"
                        "2 2 2\n");
  DenseMatrix expected(2, 2);
  expected << 2, 1, 1, 2;
  EXPECT_EQ(to_dense(read_matrix_market(in)), expected);
}

TEST(MatrixMarket, TruncatedFileNamesLine)
{
  std::istringstream in("%%MatrixMarket matrix coordinate real general\n"
                        "2 2 2\n"
                        "1 1 1.0\n");
  try
  {
    read_matrix_market(in);
    FAIL() << "expected ParseError";
  }
  catch (const ParseError &e)
  {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(MatrixMarket, ComplexIsUnsupported)
{
  std::istringstream in("%%MatrixMarket matrix coordinate complex general\n2 2 0\n");
  EXPECT_THROW(read_matrix_market(in), UnsupportedFormat);
}

TEST(MatrixMarket, RoundTrip)
{
  const Problem p = build_convection_diffusion(4, 1.7, -0.3);
  std::stringstream buf;
  write_matrix_market(buf, p.matrix());
  EXPECT_EQ(to_dense(read_matrix_market(buf)), p.dense());

  std::stringstream vbuf;
  write_matrix_market(vbuf, p.rhs());
  const DenseMatrix v = to_dense(read_matrix_market(vbuf));
  ASSERT_EQ(v.cols(), 1);
  EXPECT_EQ(Vector(v.col(0)), p.rhs());
}
