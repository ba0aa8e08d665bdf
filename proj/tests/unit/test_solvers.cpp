#include <gtest/gtest.h>

#include <Eigen/QR>

#include "ngmres/diagnostics.hpp"
#include "ngmres/problems.hpp"
#include "ngmres/solvers.hpp"

using namespace ngmres;

namespace
{

SolveConfig config(double tol, Index max_iter)
{
  SolveConfig cfg;
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  return cfg;
}

Problem diag12()
{
  DenseMatrix a = DenseMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  Vector b(2);
  b << 1.0, 2.0;
  return Problem(to_sparse(a), b, SymmetryClass::symmetric, "diag12");
}

// min ||r0 - A z|| over z in span{r0, ..., A^{k-1} r0}, with an explicit
// monomial basis.
double krylov_residual(const DenseMatrix &a, const Vector &r0, Index k)
{
  DenseMatrix basis(r0.size(), k);
  Vector v = r0;
  for (Index j = 0; j < k; ++j)
  {
    basis.col(j) = v;
    v = a * v;
  }
  const DenseMatrix ab = a * basis;
  const Vector y = ab.completeOrthogonalDecomposition().solve(r0);
  return (r0 - ab * y).norm();
}

Problem spd8() { return build_convection_diffusion(8, 0.0, 0.0); }

}  // namespace

TEST(Gmres, IdentityConvergesInOneStep)
{
  const Problem p = build_identity(4);
  const Vector b = random_guess(4, 1);
  const Problem q(p.matrix(), b, SymmetryClass::symmetric, "eye");
  const auto t = gmres(q, zeros_guess(4), config(1e-12, 10));
  ASSERT_EQ(t.iterations(), 1);
  EXPECT_LE((t.records[1].x - b).norm(), 1e-15);
  EXPECT_EQ(t.termination, Termination::tolerance);
}

TEST(Gmres, CyclicFiveStallsThenFinishes)
{
  const Problem p = build_cyclic_shift(5);
  const auto t = gmres(p, zeros_guess(5), config(1e-12, 5));
  ASSERT_EQ(t.iterations(), 5);
  for (Index k = 1; k <= 4; ++k)
  {
    EXPECT_LE(t.records[static_cast<std::size_t>(k)].x.norm(), 1e-15) << k;
  }
  Vector xstar = Vector::Zero(5);
  xstar(4) = 1.0;
  EXPECT_LE((t.records[5].x - xstar).norm(), 1e-14);
}

TEST(Gmres, MatchesExplicitKrylovOracle)
{
  for (std::uint64_t seed = 0; seed < 10; ++seed)
  {
    const Problem p = build_random_dense(6, 2.0, seed);
    const Vector x0 = random_guess(6, seed + 100);
    const auto t = gmres(p, x0, config(1e-14, 6));
    const Vector r0 = t.records[0].r;
    for (std::size_t k = 1; k < t.records.size(); ++k)
    {
      const double oracle = krylov_residual(p.dense(), r0, static_cast<Index>(k));
      EXPECT_LE(std::abs(t.records[k].resnorm - oracle), 1e-9 * r0.norm()) << seed << " " << k;
    }
  }
}

TEST(Gmres, NoSolverBeatsItFromTheSameStart)
{
  for (std::uint64_t seed = 0; seed < 5; ++seed)
  {
    const Problem p = build_random_positive_real(12, 0.2, seed);
    const Vector x0 = random_guess(12, seed);
    const SolveConfig cfg = config(1e-12, 12);
    const auto g = gmres(p, x0, cfg);
    const std::vector<IterationTrace> others = {
        ngmres::ngmres(p, x0, WindowSize::of(0), cfg), ngmres::ngmres(p, x0, WindowSize::of(2), cfg),
        ngmres::ngmres(p, x0, WindowSize::full(), cfg), mr_iteration(p, x0, cfg),
        ngmres1_three_term(p, x0, cfg), anderson(p, x0, WindowSize::of(2), cfg)};
    const double r0 = g.initial_resnorm();
    for (const auto &t : others)
    {
      const std::size_t n = std::min(g.records.size(), t.records.size());
      for (std::size_t k = 0; k < n; ++k)
      {
        EXPECT_LE(g.records[k].resnorm, t.records[k].resnorm + 1e-10 * r0) << t.label() << k;
      }
    }
  }
}

TEST(Ngmres, FullWindowStaysPutOnCyclicFiveFromZero)
{
  const auto t = ngmres::ngmres(build_cyclic_shift(5), zeros_guess(5), WindowSize::full(),
                        config(1e-12, 10));
  ASSERT_GE(t.iterations(), 1);
  for (const auto &rec : t.records)
  {
    EXPECT_LE(rec.x.norm(), 1e-15);
  }
  EXPECT_TRUE(t.records.back().min_norm_applied || t.iterations() == 1);
}

TEST(Ngmres, FullWindowFollowsGmresOnCyclicFiveFromOnes)
{
  const Problem p = build_cyclic_shift(5);
  const SolveConfig cfg = config(1e-12, 10);
  const auto ng = ngmres::ngmres(p, ones_guess(5), WindowSize::full(), cfg);
  const auto g = gmres(p, ones_guess(5), cfg);
  ASSERT_EQ(ng.iterations(), 5);
  ASSERT_EQ(g.iterations(), 5);
  for (std::size_t k = 0; k < ng.records.size(); ++k)
  {
    EXPECT_LE((ng.records[k].x - g.records[k].x).norm(), 1e-12) << k;
    if (k > 0 && k < 5)
    {
      EXPECT_FALSE(ng.records[k].min_norm_applied) << k;
    }
  }
  Vector xstar = Vector::Zero(5);
  xstar(4) = 1.0;
  EXPECT_LE((ng.records[5].x - xstar).norm(), 1e-12);
}

TEST(Ngmres, ResidualRecurrenceAgreesWithExplicitResidual)
{
  const Problem p = build_random_positive_real(20, 0.2, 3);
  for (WindowSize w : {WindowSize::of(0), WindowSize::of(1), WindowSize::of(3), WindowSize::full()})
  {
    SolveConfig cfg = config(1e-10, 30);
    cfg.residual_mode = ResidualMode::recursive;
    const LinearSystem sys(p);
    const auto t = ngmres::ngmres(sys, random_guess(20, 1), w, cfg);
    EXPECT_LE(residual_drift(t, sys), 1e-10) << w.to_string();

    // r_{k+1} = (1 + sum beta) M r_k - sum beta_i r_{k-i}
    for (std::size_t rec = 1; rec < t.records.size(); ++rec)
    {
      const Vector &beta = t.records[rec].coefficients;
      const std::size_t k = rec - 1;
      Vector r = (1.0 + beta.sum()) * sys.apply_m(t.records[k].r);
      for (Index i = 0; i < beta.size(); ++i)
      {
        r -= beta(i) * t.records[k - static_cast<std::size_t>(i)].r;
      }
      EXPECT_LE((r - t.records[rec].r).norm(), 1e-10 * t.initial_resnorm());
    }
  }
}

TEST(Anderson, EmptyWindowIsFixedPointIteration)
{
  const Problem p = build_random_dense(6, 1.0, 2);
  const LinearSystem sys(p);
  const auto t = anderson(sys, random_guess(6, 2), WindowSize::of(0), config(1e-14, 8));
  for (std::size_t k = 1; k < t.records.size(); ++k)
  {
    const Vector q = sys.fixed_point(t.records[k - 1].x);
    EXPECT_LE((t.records[k].x - q).norm(), 1e-14 * (1.0 + q.norm()));
  }
}

TEST(Anderson, FullWindowLinksToGmres)
{
  const Problem p = spd8();
  const Vector x0 = random_guess(64, 5);
  const SolveConfig cfg = config(1e-10, 40);
  const auto g = gmres(p, x0, cfg);
  const auto aa = anderson(p, x0, WindowSize::full(), cfg);
  const auto verdict = check_anderson_linkage(g, aa, 1e-8, 1e-8);
  EXPECT_TRUE(verdict.hypothesis_met);
  EXPECT_TRUE(verdict.pass) << verdict.max_difference;
  EXPECT_GT(verdict.verified_through, 3);
}

TEST(Anderson, DivergesWhenFixedPointMapExpands)
{
  // A = -2.5 I + G, so M = 3.5 I - G has spectral radius well above one.
  const Problem p = build_random_dense(5, -2.5, 8);
  const LinearSystem sys(p);
  const double rho = spectral_radius(fixed_point_map(sys).m);
  ASSERT_GT(rho, 1.0);
  SolveConfig cfg = config(1e-12, 40);
  cfg.stagnation_window = 0;
  const auto t = anderson(sys, random_guess(5, 8), WindowSize::of(0), cfg);
  EXPECT_GT(t.records.back().resnorm, 10.0 * t.initial_resnorm());
}

TEST(MinimalResidual, FirstStepLengthOnDiagonal)
{
  // r0 = -b = (-1, -2), A r0 = (-1, -4): alpha = r0.A r0 / |A r0|^2 = 9 / 17.
  const auto t = mr_iteration(diag12(), zeros_guess(2), config(1e-12, 3));
  ASSERT_GE(t.iterations(), 1);
  EXPECT_NEAR(t.records[1].coefficients(0), 9.0 / 17.0, 1e-15);
}

TEST(MinimalResidual, IdentityTakesUnitStep)
{
  const auto t = mr_iteration(build_identity(3), random_guess(3, 1), config(1e-12, 3));
  ASSERT_EQ(t.iterations(), 1);
  EXPECT_NEAR(t.records[1].coefficients(0), 1.0, 1e-15);
}

TEST(MinimalResidual, SkewSymmetricMakesNoProgress)
{
  DenseMatrix s(2, 2);
  s << 0.0, 1.0, -1.0, 0.0;
  const Problem p(to_sparse(s), Vector::Ones(2), SymmetryClass::skew_symmetric, "skew");
  SolveConfig cfg = config(1e-12, 5);
  cfg.stagnation_window = 0;
  const auto t = mr_iteration(p, random_guess(2, 4), cfg);
  for (std::size_t k = 1; k < t.records.size(); ++k)
  {
    EXPECT_EQ(t.records[k].coefficients(0), 0.0);
    EXPECT_EQ(t.records[k].x, t.records[0].x);
  }
}

TEST(ThreeTerm, SymmetricMatchesGmres)
{
  const Problem p = spd8();
  const Vector x0 = random_guess(64, 3);
  const SolveConfig cfg = config(1e-10, 60);
  const auto g = gmres(p, x0, cfg);
  const auto n1 = ngmres1_three_term(p, x0, cfg);
  EXPECT_LE(max_residual_difference(g, n1, 1e-8), 1e-8);
}

TEST(ThreeTerm, SymmetricCrossTermVanishes)
{
  const Problem p = spd8();
  const LinearSystem sys(p);
  const auto t = ngmres1_three_term(p, random_guess(64, 3), config(1e-8, 60));
  const double anorm = spectral_norm(p.dense());
  for (std::size_t k = 1; k + 1 < t.records.size(); ++k)
  {
    const Vector &rk = t.records[k].r;
    const Vector &rkm = t.records[k - 1].r;
    const double scaled = std::abs(rkm.dot(sys.apply(rk))) / (anorm * rk.norm() * rkm.norm());
    EXPECT_LE(scaled, 1e-9) << k;
  }
}

TEST(ThreeTerm, MatchesWindowOneSolver)
{
  const Problem p = build_random_positive_real(15, 0.3, 12);
  const Vector x0 = random_guess(15, 12);
  const SolveConfig cfg = config(1e-10, 30);
  EXPECT_LE(max_residual_difference(ngmres::ngmres(p, x0, WindowSize::of(1), cfg),
                                    ngmres1_three_term(p, x0, cfg), 1e-8),
            1e-8);
}

TEST(ConjugateResidual, IdentityOneStep)
{
  const auto t = conjugate_residual(build_identity(3), random_guess(3, 2), config(1e-12, 5));
  EXPECT_EQ(t.iterations(), 1);
}

TEST(ConjugateResidual, FirstStepMatchesMinimalResidual)
{
  const auto t = conjugate_residual(diag12(), zeros_guess(2), config(1e-12, 3));
  EXPECT_NEAR(t.records[1].coefficients(0), 9.0 / 17.0, 1e-15);
}

TEST(ConjugateResidual, MatchesThreeTermOnDefiniteProblem)
{
  const Problem p = spd8();
  const Vector x0 = random_guess(64, 6);
  const SolveConfig cfg = config(1e-10, 60);
  EXPECT_LE(max_residual_difference(conjugate_residual(p, x0, cfg),
                                    ngmres1_three_term(p, x0, cfg), 1e-8),
            1e-8);
}

TEST(ConjugateResidual, RequiresSymmetricSystem)
{
  const Problem p = build_random_dense(4, 1.0, 0);
  EXPECT_THROW(conjugate_residual(p, zeros_guess(4), config(1e-10, 5)), std::invalid_argument);
}

TEST(FirstStep, AllMinimisingMethodsAgree)
{
  for (std::uint64_t seed = 0; seed < 10; ++seed)
  {
    const Problem p = build_random_dense(8, 1.0, seed);
    const Vector x0 = random_guess(8, seed);
    const SolveConfig cfg = config(1e-12, 1);
    const Vector ref = mr_iteration(p, x0, cfg).records.at(1).x;
    const double scale = std::max(1.0, ref.norm());
    for (const auto &t : {gmres(p, x0, cfg), ngmres::ngmres(p, x0, WindowSize::of(0), cfg),
                          ngmres::ngmres(p, x0, WindowSize::of(3), cfg),
                          ngmres::ngmres(p, x0, WindowSize::full(), cfg), ngmres1_three_term(p, x0, cfg)})
    {
      EXPECT_LE((t.records.at(1).x - ref).norm(), 1e-12 * scale) << t.label();
    }
  }
}

TEST(Preconditioning, IdentityReproducesPlainRunBitwise)
{
  const Problem p = build_convection_diffusion(6, 10.0, 10.0);
  const Vector x0 = random_guess(36, 1);
  const SolveConfig cfg = config(1e-10, 40);
  const LinearSystem pre = left_precondition(p, identity_preconditioner());
  const LinearSystem plain(p);
  for (WindowSize w : {WindowSize::of(1), WindowSize::full()})
  {
    const auto a = ngmres::ngmres(pre, x0, w, cfg);
    const auto b = ngmres::ngmres(plain, x0, w, cfg);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k)
    {
      EXPECT_TRUE((a.records[k].r.array() == b.records[k].r.array()).all());
    }
  }
}

TEST(Preconditioning, ExactPreconditionerConvergesInOneStep)
{
  const Problem p = build_convection_diffusion(6, 10.0, 10.0);
  const LinearSystem pre = left_precondition(p, exact_preconditioner(p.matrix()));
  const auto t = ngmres::ngmres(pre, random_guess(36, 2), WindowSize::of(1), config(1e-10, 10));
  EXPECT_EQ(t.iterations(), 1);
  EXPECT_EQ(t.termination, Termination::tolerance);
}

TEST(Preconditioning, JacobiRejectsZeroDiagonal)
{
  EXPECT_THROW(jacobi_preconditioner(build_cyclic_shift(4).matrix()), std::invalid_argument);
}

TEST(Determinism, RepeatedRunsAreBitIdentical)
{
  const Problem p = build_random_with_symmetry(20, SymmetryClass::general, 77);
  const Vector x0 = random_guess(20, 77);
  const SolveConfig cfg = config(1e-10, 25);
  for (Method m : {Method::gmres, Method::ngmres, Method::anderson, Method::mr,
                   Method::ngmres1_three_term})
  {
    const LinearSystem sys(p);
    const auto a = solve(m, sys, x0, WindowSize::of(3), cfg);
    const auto b = solve(m, sys, x0, WindowSize::of(3), cfg);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k)
    {
      EXPECT_TRUE((a.records[k].x.array() == b.records[k].x.array()).all());
    }
  }
}

TEST(SolveConfig, RejectsInvalidSettings)
{
  SolveConfig cfg;
  cfg.tol = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = SolveConfig{};
  cfg.max_iter = -2;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
