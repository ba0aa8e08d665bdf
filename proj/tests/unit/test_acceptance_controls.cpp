#include <gtest/gtest.h>

#include "ngmres/acceptance.hpp"
#include "ngmres/solvers.hpp"

using namespace ngmres;

namespace
{

// Minimal residual with the step taken the wrong way.
IterationTrace reversed_mr(const LinearSystem &system, const Vector &x0, const SolveConfig &cfg)
{
  IterationTrace t;
  t.method = Method::mr;
  t.window = WindowSize::of(0);
  Vector x = x0;
  Vector r = system.residual(x);
  t.records.push_back({x, r, r.norm(), Vector(), -1, false});
  for (Index k = 0; k < cfg.max_iter; ++k)
  {
    const Vector ar = system.apply(r);
    const double alpha = r.dot(ar) / ar.squaredNorm();
    x += alpha * r;
    r = system.residual(x);
    t.records.push_back({x, r, r.norm(), Vector::Constant(1, alpha), 1, false});
  }
  return t;
}

}  // namespace

TEST(AcceptanceControls, FirstStepCriterionPassesWithRealSolver)
{
  EXPECT_TRUE(run_criterion(8).pass);
}

TEST(AcceptanceControls, FirstStepCriterionCatchesSignError)
{
  AcceptanceHooks hooks = default_hooks();
  hooks.mr = reversed_mr;
  const auto result = run_criterion(8, hooks);
  EXPECT_FALSE(result.pass);
}

TEST(AcceptanceControls, TitlesCoverEveryCriterion)
{
  for (int id = 1; id <= acceptance_criterion_count; ++id)
  {
    EXPECT_FALSE(criterion_title(id).empty()) << id;
  }
  EXPECT_FALSE(run_criterion(acceptance_criterion_count + 1).pass);
}
