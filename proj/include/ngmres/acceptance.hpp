#ifndef NGMRES_ACCEPTANCE_HPP
#define NGMRES_ACCEPTANCE_HPP

#include <functional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "ngmres/system.hpp"
#include "ngmres/trace.hpp"

namespace ngmres
{

struct CriterionResult
{
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  // One line per sub-check, measured value first.
  std::vector<std::string> details;
};

// Replaceable pieces, so negative controls can inject a faulty solver.
struct AcceptanceHooks
{
  std::function<IterationTrace(const LinearSystem &, const Vector &, const SolveConfig &)> mr;
};

AcceptanceHooks default_hooks();

inline constexpr int acceptance_criterion_count = 10;

std::string criterion_title(int id);

CriterionResult run_criterion(int id, const AcceptanceHooks &hooks = default_hooks());

/// Runs the selected criteria (all when `only` is empty), printing one
/// PASS/FAIL line per criterion plus its detail lines.
std::vector<CriterionResult> run_acceptance(std::ostream &out, const std::set<int> &only = {},
                                            const AcceptanceHooks &hooks = default_hooks(),
                                            bool verbose = true);

}  // namespace ngmres

#endif  // NGMRES_ACCEPTANCE_HPP
