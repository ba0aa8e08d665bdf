#include "ngmres/system.hpp"

#include <stdexcept>

#include <Eigen/SparseLU>

namespace ngmres
{

LinearSystem::LinearSystem(const Problem &problem)
    : n_(problem.size()),
      rhs_(problem.rhs()),
      symmetry_(problem.symmetry()),
      label_(problem.label())
{
  auto a = std::make_shared<const SparseMatrix>(problem.matrix());
  apply_ = [a](const Vector &x) { return matvec(*a, x); };
}

LinearSystem::LinearSystem(Index n, Operator apply, Vector rhs, SymmetryClass symmetry,
                           std::string label)
    : n_(n),
      apply_(std::move(apply)),
      rhs_(std::move(rhs)),
      symmetry_(symmetry),
      label_(std::move(label))
{
  if (rhs_.size() != n_)
  {
    throw DimensionError("LinearSystem: right-hand side length does not match size");
  }
  if (!apply_)
  {
    throw std::invalid_argument("LinearSystem: empty operator");
  }
}

Vector LinearSystem::apply(const Vector &x) const
{
  if (x.size() != n_)
  {
    throw DimensionError("LinearSystem::apply: vector length " + std::to_string(x.size()) +
                         " does not match system size " + std::to_string(n_));
  }
  return apply_(x);
}

Vector LinearSystem::residual(const Vector &x) const { return apply(x) - rhs_; }

Vector LinearSystem::fixed_point(const Vector &x) const { return x - residual(x); }

Vector LinearSystem::apply_m(const Vector &v) const { return v - apply(v); }

DenseMatrix LinearSystem::dense_operator() const
{
  DenseMatrix a(n_, n_);
  Vector e = Vector::Zero(n_);
  for (Index j = 0; j < n_; ++j)
  {
    e(j) = 1.0;
    a.col(j) = apply(e);
    e(j) = 0.0;
  }
  return a;
}

FixedPointMap fixed_point_map(const LinearSystem &system)
{
  FixedPointMap map;
  map.m = DenseMatrix::Identity(system.size(), system.size()) - system.dense_operator();
  map.c = system.rhs();
  return map;
}

LinearSystem left_precondition(const Problem &problem, PreconditionerSolve solve)
{
  if (!solve)
  {
    throw std::invalid_argument("left_precondition: empty preconditioner");
  }
  auto a = std::make_shared<const SparseMatrix>(problem.matrix());
  Vector rhs = solve(problem.rhs());
  auto op = [a, solve](const Vector &x) { return solve(matvec(*a, x)); };
  return LinearSystem(problem.size(), std::move(op), std::move(rhs), SymmetryClass::general,
                      "left_preconditioned(" + problem.label() + ")");
}

PreconditionerSolve identity_preconditioner()
{
  return [](const Vector &v) { return v; };
}

PreconditionerSolve jacobi_preconditioner(const SparseMatrix &a)
{
  Vector diag = a.diagonal();
  for (Index i = 0; i < diag.size(); ++i)
  {
    if (diag(i) == 0.0)
    {
      throw std::invalid_argument("jacobi_preconditioner: zero diagonal entry at row " +
                                  std::to_string(i));
    }
  }
  auto d = std::make_shared<const Vector>(std::move(diag));
  return [d](const Vector &v) -> Vector { return v.cwiseQuotient(*d); };
}

PreconditionerSolve exact_preconditioner(const SparseMatrix &a)
{
  using ColMajor = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
  auto lu = std::make_shared<Eigen::SparseLU<ColMajor>>();
  ColMajor copy = a;
  lu->compute(copy);
  if (lu->info() != Eigen::Success)
  {
    throw std::runtime_error("exact_preconditioner: LU factorisation failed: " +
                             lu->lastErrorMessage());
  }
  return [lu](const Vector &v) -> Vector {
    Vector z = lu->solve(v);
    if (lu->info() != Eigen::Success)
    {
      throw std::runtime_error("exact_preconditioner: solve failed");
    }
    return z;
  };
}

}  // namespace ngmres
