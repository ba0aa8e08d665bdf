#ifndef NGMRES_SYSTEM_HPP
#define NGMRES_SYSTEM_HPP

#include <functional>
#include <memory>
#include <string>

#include "ngmres/linalg.hpp"
#include "ngmres/problems.hpp"

namespace ngmres
{

/// The operator view every solver runs against: an action v -> A v and a
/// right-hand side b. It fixes the residual r(x) = A x - b and the linear
/// fixed-point map q(x) = M x + b with M = I - A, so q(x) = x - r(x).
class LinearSystem
{
public:
  using Operator = std::function<Vector(const Vector &)>;

  explicit LinearSystem(const Problem &problem);
  LinearSystem(Index n, Operator apply, Vector rhs, SymmetryClass symmetry, std::string label);

  Index size() const { return n_; }
  const Vector &rhs() const { return rhs_; }
  SymmetryClass symmetry() const { return symmetry_; }
  const std::string &label() const { return label_; }

  Vector apply(const Vector &x) const;
  Vector residual(const Vector &x) const;
  Vector fixed_point(const Vector &x) const;
  // M v = v - A v
  Vector apply_m(const Vector &v) const;

  // Columns A e_j; desk-scale diagnostics only.
  DenseMatrix dense_operator() const;

private:
  Index n_;
  Operator apply_;
  Vector rhs_;
  SymmetryClass symmetry_;
  std::string label_;
};

// q(x) = M x + c in explicit dense form.
struct FixedPointMap
{
  DenseMatrix m;
  Vector c;

  Vector operator()(const Vector &x) const { return m * x + c; }
};

// M = I - A, c = b.
FixedPointMap fixed_point_map(const LinearSystem &system);

// Solves P z = v.
using PreconditionerSolve = std::function<Vector(const Vector &)>;

/// Left preconditioning: the returned system has operator P^{-1} A and
/// right-hand side P^{-1} b, so its residual is P^{-1} A x - P^{-1} b and its
/// fixed-point map is (I - P^{-1} A) x + P^{-1} b.
LinearSystem left_precondition(const Problem &problem, PreconditionerSolve solve);

PreconditionerSolve identity_preconditioner();
// P = diag(A). Throws std::invalid_argument on a zero diagonal entry.
PreconditionerSolve jacobi_preconditioner(const SparseMatrix &a);
// P = A via sparse LU. Throws std::runtime_error when A is singular.
PreconditionerSolve exact_preconditioner(const SparseMatrix &a);

}  // namespace ngmres

#endif  // NGMRES_SYSTEM_HPP
