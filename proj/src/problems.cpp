#include "ngmres/problems.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ngmres/random.hpp"

namespace ngmres
{

std::string_view to_string(SymmetryClass s)
{
  switch (s)
  {
    case SymmetryClass::general:
      return "general";
    case SymmetryClass::symmetric:
      return "symmetric";
    case SymmetryClass::shifted_skew_symmetric:
      return "shifted_skew_symmetric";
    case SymmetryClass::skew_symmetric:
      return "skew_symmetric";
  }
  return "unknown";
}

SymmetryClass parse_symmetry_class(std::string_view name)
{
  if (name == "general")
  {
    return SymmetryClass::general;
  }
  if (name == "symmetric")
  {
    return SymmetryClass::symmetric;
  }
  if (name == "shifted_skew_symmetric" || name == "shifted_skew")
  {
    return SymmetryClass::shifted_skew_symmetric;
  }
  if (name == "skew_symmetric" || name == "skew")
  {
    return SymmetryClass::skew_symmetric;
  }
  throw std::invalid_argument("unknown symmetry class '" + std::string(name) + "'");
}

bool has_symmetry(const SparseMatrix &a, SymmetryClass s, double tol)
{
  if (a.rows() != a.cols())
  {
    return false;
  }
  if (s == SymmetryClass::general)
  {
    return true;
  }
  const double scale = a.nonZeros() > 0 ? DenseMatrix(a).cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0)
  {
    return true;
  }
  const SparseMatrix at = a.transpose();
  SparseMatrix defect;
  switch (s)
  {
    case SymmetryClass::symmetric:
      defect = a - at;
      break;
    case SymmetryClass::skew_symmetric:
      defect = a + at;
      break;
    case SymmetryClass::shifted_skew_symmetric:
    {
      const double alpha = a.diagonal().mean();
      SparseMatrix shift(a.rows(), a.cols());
      shift.setIdentity();
      shift *= alpha;
      const SparseMatrix skew = a - shift;
      defect = skew + SparseMatrix(skew.transpose());
      break;
    }
    case SymmetryClass::general:
      break;
  }
  double worst = 0.0;
  for (int k = 0; k < defect.nonZeros(); ++k)
  {
    worst = std::max(worst, std::abs(defect.valuePtr()[k]));
  }
  return worst <= tol * scale;
}

Problem::Problem(SparseMatrix a, Vector b, SymmetryClass symmetry, std::string label,
                 std::optional<Vector> exact_solution)
    : a_(std::move(a)),
      b_(std::move(b)),
      symmetry_(symmetry),
      label_(std::move(label)),
      exact_(std::move(exact_solution))
{
  a_.makeCompressed();
  if (a_.rows() != a_.cols() || a_.rows() == 0)
  {
    throw DimensionError("problem matrix must be square and non-empty");
  }
  if (b_.size() != a_.rows())
  {
    throw DimensionError("right-hand side length does not match the matrix");
  }
  if (exact_ && exact_->size() != a_.rows())
  {
    throw DimensionError("exact solution length does not match the matrix");
  }
  validate(a_);
  if (!b_.allFinite())
  {
    throw NonFiniteError("right-hand side holds non-finite values");
  }
  if (!has_symmetry(a_, symmetry_))
  {
    throw std::invalid_argument("problem '" + label_ + "' does not have declared symmetry class " +
                                std::string(to_string(symmetry_)));
  }
}

Problem with_ones_solution(SparseMatrix a, SymmetryClass symmetry, std::string label)
{
  const Vector ones = Vector::Ones(a.cols());
  Vector b = matvec(a, ones);
  return Problem(std::move(a), std::move(b), symmetry, std::move(label), ones);
}

std::string_view to_string(StencilScaling s)
{
  return s == StencilScaling::physical ? "physical" : "normalized";
}

StencilScaling parse_stencil_scaling(std::string_view name)
{
  if (name == "physical")
  {
    return StencilScaling::physical;
  }
  if (name == "normalized")
  {
    return StencilScaling::normalized;
  }
  throw std::invalid_argument("unknown stencil scaling '" + std::string(name) + "'");
}

Problem build_convection_diffusion(Index n, double sigma, double tau, StencilScaling scaling)
{
  if (n < 2)
  {
    throw std::invalid_argument("build_convection_diffusion: n must be at least 2");
  }
  if (!std::isfinite(sigma) || !std::isfinite(tau))
  {
    throw NonFiniteError("build_convection_diffusion: non-finite coefficients");
  }
  const double h = 1.0 / static_cast<double>(n + 1);
  const double inv_h2 = scaling == StencilScaling::physical ? 1.0 / (h * h) : 1.0;
  const double inv_2h = scaling == StencilScaling::physical ? 1.0 / (2.0 * h) : h / 2.0;

  const double center = 4.0 * inv_h2;
  const double west = -inv_h2 - sigma * inv_2h;
  const double east = -inv_h2 + sigma * inv_2h;
  const double south = -inv_h2 - tau * inv_2h;
  const double north = -inv_h2 + tau * inv_2h;

  const Index size = n * n;
  std::vector<Eigen::Triplet<double, int>> entries;
  entries.reserve(static_cast<std::size_t>(5 * size));
  for (Index j = 0; j < n; ++j)
  {
    for (Index i = 0; i < n; ++i)
    {
      const auto row = static_cast<int>(j * n + i);
      if (j > 0)
      {
        entries.emplace_back(row, row - static_cast<int>(n), south);
      }
      if (i > 0)
      {
        entries.emplace_back(row, row - 1, west);
      }
      entries.emplace_back(row, row, center);
      if (i + 1 < n)
      {
        entries.emplace_back(row, row + 1, east);
      }
      if (j + 1 < n)
      {
        entries.emplace_back(row, row + static_cast<int>(n), north);
      }
    }
  }
  SparseMatrix k(size, size);
  k.setFromTriplets(entries.begin(), entries.end());
  k.makeCompressed();

  const SymmetryClass symmetry =
      (sigma == 0.0 && tau == 0.0) ? SymmetryClass::symmetric : SymmetryClass::general;
  return with_ones_solution(std::move(k), symmetry,
                            "conv_diffusion(n=" + std::to_string(n) + ")");
}

double convection_from_mesh_reynolds(Index n, double gamma)
{
  const double h = 1.0 / static_cast<double>(n + 1);
  return 2.0 * gamma / h;
}

Problem to_shifted_skew(const SparseMatrix &k)
{
  if (k.rows() != k.cols())
  {
    throw DimensionError("to_shifted_skew: matrix must be square");
  }
  SparseMatrix identity(k.rows(), k.cols());
  identity.setIdentity();
  const SparseMatrix kt = k.transpose();
  SparseMatrix a = identity - 0.5 * (k - kt);
  a.prune(0.0);
  a.makeCompressed();
  return with_ones_solution(std::move(a), SymmetryClass::shifted_skew_symmetric,
                            "shifted_skew");
}

Problem to_shifted_skew(const Problem &k)
{
  Problem out = to_shifted_skew(k.matrix());
  return Problem(out.matrix(), out.rhs(), out.symmetry(), "shifted_skew(" + k.label() + ")",
                 out.exact_solution());
}

Problem build_cyclic_shift(Index n)
{
  if (n < 2)
  {
    throw std::invalid_argument("build_cyclic_shift: n must be at least 2");
  }
  std::vector<Eigen::Triplet<double, int>> entries;
  entries.emplace_back(0, static_cast<int>(n - 1), 1.0);
  for (Index i = 1; i < n; ++i)
  {
    entries.emplace_back(static_cast<int>(i), static_cast<int>(i - 1), 1.0);
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  Vector b = Vector::Zero(n);
  b(0) = 1.0;
  Vector exact = Vector::Zero(n);
  exact(n - 1) = 1.0;
  return Problem(std::move(a), std::move(b), SymmetryClass::general,
                 "cyclic_shift(n=" + std::to_string(n) + ")", std::move(exact));
}

Problem build_identity(Index n)
{
  SparseMatrix a(n, n);
  a.setIdentity();
  return with_ones_solution(std::move(a), SymmetryClass::symmetric,
                            "identity(n=" + std::to_string(n) + ")");
}

Problem build_random_positive_real(Index n, double min_sym_eig, std::uint64_t seed)
{
  Random rng(seed);
  DenseMatrix a = rng.normal_matrix(n, n) / std::sqrt(static_cast<double>(n));
  const DenseMatrix sym = 0.5 * (a + a.transpose());
  const double lmin = sym_eig_extremes(sym, 1e-10).min;
  a.diagonal().array() += min_sym_eig - lmin;
  return with_ones_solution(to_sparse(a), SymmetryClass::general,
                            "random_positive_real(n=" + std::to_string(n) +
                                ",seed=" + std::to_string(seed) + ")");
}

Problem build_random_dense(Index n, double shift, std::uint64_t seed)
{
  Random rng(seed);
  DenseMatrix a = rng.normal_matrix(n, n) / std::sqrt(static_cast<double>(n));
  a.diagonal().array() += shift;
  return with_ones_solution(to_sparse(a), SymmetryClass::general,
                            "random_dense(n=" + std::to_string(n) +
                                ",seed=" + std::to_string(seed) + ")");
}

Problem build_random_with_symmetry(Index n, SymmetryClass symmetry, std::uint64_t seed)
{
  Random rng(seed);
  const DenseMatrix g = rng.normal_matrix(n, n) / std::sqrt(static_cast<double>(n));
  DenseMatrix a;
  switch (symmetry)
  {
    case SymmetryClass::symmetric:
      a = 0.5 * (g + g.transpose());
      a.diagonal().array() += 2.0;
      break;
    case SymmetryClass::shifted_skew_symmetric:
      a = 0.5 * (g - g.transpose());
      a.diagonal().array() += 1.0;
      break;
    case SymmetryClass::skew_symmetric:
      a = 0.5 * (g - g.transpose());
      break;
    case SymmetryClass::general:
      a = g;
      a.diagonal().array() += 1.5;
      break;
  }
  return with_ones_solution(to_sparse(a), symmetry,
                            "random_" + std::string(to_string(symmetry)) +
                                "(n=" + std::to_string(n) + ",seed=" + std::to_string(seed) +
                                ")");
}

Vector zeros_guess(Index n) { return Vector::Zero(n); }

Vector ones_guess(Index n) { return Vector::Ones(n); }

Vector random_guess(Index n, std::uint64_t seed)
{
  Random rng(seed);
  return rng.uniform_vector(n, -1.0, 1.0);
}

}  // namespace ngmres
