#ifndef NGMRES_PROBLEMS_HPP
#define NGMRES_PROBLEMS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ngmres/linalg.hpp"

namespace ngmres
{

enum class SymmetryClass
{
  general,
  symmetric,
  shifted_skew_symmetric,  // A = alpha I + S with S^T = -S
  skew_symmetric
};

std::string_view to_string(SymmetryClass s);
SymmetryClass parse_symmetry_class(std::string_view name);

// Tolerance used when verifying a declared symmetry class.
inline constexpr double symmetry_check_tol = 1e-12;

// Returns true when A matches the class to within tol relative to max |a_ij|.
bool has_symmetry(const SparseMatrix &a, SymmetryClass s, double tol = symmetry_check_tol);

/// A square system A x = b. The declared symmetry class is verified on
/// construction; a mismatch throws std::invalid_argument.
class Problem
{
public:
  Problem(SparseMatrix a, Vector b, SymmetryClass symmetry, std::string label,
          std::optional<Vector> exact_solution = std::nullopt);

  const SparseMatrix &matrix() const { return a_; }
  const Vector &rhs() const { return b_; }
  SymmetryClass symmetry() const { return symmetry_; }
  const std::string &label() const { return label_; }
  const std::optional<Vector> &exact_solution() const { return exact_; }
  Index size() const { return a_.rows(); }

  DenseMatrix dense() const { return to_dense(a_); }

private:
  SparseMatrix a_;
  Vector b_;
  SymmetryClass symmetry_;
  std::string label_;
  std::optional<Vector> exact_;
};

// Problem with b = A * ones, recording ones as the exact solution.
Problem with_ones_solution(SparseMatrix a, SymmetryClass symmetry, std::string label);

enum class StencilScaling
{
  physical,   // entries carry the 1/h^2 and 1/(2h) factors
  normalized  // multiplied through by h^2: 4, -1 -/+ gamma
};

std::string_view to_string(StencilScaling s);
StencilScaling parse_stencil_scaling(std::string_view name);

/// Centered five-point discretisation of -Laplace(u) + sigma u_x + tau u_y on
/// an n x n interior grid of the unit square with homogeneous Dirichlet data,
/// h = 1/(n+1). Unknowns are ordered lexicographically with x fastest.
Problem build_convection_diffusion(Index n, double sigma, double tau,
                                   StencilScaling scaling = StencilScaling::physical);

// sigma such that the mesh Reynolds number sigma*h/2 equals gamma.
double convection_from_mesh_reynolds(Index n, double gamma);

// A = I - (K - K^T)/2 with b regenerated for the all-ones solution.
Problem to_shifted_skew(const SparseMatrix &k);
Problem to_shifted_skew(const Problem &k);

// n x n cyclic downshift with b = e_1; the exact solution is e_n.
Problem build_cyclic_shift(Index n);

Problem build_identity(Index n);

// Dense random matrix with N(0,1)/sqrt(n) entries shifted so that
// lambda_min(A + A^T)/2 equals min_sym_eig; b = A * ones.
Problem build_random_positive_real(Index n, double min_sym_eig, std::uint64_t seed);

// Dense random matrix I*shift + N(0,1)/sqrt(n); b = A * ones.
Problem build_random_dense(Index n, double shift, std::uint64_t seed);

// Random symmetric (s = symmetric), skew-shifted (alpha I + S) or general
// matrix of size n, b = A * ones.
Problem build_random_with_symmetry(Index n, SymmetryClass symmetry, std::uint64_t seed);

Vector zeros_guess(Index n);
Vector ones_guess(Index n);
// Uniform(-1, 1) entries from the given seed.
Vector random_guess(Index n, std::uint64_t seed);

}  // namespace ngmres

#endif  // NGMRES_PROBLEMS_HPP
