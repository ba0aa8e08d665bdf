#ifndef NGMRES_LINALG_HPP
#define NGMRES_LINALG_HPP

#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace ngmres
{

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
// Compressed row storage.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

// Operand shapes do not agree.
class DimensionError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// A NaN or infinity reached an operation that requires finite data.
class NonFiniteError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

bool all_finite(const Vector &v);
bool all_finite(const DenseMatrix &m);
bool all_finite(const SparseMatrix &m);

// Throws DimensionError / NonFiniteError / std::invalid_argument when the
// compressed-row invariants do not hold.
void validate(const SparseMatrix &m);

Vector matvec(const DenseMatrix &a, const Vector &x);
Vector matvec(const SparseMatrix &a, const Vector &x);

DenseMatrix to_dense(const SparseMatrix &a);
SparseMatrix to_sparse(const DenseMatrix &a, double drop_tol = 0.0);

// Max-entry norm of A - A^T, relative to the max-entry norm of A.
double relative_asymmetry(const DenseMatrix &a);

enum class LstsqMethod
{
  orthogonal,       // Householder QR of W, then SVD of the small triangular factor
  normal_equations  // W^T W beta = W^T f; kept for cross-checking
};

struct LeastSquaresSolution
{
  Vector coefficients;
  Index numerical_rank = 0;
  bool min_norm_applied = false;
  double residual_norm = 0.0;
};

inline constexpr double default_rank_tol = 1e-12;

/// Minimiser of ||f - W beta||_2. Singular values of W at or below
/// rank_tol * sigma_max count as zero; when that makes W rank deficient the
/// minimum-2-norm minimiser is returned and min_norm_applied is set.
LeastSquaresSolution min_norm_lstsq(const DenseMatrix &w, const Vector &f,
                                    double rank_tol = default_rank_tol,
                                    LstsqMethod method = LstsqMethod::orthogonal);

struct EigenExtremes
{
  double min = 0.0;
  double max = 0.0;
};

/// Extreme eigenvalues of a symmetric matrix. Rejects input whose relative
/// asymmetry exceeds symmetry_tol.
EigenExtremes sym_eig_extremes(const DenseMatrix &s, double symmetry_tol = 1e-12);

// Largest singular value.
double spectral_norm(const DenseMatrix &a);

// Largest eigenvalue modulus of a general square matrix.
double spectral_radius(const DenseMatrix &a);

}  // namespace ngmres

#endif  // NGMRES_LINALG_HPP
