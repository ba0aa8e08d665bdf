#ifndef NGMRES_DIAGNOSTICS_HPP
#define NGMRES_DIAGNOSTICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "ngmres/linalg.hpp"
#include "ngmres/problems.hpp"
#include "ngmres/system.hpp"
#include "ngmres/trace.hpp"

namespace ngmres
{

// ---------------------------------------------------------------------------
// Orthogonality relations

struct OrthogonalityStep
{
  // The relations tie r_{k+1} to the window ending at r_k.
  Index k = 0;
  // |r_{k+1}^T A r_k| / (||r_{k+1}|| ||A|| ||r_k||); zero for the Anderson family.
  double a_orth = 0.0;
  // max_{i,j <= m_k} |u^T (r_{k-j} - r_{k-i})| / (||u|| ||r_{k-j} - r_{k-i}||)
  // with u = r_{k+1} (NGMRES) or u = M^{-1} r_{k+1} (Anderson).
  double diff_orth = 0.0;
  // |r_{k+1}^T (r_{k+1} - r_k)| / (||r_{k+1}|| ||r_{k+1} - r_k||); NGMRES only.
  double decrease_orth = 0.0;
  bool evaluated = true;
  bool pass = true;
};

struct OrthogonalityReport
{
  double tol = 0.0;
  std::vector<OrthogonalityStep> steps;
  bool pass = true;
  // Anderson family only: M = I - A was numerically singular.
  bool singular_m = false;

  double worst() const;
};

struct OrthogonalityOptions
{
  double tol = 1e-9;
  // Steps whose ||r_{k+1}|| is at or below floor * ||r_0|| are not evaluated.
  double floor = 0.0;
  // A difference a - b with ||a - b|| <= resolve * max(||a||, ||b||) is at
  // rounding level; relations involving it are skipped.
  double resolve = 0.0;
  // ||A||_2 for the first family; computed from the dense operator if unset.
  std::optional<double> a_norm;
};

/// Relations satisfied by every NGMRES(m) trace (and, with a full window, by
/// GMRES):
///   r_{k+1}^T A r_k = 0,
///   r_{k+1}^T (r_{k-j} - r_{k-i}) = 0 for i, j <= m_k,
///   r_{k+1}^T (r_{k+1} - r_k) = 0.
/// Each magnitude is divided by the norms of its factors (||A|| ||r_k|| for
/// A r_k). Zero-length factors make a relation vacuous.
OrthogonalityReport check_orthogonality(const IterationTrace &trace, const LinearSystem &system,
                                        WindowSize m, const OrthogonalityOptions &opts);
OrthogonalityReport check_orthogonality(const IterationTrace &trace, const LinearSystem &system,
                                        WindowSize m, double tol);

/// Anderson relations (M^{-1} r_{k+1})^T (r_{k-j} - r_{k-i}) = 0, i, j <= m_k,
/// with M = I - A solved densely.
OrthogonalityReport check_aa_orthogonality(const IterationTrace &trace,
                                           const LinearSystem &system, WindowSize m,
                                           const OrthogonalityOptions &opts);

// ---------------------------------------------------------------------------
// Residual polynomials

using ExtendedVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

struct PolynomialTrace
{
  // Monomial coefficients of p_k in lambda, index k.
  std::vector<Vector> coefficients;
  // Same coefficients carried in extended precision. Monomial coefficients
  // grow quickly on stalling runs, and double rounding of the expansion alone
  // can reach 1e-8 of ||r_0|| by k = 20.
  std::vector<ExtendedVector> extended;
  std::vector<double> value_at_one;
  // Recorded, not asserted.
  std::vector<double> value_at_zero;
  // ||p_k(M) r_0 - r_k|| / ||r_0||; filled by verify_polynomial.
  std::vector<double> reconstruction_error;

  double max_reconstruction_error() const;
  double max_deviation_at_one() const;
};

/// Builds p_0 = 1, p_{k+1}(l) = (1 + sum beta_i) l p_k(l) - sum beta_i p_{k-i}(l)
/// from the coefficients of an NGMRES-family trace (ngmres, ngmres1, mr).
PolynomialTrace track_polynomial(const IterationTrace &trace);

// Evaluates p_k(M) r_0 by Horner's rule with a dense M (extended precision
// when available) and fills reconstruction_error.
void verify_polynomial(PolynomialTrace &poly, const IterationTrace &trace,
                       const LinearSystem &system);

// ---------------------------------------------------------------------------
// Spectral bounds

struct BoundReport
{
  double mu = 0.0;     // lambda_min(A + A^T) / 2
  double nu = 0.0;     // lambda_min(A^{-1} + A^{-T}) / 2, NaN if A is singular
  double sigma = 0.0;  // ||A||_2
  double lambda_min = 0.0;  // of A, when symmetric
  double lambda_max = 0.0;
  double kappa = 0.0;  // NaN unless A is symmetric definite
  // Spectral radius of M = I - A; NaN when M is not skew and n > rho_dense_max_n.
  double rho_m = 0.0;

  bool invertible = false;
  bool positive_real = false;
  bool symmetric_definite = false;
  bool skew_m = false;

  double factor_mu_sigma = 1.0;  // sqrt(1 - mu^2 / sigma^2)
  double factor_mu_nu = 1.0;     // sqrt(1 - mu nu)
  double factor_symmetric = 1.0;  // |l_max - l_min| / |l_max + l_min|
  double factor_skew_linear = 1.0;  // rho / sqrt(1 + rho)
  double factor_skew_squared = 1.0;  // rho / sqrt(1 + rho^2)
  double chebyshev_base = 1.0;       // (sqrt(kappa) - 1) / (sqrt(kappa) + 1)

  // The looser of the two skew candidates; the one asserted.
  double factor_skew() const;
  // 2 base^{k} (multiplies ||r_0|| to bound ||r_k||).
  double chebyshev_factor(Index k) const;
};

inline constexpr Index rho_dense_max_n = 256;

BoundReport compute_bounds(const Problem &p);
BoundReport compute_bounds(const DenseMatrix &a);

struct BoundCheck
{
  std::string name;
  bool applicable = false;
  bool pass = true;
  // Largest ||r_{k+1}|| / (factor ||r_k||) seen (per-step bounds), or
  // ||r_k|| / (2 base^k ||r_0||) (cumulative bound).
  double worst_ratio = 0.0;
  std::optional<Index> first_failure;
  std::string note;
};

struct ContractionReport
{
  std::vector<BoundCheck> checks;
  bool pass = true;
  // Which skew candidates held on every step (informational).
  bool skew_linear_holds = false;
  bool skew_squared_holds = false;

  const BoundCheck *find(const std::string &name) const;
};

inline constexpr double contraction_slack = 1e-12;

/// Checks ||r_{k+1}|| <= factor ||r_k|| + 1e-12 ||r_0|| for every bound
/// whose hypothesis holds, and the cumulative Chebyshev bound for methods
/// that coincide with GMRES on symmetric definite systems. Checks whose
/// hypothesis is not met are reported as not applicable.
ContractionReport check_contraction(const IterationTrace &trace, const BoundReport &report);

// ---------------------------------------------------------------------------
// Trace comparison

/// First NGMRES step index k (0-based: step k produces iterate k+1) whose
/// residual vector differs between the traces by more than
/// tol * ||r_0^a||, or nullopt when the common prefix agrees. With floor > 0
/// the comparison stops at the first iterate where either residual is at or
/// below floor * ||r_0||.
std::optional<Index> compare_traces(const IterationTrace &a, const IterationTrace &b,
                                    double tol, double floor = 0.0);

// Max over the common prefix (down to the floor) of ||r_j^a - r_j^b|| / ||r_0^a||.
double max_residual_difference(const IterationTrace &a, const IterationTrace &b,
                               double floor = 0.0);

struct EquivalenceVerdict
{
  // GMRES residual norms strictly decreased at least once from the start.
  bool hypothesis_met = false;
  // Iterates 0..verified_through were compared.
  Index verified_through = 0;
  double max_difference = 0.0;
  std::optional<Index> divergence;
  bool pass = true;
};

inline constexpr double strict_decrease_tol = 1e-14;

// Last index k0 such that ||r_k|| < ||r_{k-1}|| - 1e-14 ||r_0|| for 0 < k < k0.
Index strict_decrease_horizon(const IterationTrace &gmres_trace);

/// Residual-vector equality between GMRES and another trace over the
/// iterates covered by the strict-decrease hypothesis (and above floor).
/// Reports hypothesis-not-met rather than failure when GMRES does not
/// strictly decrease at its first step.
EquivalenceVerdict check_gmres_equivalence(const IterationTrace &gmres_trace,
                                           const IterationTrace &other, double tol,
                                           double floor = 0.0);

/// Anderson linkage x_{j+1}^A = x_j^G - r_j^G over the same range; differences
/// are relative to max(1, ||x_j^G - r_j^G||).
EquivalenceVerdict check_anderson_linkage(const IterationTrace &gmres_trace,
                                          const IterationTrace &anderson_trace, double tol,
                                          double floor = 0.0);

// Largest violation of ||r_{k+1}|| <= ||r_k|| + slack * ||r_0||, as a
// multiple of ||r_0|| (<= 0 means monotone).
double monotonicity_violation(const IterationTrace &trace, double slack = 1e-12);

}  // namespace ngmres

#endif  // NGMRES_DIAGNOSTICS_HPP
