#ifndef NGMRES_SOLVERS_HPP
#define NGMRES_SOLVERS_HPP

#include "ngmres/linalg.hpp"
#include "ngmres/problems.hpp"
#include "ngmres/system.hpp"
#include "ngmres/trace.hpp"

namespace ngmres
{

// All residuals use the sign convention r = A x - b. Every solver records
// x_0 as the first trace entry and one entry per iteration after it.

/// GMRES via Arnoldi (modified Gram-Schmidt, one reorthogonalisation pass)
/// and Givens rotations. The Hessenberg least-squares problem is solved at
/// every step so each intermediate iterate x_j is recorded. A zero
/// subdiagonal entry ends the run (exact solution in the Krylov space, or
/// Termination::breakdown when the residual is still above tolerance).
IterationTrace gmres(const LinearSystem &system, const Vector &x0, const SolveConfig &cfg);

/// NGMRES(m): x_{k+1} = q(x_k) + sum_i beta_i (q(x_k) - x_{k-i}) with beta the
/// minimum-norm minimiser of ||M r_k - W_k beta||.
IterationTrace ngmres(const LinearSystem &system, const Vector &x0, WindowSize window,
                      const SolveConfig &cfg);

/// Anderson acceleration AA(m): x_{k+1} = q(x_k) + sum_{i>=1} gamma_i
/// (q(x_k) - q(x_{k-i})), gamma minimising ||r_k + sum gamma_i (r_k - r_{k-i})||.
IterationTrace anderson(const LinearSystem &system, const Vector &x0, WindowSize window,
                        const SolveConfig &cfg);

// Minimal residual iteration, identical to NGMRES(0) and GMRES(1).
IterationTrace mr_iteration(const LinearSystem &system, const Vector &x0,
                            const SolveConfig &cfg);

/// NGMRES(1) through its 2x2 normal equations and the three-term update
/// x_{k+1} = x_k - (1 + beta_0 + beta_1) r_k + beta_1 (x_k - x_{k-1}).
/// A numerically singular 2x2 system falls back to its minimum-norm
/// solution and the record's min_norm_applied flag is set.
IterationTrace ngmres1_three_term(const LinearSystem &system, const Vector &x0,
                                  const SolveConfig &cfg);

/// Conjugate residual method for symmetric systems. Throws
/// std::invalid_argument unless the system is declared symmetric.
IterationTrace conjugate_residual(const LinearSystem &system, const Vector &x0,
                                  const SolveConfig &cfg);

// Convenience overloads running against the plain (unpreconditioned) problem.
IterationTrace gmres(const Problem &p, const Vector &x0, const SolveConfig &cfg);
IterationTrace ngmres(const Problem &p, const Vector &x0, WindowSize window,
                      const SolveConfig &cfg);
IterationTrace anderson(const Problem &p, const Vector &x0, WindowSize window,
                        const SolveConfig &cfg);
IterationTrace mr_iteration(const Problem &p, const Vector &x0, const SolveConfig &cfg);
IterationTrace ngmres1_three_term(const Problem &p, const Vector &x0, const SolveConfig &cfg);
IterationTrace conjugate_residual(const Problem &p, const Vector &x0, const SolveConfig &cfg);

// Runs `method` with `window` (ignored by methods without one).
IterationTrace solve(Method method, const LinearSystem &system, const Vector &x0,
                     WindowSize window, const SolveConfig &cfg);

// Largest |r_k - (A x_k - b)| / max(||r_k||, ||r_0||) over the trace.
double residual_drift(const IterationTrace &trace, const LinearSystem &system);

}  // namespace ngmres

#endif  // NGMRES_SOLVERS_HPP
