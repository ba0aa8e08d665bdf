#ifndef NGMRES_TRACE_HPP
#define NGMRES_TRACE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ngmres/linalg.hpp"

namespace ngmres
{

// Arithmetic produced a NaN or infinity inside a solver.
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class Method
{
  gmres,
  ngmres,
  anderson,
  mr,
  ngmres1_three_term,
  conjugate_residual
};

std::string_view to_string(Method m);

enum class Termination
{
  tolerance,
  max_iter,
  stagnation,
  breakdown
};

std::string_view to_string(Termination t);
Termination parse_termination(std::string_view name);

enum class ResidualMode
{
  explicit_recompute,  // r_k = A x_k - b every iteration
  recursive            // the method's own residual update
};

std::string_view to_string(ResidualMode m);
ResidualMode parse_residual_mode(std::string_view name);

/// History depth m of a windowed method, or the unbounded (full) variant
/// with m_k = k.
class WindowSize
{
public:
  static WindowSize full() { return WindowSize(std::nullopt); }
  static WindowSize of(Index m);

  bool is_full() const { return !depth_.has_value(); }
  // Only meaningful when !is_full().
  Index value() const { return depth_.value_or(-1); }
  // m_k = min(k, m).
  Index depth_at(Index k) const { return depth_ ? std::min(k, *depth_) : k; }

  std::string to_string() const;
  static WindowSize parse(std::string_view text);

  friend bool operator==(const WindowSize &, const WindowSize &) = default;

private:
  explicit WindowSize(std::optional<Index> depth) : depth_(depth) {}
  std::optional<Index> depth_;
};

struct SolveConfig
{
  Index max_iter = 200;
  // Stop once ||r_k|| <= tol * ||r_0||.
  double tol = 1e-10;
  double rank_tol = default_rank_tol;
  ResidualMode residual_mode = ResidualMode::explicit_recompute;
  // Consecutive iterations with ||r_{k+1} - r_k|| <= 1e-14 ||r_0|| that end a
  // windowed accelerator with Termination::stagnation. Zero disables.
  int stagnation_window = 3;

  void validate() const;
};

inline constexpr double stagnation_rel_tol = 1e-14;

struct IterationRecord
{
  Vector x;
  Vector r;  // A x - b
  double resnorm = 0.0;
  // Coefficients of the step that produced this iterate; empty for k = 0.
  //   gmres:              Hessenberg least-squares solution y
  //   ngmres, ngmres1:    beta^(k-1)
  //   anderson:           gamma^(k-1)
  //   mr:                 [alpha_{k-1}]
  //   conjugate_residual: [alpha_{k-1}, beta_{k-1}]
  Vector coefficients;
  // Numerical rank of the inner least-squares problem, -1 when there is none.
  Index rank = -1;
  bool min_norm_applied = false;
};

struct IterationTrace
{
  Method method = Method::gmres;
  WindowSize window = WindowSize::full();
  std::vector<IterationRecord> records;
  Termination termination = Termination::max_iter;

  // e.g. "gmres", "ngmres(1)", "ngmres(full)", "anderson(3)".
  std::string label() const;
  Index iterations() const { return static_cast<Index>(records.size()) - 1; }
  double initial_resnorm() const { return records.empty() ? 0.0 : records.front().resnorm; }
  std::vector<double> resnorms() const;
};

}  // namespace ngmres

#endif  // NGMRES_TRACE_HPP
