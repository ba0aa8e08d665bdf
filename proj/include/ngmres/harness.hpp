#ifndef NGMRES_HARNESS_HPP
#define NGMRES_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ngmres/problems.hpp"
#include "ngmres/trace.hpp"

namespace ngmres
{

// Invalid experiment configuration; field() names the offending key.
class ConfigError : public std::invalid_argument
{
public:
  ConfigError(std::string field, const std::string &message);
  const std::string &field() const { return field_; }

private:
  std::string field_;
};

struct ProblemSpec
{
  // conv_diffusion | shifted_skew | cyclic_shift | identity | random_dense |
  // random_positive_real | random | matrix_market
  std::string generator = "conv_diffusion";
  Index n = 32;
  // Mesh Reynolds number sigma h / 2 (= tau h / 2) unless sigma/tau are set.
  double gamma = 0.5;
  std::optional<double> sigma;
  std::optional<double> tau;
  StencilScaling scaling = StencilScaling::physical;
  double shift = 1.0;         // random_dense
  double min_sym_eig = 0.1;   // random_positive_real
  SymmetryClass symmetry = SymmetryClass::general;  // random, matrix_market
  std::uint64_t seed = 1;     // random generators
  std::filesystem::path matrix;  // matrix_market
  std::filesystem::path rhs;     // optional; b = A * ones when empty
};

struct SolverSpec
{
  Method method = Method::gmres;
  WindowSize window = WindowSize::full();

  std::string label() const;
  // "gmres", "ngmres(3)", "ngmres(full)", "anderson(2)", "mr", "ngmres1", "cr";
  // a bare "ngmres"/"anderson" takes default_window.
  static SolverSpec parse(std::string_view text, WindowSize default_window);
};

enum class GuessKind
{
  zeros,
  ones,
  random
};

enum class PreconditionerKind
{
  none,
  jacobi
};

struct ExperimentConfig
{
  std::string name = "experiment";
  ProblemSpec problem;
  std::vector<std::string> solver_names{"gmres", "ngmres"};
  WindowSize default_window = WindowSize::of(1);
  GuessKind x0 = GuessKind::random;
  std::uint64_t seed = 42;
  SolveConfig solve;
  PreconditionerKind preconditioner = PreconditionerKind::none;
  double compare_tol = 1e-8;
  double compare_floor = 1e-8;
  // Spectral bounds are computed densely only up to this size.
  Index bounds_max_n = 1024;
  std::filesystem::path out = "out";

  std::vector<SolverSpec> solvers() const;

  /// Sets one key from its text value; throws ConfigError naming the key.
  void set(std::string_view key, std::string_view value);
  void validate() const;
  // Flat key = value text, one key per line, readable by parse_config.
  std::string to_text() const;
};

/// Flat "key = value" lines; '#' starts a comment; later keys override
/// earlier ones. Errors carry the line number in the message.
ExperimentConfig parse_config(std::istream &in);
ExperimentConfig load_config(const std::filesystem::path &path);

Problem build_problem(const ProblemSpec &spec);

struct CheckVerdict
{
  std::string solver;
  std::string name;
  // Informational checks never affect the exit status.
  bool asserted = true;
  bool pass = true;
  std::string detail;
};

struct SolverOutcome
{
  SolverSpec spec;
  IterationTrace trace;
};

struct Comparison
{
  std::string reference;
  std::string other;
  std::optional<Index> divergence;
  double max_difference = 0.0;
};

struct RunArtifact
{
  ExperimentConfig config;
  std::string problem_label;
  Index n = 0;
  std::vector<SolverOutcome> outcomes;
  std::vector<Comparison> comparisons;
  std::vector<CheckVerdict> checks;

  bool pass() const;
  std::string summary() const;
};

/// Runs every solver and the diagnostics that apply to it. Does no I/O.
RunArtifact run_experiment(const ExperimentConfig &config);

// CSV schema: iter,resnorm,rank,min_norm_flag,termination.
void write_trace_csv(std::ostream &out, const IterationTrace &trace);

struct TraceTable
{
  std::vector<Index> iter;
  std::vector<double> resnorm;
  std::vector<Index> rank;
  std::vector<int> min_norm_flag;
  std::string termination;
};

TraceTable read_trace_csv(std::istream &in);
TraceTable read_trace_csv(const std::filesystem::path &path);

// Self-contained SVG: log10(||r_k|| / ||r_0||) against k, one line per solver.
std::string render_convergence_svg(const RunArtifact &artifact);

std::string trace_file_name(const SolverSpec &spec);

/// Writes trace_<solver>.csv, comparison.csv, convergence.svg, summary.txt
/// and config.txt into config.out, each through write_atomically. Returns the
/// written paths.
std::vector<std::filesystem::path> write_artifacts(const RunArtifact &artifact);

struct StoredCheck
{
  bool pass = true;
  std::vector<std::string> lines;
};

/// Re-runs the experiment recorded in dir/config.txt and verifies that every
/// stored trace CSV matches the recomputed trace at 17 significant digits,
/// together with the recomputed diagnostics.
StoredCheck check_stored_run(const std::filesystem::path &dir);

}  // namespace ngmres

#endif  // NGMRES_HARNESS_HPP
