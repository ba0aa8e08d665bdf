#include "ngmres/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "ngmres/diagnostics.hpp"
#include "ngmres/io.hpp"
#include "ngmres/matrix_market.hpp"
#include "ngmres/solvers.hpp"
#include "ngmres/system.hpp"

namespace ngmres
{

ConfigError::ConfigError(std::string field, const std::string &message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field))
{
}

namespace
{

// Thresholds for the diagnostics attached to a run. They match the
// acceptance suite: relations are judged while ||r|| > 1e-6 ||r_0||, where
// rounding in the explicit residual stays well below the tolerance.
constexpr double orth_tol = 1e-9;
constexpr double orth_floor = 1e-6;
constexpr double orth_resolve = 1e-6;
constexpr double poly_rec_tol = 1e-8;
constexpr double poly_one_tol = 1e-10;
constexpr Index poly_max_n = 64;
constexpr Index poly_max_k = 20;

std::string trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
  {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s)
{
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_double(std::string_view key, std::string_view value)
{
  const std::string text(value);
  char *end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
  {
    throw ConfigError(std::string(key), "expected a finite number, got '" + text + "'");
  }
  return v;
}

long long parse_integer(std::string_view key, std::string_view value)
{
  const std::string text(value);
  char *end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size())
  {
    throw ConfigError(std::string(key), "expected an integer, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_seed(std::string_view key, std::string_view value)
{
  const long long v = parse_integer(key, value);
  if (v < 0)
  {
    throw ConfigError(std::string(key), "must be non-negative");
  }
  return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split_list(std::string_view value)
{
  std::vector<std::string> out;
  std::string current;
  int depth = 0;
  for (char c : value)
  {
    if (c == '(')
    {
      ++depth;
    }
    else if (c == ')')
    {
      --depth;
    }
    if ((c == ',' || c == ' ') && depth == 0)
    {
      if (!trim(current).empty())
      {
        out.push_back(trim(current));
      }
      current.clear();
      continue;
    }
    current += c;
  }
  if (!trim(current).empty())
  {
    out.push_back(trim(current));
  }
  return out;
}

std::string_view to_string(GuessKind g)
{
  switch (g)
  {
    case GuessKind::zeros:
      return "zeros";
    case GuessKind::ones:
      return "ones";
    case GuessKind::random:
      return "random";
  }
  return "random";
}

std::string join(const std::vector<std::string> &items, const char *sep)
{
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i)
  {
    out += (i ? sep : "") + items[i];
  }
  return out;
}

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string SolverSpec::label() const
{
  std::string name(to_string(method));
  if (method == Method::ngmres || method == Method::anderson)
  {
    name += "(" + window.to_string() + ")";
  }
  return name;
}

SolverSpec SolverSpec::parse(std::string_view text, WindowSize default_window)
{
  const std::string t = lower(trim(text));
  std::string base = t;
  std::optional<WindowSize> window;
  const auto open = t.find('(');
  if (open != std::string::npos)
  {
    if (t.back() != ')')
    {
      throw ConfigError("solvers", "malformed solver '" + t + "'");
    }
    base = t.substr(0, open);
    try
    {
      window = WindowSize::parse(t.substr(open + 1, t.size() - open - 2));
    }
    catch (const std::invalid_argument &e)
    {
      throw ConfigError("solvers", "bad window in '" + t + "': " + e.what());
    }
  }

  SolverSpec s;
  if (base == "gmres")
  {
    s.method = Method::gmres;
  }
  else if (base == "ngmres")
  {
    s.method = Method::ngmres;
  }
  else if (base == "anderson" || base == "aa")
  {
    s.method = Method::anderson;
  }
  else if (base == "mr")
  {
    s.method = Method::mr;
  }
  else if (base == "ngmres1")
  {
    s.method = Method::ngmres1_three_term;
  }
  else if (base == "cr")
  {
    s.method = Method::conjugate_residual;
  }
  else
  {
    throw ConfigError("solvers", "unknown solver '" + base +
                                     "' (known: gmres, ngmres, anderson, mr, ngmres1, cr)");
  }
  const bool windowed = s.method == Method::ngmres || s.method == Method::anderson;
  if (window && !windowed)
  {
    throw ConfigError("solvers", "solver '" + base + "' takes no window");
  }
  if (windowed)
  {
    s.window = window.value_or(default_window);
  }
  else if (s.method == Method::mr)
  {
    s.window = WindowSize::of(0);
  }
  else if (s.method == Method::ngmres1_three_term)
  {
    s.window = WindowSize::of(1);
  }
  return s;
}

std::vector<SolverSpec> ExperimentConfig::solvers() const
{
  std::vector<SolverSpec> out;
  for (const auto &name : solver_names)
  {
    out.push_back(SolverSpec::parse(name, default_window));
  }
  return out;
}

void ExperimentConfig::set(std::string_view key_in, std::string_view value_in)
{
  const std::string key = lower(trim(key_in));
  const std::string value = trim(value_in);
  auto &p = problem;
  try
  {
    if (key == "name")
    {
      name = value;
    }
    else if (key == "problem")
    {
      p.generator = lower(value);
    }
    else if (key == "n")
    {
      p.n = static_cast<Index>(parse_integer(key, value));
    }
    else if (key == "gamma")
    {
      p.gamma = parse_double(key, value);
    }
    else if (key == "sigma")
    {
      p.sigma = parse_double(key, value);
    }
    else if (key == "tau")
    {
      p.tau = parse_double(key, value);
    }
    else if (key == "scaling")
    {
      p.scaling = parse_stencil_scaling(lower(value));
    }
    else if (key == "shift")
    {
      p.shift = parse_double(key, value);
    }
    else if (key == "min_sym_eig")
    {
      p.min_sym_eig = parse_double(key, value);
    }
    else if (key == "symmetry")
    {
      p.symmetry = parse_symmetry_class(lower(value));
    }
    else if (key == "problem_seed")
    {
      p.seed = parse_seed(key, value);
    }
    else if (key == "matrix")
    {
      p.matrix = value;
    }
    else if (key == "rhs")
    {
      p.rhs = value;
    }
    else if (key == "solvers" || key == "solver")
    {
      solver_names = split_list(value);
    }
    else if (key == "window")
    {
      default_window = WindowSize::parse(lower(value));
    }
    else if (key == "x0")
    {
      const std::string v = lower(value);
      if (v == "zeros")
      {
        x0 = GuessKind::zeros;
      }
      else if (v == "ones")
      {
        x0 = GuessKind::ones;
      }
      else if (v == "random")
      {
        x0 = GuessKind::random;
      }
      else if (v.rfind("random(", 0) == 0 && v.back() == ')')
      {
        x0 = GuessKind::random;
        seed = parse_seed(key, v.substr(7, v.size() - 8));
      }
      else
      {
        throw ConfigError(key, "expected zeros, ones, random or random(<seed>), got '" + value + "'");
      }
    }
    else if (key == "seed")
    {
      seed = parse_seed(key, value);
    }
    else if (key == "tol")
    {
      solve.tol = parse_double(key, value);
    }
    else if (key == "max_iter")
    {
      solve.max_iter = static_cast<Index>(parse_integer(key, value));
    }
    else if (key == "rank_tol")
    {
      solve.rank_tol = parse_double(key, value);
    }
    else if (key == "residual_mode")
    {
      solve.residual_mode = parse_residual_mode(lower(value));
    }
    else if (key == "stagnation_window")
    {
      solve.stagnation_window = static_cast<int>(parse_integer(key, value));
    }
    else if (key == "preconditioner")
    {
      const std::string v = lower(value);
      if (v == "none")
      {
        preconditioner = PreconditionerKind::none;
      }
      else if (v == "jacobi")
      {
        preconditioner = PreconditionerKind::jacobi;
      }
      else
      {
        throw ConfigError(key, "expected none or jacobi, got '" + value + "'");
      }
    }
    else if (key == "compare_tol")
    {
      compare_tol = parse_double(key, value);
    }
    else if (key == "compare_floor")
    {
      compare_floor = parse_double(key, value);
    }
    else if (key == "bounds_max_n")
    {
      bounds_max_n = static_cast<Index>(parse_integer(key, value));
    }
    else if (key == "out")
    {
      out = value;
    }
    else
    {
      throw ConfigError(key, "unknown key");
    }
  }
  catch (const ConfigError &)
  {
    throw;
  }
  catch (const std::invalid_argument &e)
  {
    throw ConfigError(key, e.what());
  }
}

void ExperimentConfig::validate() const
{
  static const char *generators[] = {"conv_diffusion", "shifted_skew",        "cyclic_shift",
                                     "identity",       "random_dense",        "random_positive_real",
                                     "random",         "matrix_market"};
  if (std::find(std::begin(generators), std::end(generators), problem.generator) ==
      std::end(generators))
  {
    throw ConfigError("problem", "unknown generator '" + problem.generator + "'");
  }
  if (problem.generator == "matrix_market")
  {
    if (problem.matrix.empty())
    {
      throw ConfigError("matrix", "required when problem = matrix_market");
    }
  }
  else if (problem.n < 1)
  {
    throw ConfigError("n", "must be positive");
  }
  if (solver_names.empty())
  {
    throw ConfigError("solvers", "at least one solver is required");
  }
  (void)solvers();
  try
  {
    solve.validate();
  }
  catch (const std::invalid_argument &e)
  {
    throw ConfigError("solve", e.what());
  }
  if (!(compare_tol > 0.0))
  {
    throw ConfigError("compare_tol", "must be positive");
  }
  if (compare_floor < 0.0)
  {
    throw ConfigError("compare_floor", "must be non-negative");
  }
}

std::string ExperimentConfig::to_text() const
{
  std::ostringstream o;
  const auto &p = problem;
  o << "name = " << name << "\n";
  o << "problem = " << p.generator << "\n";
  if (p.generator == "matrix_market")
  {
    o << "matrix = " << p.matrix.string() << "\n";
    if (!p.rhs.empty())
    {
      o << "rhs = " << p.rhs.string() << "\n";
    }
    o << "symmetry = " << to_string(p.symmetry) << "\n";
  }
  else
  {
    o << "n = " << p.n << "\n";
  }
  if (p.generator == "conv_diffusion" || p.generator == "shifted_skew")
  {
    o << "gamma = " << format_double(p.gamma) << "\n";
    if (p.sigma)
    {
      o << "sigma = " << format_double(*p.sigma) << "\n";
    }
    if (p.tau)
    {
      o << "tau = " << format_double(*p.tau) << "\n";
    }
    o << "scaling = " << to_string(p.scaling) << "\n";
  }
  if (p.generator == "random_dense")
  {
    o << "shift = " << format_double(p.shift) << "\n";
  }
  if (p.generator == "random_positive_real")
  {
    o << "min_sym_eig = " << format_double(p.min_sym_eig) << "\n";
  }
  if (p.generator == "random")
  {
    o << "symmetry = " << to_string(p.symmetry) << "\n";
  }
  if (p.generator.rfind("random", 0) == 0)
  {
    o << "problem_seed = " << p.seed << "\n";
  }
  o << "solvers = " << join(solver_names, ", ") << "\n";
  o << "window = " << default_window.to_string() << "\n";
  o << "x0 = " << to_string(x0) << "\n";
  o << "seed = " << seed << "\n";
  o << "tol = " << format_double(solve.tol) << "\n";
  o << "max_iter = " << solve.max_iter << "\n";
  o << "rank_tol = " << format_double(solve.rank_tol) << "\n";
  o << "residual_mode = " << to_string(solve.residual_mode) << "\n";
  o << "stagnation_window = " << solve.stagnation_window << "\n";
  o << "preconditioner = " << (preconditioner == PreconditionerKind::jacobi ? "jacobi" : "none")
    << "\n";
  o << "compare_tol = " << format_double(compare_tol) << "\n";
  o << "compare_floor = " << format_double(compare_floor) << "\n";
  o << "bounds_max_n = " << bounds_max_n << "\n";
  o << "out = " << out.string() << "\n";
  return o.str();
}

ExperimentConfig parse_config(std::istream &in)
{
  ExperimentConfig cfg;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line))
  {
    ++number;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty())
    {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos)
    {
      throw ConfigError("line " + std::to_string(number), "expected 'key = value'");
    }
    try
    {
      cfg.set(body.substr(0, eq), body.substr(eq + 1));
    }
    catch (const ConfigError &e)
    {
      throw ConfigError(e.field(), std::string(e.what()) + " (line " + std::to_string(number) + ")");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::runtime_error("cannot open config '" + path.string() + "'");
  }
  return parse_config(in);
}

// ---------------------------------------------------------------------------

Problem build_problem(const ProblemSpec &spec)
{
  const auto &g = spec.generator;
  if (g == "conv_diffusion" || g == "shifted_skew")
  {
    const double sigma = spec.sigma.value_or(convection_from_mesh_reynolds(spec.n, spec.gamma));
    const double tau = spec.tau.value_or(convection_from_mesh_reynolds(spec.n, spec.gamma));
    Problem k = build_convection_diffusion(spec.n, sigma, tau, spec.scaling);
    return g == "shifted_skew" ? to_shifted_skew(k) : k;
  }
  if (g == "cyclic_shift")
  {
    return build_cyclic_shift(spec.n);
  }
  if (g == "identity")
  {
    return build_identity(spec.n);
  }
  if (g == "random_dense")
  {
    return build_random_dense(spec.n, spec.shift, spec.seed);
  }
  if (g == "random_positive_real")
  {
    return build_random_positive_real(spec.n, spec.min_sym_eig, spec.seed);
  }
  if (g == "random")
  {
    return build_random_with_symmetry(spec.n, spec.symmetry, spec.seed);
  }
  if (g == "matrix_market")
  {
    SparseMatrix a = read_matrix_market(spec.matrix);
    if (spec.rhs.empty())
    {
      return with_ones_solution(std::move(a), spec.symmetry, spec.matrix.filename().string());
    }
    const DenseMatrix b = to_dense(read_matrix_market(spec.rhs));
    if (b.cols() != 1)
    {
      throw ConfigError("rhs", "expected a single column");
    }
    return Problem(std::move(a), b.col(0), spec.symmetry, spec.matrix.filename().string());
  }
  throw ConfigError("problem", "unknown generator '" + g + "'");
}

// ---------------------------------------------------------------------------

bool RunArtifact::pass() const
{
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckVerdict &c) { return !c.asserted || c.pass; });
}

namespace
{

bool structured(SymmetryClass s)
{
  return s == SymmetryClass::symmetric || s == SymmetryClass::shifted_skew_symmetric;
}

void add(RunArtifact &art, const std::string &solver, std::string name, bool asserted, bool pass,
         std::string detail)
{
  art.checks.push_back({solver, std::move(name), asserted, pass, std::move(detail)});
}

void orthogonality_checks(RunArtifact &art, const SolverOutcome &o, const LinearSystem &sys,
                          std::optional<double> a_norm)
{
  const Method m = o.spec.method;
  const std::string label = o.spec.label();
  OrthogonalityOptions opts;
  opts.tol = orth_tol;
  opts.floor = orth_floor;
  opts.resolve = orth_resolve;
  opts.a_norm = a_norm;
  if (m == Method::ngmres || m == Method::ngmres1_three_term || m == Method::mr ||
      m == Method::gmres)
  {
    const WindowSize w = m == Method::gmres ? WindowSize::full() : o.spec.window;
    const auto rep = check_orthogonality(o.trace, sys, w, opts);
    add(art, label, "orthogonality", true, rep.pass,
        "worst scaled relation " + sci(rep.worst()) + " <= " + sci(orth_tol));
  }
  else if (m == Method::anderson)
  {
    const auto rep = check_aa_orthogonality(o.trace, sys, o.spec.window, opts);
    add(art, label, "anderson_orthogonality", false, rep.singular_m || rep.pass,
        rep.singular_m ? std::string("M = I - A is singular; not evaluated")
                       : "worst scaled relation " + sci(rep.worst()));
  }
}

void polynomial_check(RunArtifact &art, const SolverOutcome &o, const LinearSystem &sys)
{
  const Method m = o.spec.method;
  if (!(m == Method::ngmres || m == Method::ngmres1_three_term || m == Method::mr) ||
      sys.size() > poly_max_n)
  {
    return;
  }
  IterationTrace head = o.trace;
  if (head.iterations() > poly_max_k)
  {
    head.records.resize(static_cast<std::size_t>(poly_max_k) + 1);
  }
  auto poly = track_polynomial(head);
  verify_polynomial(poly, head, sys);
  const double rec = poly.max_reconstruction_error();
  const double one = poly.max_deviation_at_one();
  add(art, o.spec.label(), "residual_polynomial", true,
      rec <= poly_rec_tol && one <= poly_one_tol,
      "reconstruction " + sci(rec) + " <= " + sci(poly_rec_tol) + ", |p(1)-1| " + sci(one) +
          " <= " + sci(poly_one_tol) + " over " + std::to_string(head.iterations()) + " steps");
}

void equivalence_checks(RunArtifact &art, const SolverOutcome &o, const SolverOutcome &ref,
                        SymmetryClass symmetry)
{
  const Method m = o.spec.method;
  const auto &cfg = art.config;
  const bool full_ng = m == Method::ngmres && o.spec.window.is_full();
  const bool windowed_ng =
      (m == Method::ngmres && (o.spec.window.is_full() || o.spec.window.value() >= 1)) ||
      m == Method::ngmres1_three_term || m == Method::conjugate_residual;
  if (full_ng || (windowed_ng && structured(symmetry)))
  {
    const auto v = check_gmres_equivalence(ref.trace, o.trace, cfg.compare_tol, cfg.compare_floor);
    std::string detail =
        !v.hypothesis_met
            ? std::string("GMRES does not decrease strictly at its first step; no claim")
            : "residuals equal GMRES through iterate " + std::to_string(v.verified_through) +
                  ", worst " + sci(v.max_difference) + " <= " + sci(cfg.compare_tol);
    add(art, o.spec.label(), "gmres_equivalence", true, v.pass, detail);
  }
  if (m == Method::anderson && o.spec.window.is_full())
  {
    const auto v = check_anderson_linkage(ref.trace, o.trace, cfg.compare_tol, cfg.compare_floor);
    add(art, o.spec.label(), "anderson_linkage", true, v.pass,
        !v.hypothesis_met ? std::string("GMRES does not decrease strictly; no claim")
                          : "x^A_{j+1} = x^G_j - r^G_j through " +
                                std::to_string(v.verified_through) + ", worst " +
                                sci(v.max_difference));
  }
}

}  // namespace

RunArtifact run_experiment(const ExperimentConfig &config)
{
  config.validate();
  RunArtifact art;
  art.config = config;

  const Problem problem = build_problem(config.problem);
  const Index n = problem.size();
  art.n = n;
  art.problem_label = problem.label();

  const LinearSystem sys = config.preconditioner == PreconditionerKind::jacobi
                               ? left_precondition(problem, jacobi_preconditioner(problem.matrix()))
                               : LinearSystem(problem);

  Vector x0;
  switch (config.x0)
  {
    case GuessKind::zeros:
      x0 = zeros_guess(n);
      break;
    case GuessKind::ones:
      x0 = ones_guess(n);
      break;
    case GuessKind::random:
      x0 = random_guess(n, config.seed);
      break;
  }

  for (const SolverSpec &spec : config.solvers())
  {
    art.outcomes.push_back({spec, solve(spec.method, sys, x0, spec.window, config.solve)});
  }

  const bool dense_ok = n <= config.bounds_max_n;
  std::optional<double> a_norm;
  std::optional<BoundReport> bounds;
  if (dense_ok)
  {
    const DenseMatrix a = sys.dense_operator();
    bounds = compute_bounds(a);
    a_norm = bounds->sigma;
  }

  const SolverOutcome *ref = nullptr;
  for (const auto &o : art.outcomes)
  {
    if (o.spec.method == Method::gmres)
    {
      ref = &o;
      break;
    }
  }
  const SolverOutcome *cmp_ref = ref ? ref : &art.outcomes.front();

  for (const auto &o : art.outcomes)
  {
    const std::string label = o.spec.label();
    if (o.spec.method != Method::anderson)
    {
      const double v = monotonicity_violation(o.trace);
      add(art, label, "monotonicity", true, v <= 0.0,
          "largest increase " + sci(std::max(0.0, v + 1e-12)) + " ||r0|| (slack 1e-12)");
    }
    if (dense_ok)
    {
      orthogonality_checks(art, o, sys, a_norm);
      polynomial_check(art, o, sys);
      if (o.spec.method != Method::anderson)
      {
        const auto c = check_contraction(o.trace, *bounds);
        std::vector<std::string> held;
        for (const auto &b : c.checks)
        {
          if (b.applicable)
          {
            held.push_back(b.name + (b.pass ? " ok" : " FAILED") + " (" + sci(b.worst_ratio) + ")");
          }
        }
        add(art, label, "contraction_bounds", true, c.pass,
            held.empty() ? std::string("no hypothesis holds") : join(held, ", "));
      }
    }
    if (ref && &o != ref)
    {
      equivalence_checks(art, o, *ref, sys.symmetry());
    }
    if (&o != cmp_ref)
    {
      art.comparisons.push_back(
          {cmp_ref->spec.label(), label,
           compare_traces(o.trace, cmp_ref->trace, config.compare_tol, config.compare_floor),
           max_residual_difference(o.trace, cmp_ref->trace, config.compare_floor)});
    }
  }
  return art;
}

std::string RunArtifact::summary() const
{
  std::ostringstream o;
  o << "experiment: " << config.name << "\n";
  o << "problem: " << problem_label << " (n = " << n << ", generator " << config.problem.generator
    << ")\n";
  o << "x0: " << to_string(config.x0);
  if (config.x0 == GuessKind::random)
  {
    o << " (seed " << config.seed << ")";
  }
  o << "\n";
  if (config.problem.generator.rfind("random", 0) == 0)
  {
    o << "problem seed: " << config.problem.seed << "\n";
  }
  o << "preconditioner: " << (config.preconditioner == PreconditionerKind::jacobi ? "jacobi" : "none")
    << "\n\n";

  o << "solver             iters  final ||r||/||r0||   termination\n";
  for (const auto &s : outcomes)
  {
    const double r0 = s.trace.initial_resnorm();
    const double rel = r0 > 0.0 ? s.trace.records.back().resnorm / r0 : 0.0;
    char line[160];
    std::snprintf(line, sizeof line, "%-18s %5ld  %-20.6e %s\n", s.spec.label().c_str(),
                  static_cast<long>(s.trace.iterations()), rel,
                  std::string(to_string(s.trace.termination)).c_str());
    o << line;
  }

  if (!comparisons.empty())
  {
    o << "\ndivergence index (first step whose residuals differ by more than "
      << sci(config.compare_tol) << " ||r0||, above " << sci(config.compare_floor) << " ||r0||)\n";
    for (const auto &c : comparisons)
    {
      o << "  " << c.other << " vs " << c.reference << ": "
        << (c.divergence ? std::to_string(*c.divergence) : std::string("NONE"))
        << " (max difference " << sci(c.max_difference) << ")\n";
    }
  }

  o << "\nchecks\n";
  for (const auto &c : checks)
  {
    const char *tag = !c.asserted ? "INFO" : (c.pass ? "PASS" : "FAIL");
    o << "  " << tag << "  " << c.solver << " " << c.name << ": " << c.detail << "\n";
  }
  o << "\nverdict: " << (pass() ? "PASS" : "FAIL") << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------

void write_trace_csv(std::ostream &out, const IterationTrace &trace)
{
  out << "iter,resnorm,rank,min_norm_flag,termination\n";
  for (std::size_t k = 0; k < trace.records.size(); ++k)
  {
    const auto &r = trace.records[k];
    out << k << ',' << format_double(r.resnorm) << ',' << r.rank << ','
        << (r.min_norm_applied ? 1 : 0) << ','
        << (k + 1 == trace.records.size() ? std::string(to_string(trace.termination))
                                          : std::string("-"))
        << '\n';
  }
}

TraceTable read_trace_csv(std::istream &in)
{
  TraceTable t;
  std::string line;
  if (!std::getline(in, line) || trim(line) != "iter,resnorm,rank,min_norm_flag,termination")
  {
    throw std::runtime_error("trace CSV: unexpected header");
  }
  std::size_t number = 1;
  while (std::getline(in, line))
  {
    ++number;
    if (trim(line).empty())
    {
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ','))
    {
      fields.push_back(trim(f));
    }
    if (fields.size() != 5)
    {
      throw std::runtime_error("trace CSV line " + std::to_string(number) + ": expected 5 fields");
    }
    try
    {
      t.iter.push_back(static_cast<Index>(parse_integer("iter", fields[0])));
      t.resnorm.push_back(parse_double("resnorm", fields[1]));
      t.rank.push_back(static_cast<Index>(parse_integer("rank", fields[2])));
      t.min_norm_flag.push_back(static_cast<int>(parse_integer("min_norm_flag", fields[3])));
    }
    catch (const ConfigError &e)
    {
      throw std::runtime_error("trace CSV line " + std::to_string(number) + ": " + e.what());
    }
    if (fields[4] != "-")
    {
      t.termination = fields[4];
    }
  }
  return t;
}

TraceTable read_trace_csv(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw std::runtime_error("cannot open '" + path.string() + "'");
  }
  return read_trace_csv(in);
}

std::string render_convergence_svg(const RunArtifact &art)
{
  const double width = 720, height = 440;
  const double left = 70, right = 170, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;
  constexpr double floor_exp = -17.0;

  Index kmax = 1;
  double ymin = 0.0, ymax = 0.0;
  std::vector<std::vector<double>> series;
  for (const auto &o : art.outcomes)
  {
    std::vector<double> s;
    const double r0 = o.trace.initial_resnorm();
    for (const auto &rec : o.trace.records)
    {
      const double rel = r0 > 0.0 ? rec.resnorm / r0 : 0.0;
      const double y = rel > 0.0 ? std::max(std::log10(rel), floor_exp) : floor_exp;
      s.push_back(y);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    kmax = std::max(kmax, o.trace.iterations());
    series.push_back(std::move(s));
  }
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax - ymin < 1.0)
  {
    ymin = ymax - 1.0;
  }

  const auto px = [&](double k) { return left + pw * k / static_cast<double>(kmax); };
  const auto py = [&](double y) { return top + ph * (ymax - y) / (ymax - ymin); };

  static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                  "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  static const char *dashes[] = {"", "6,3", "2,2", "8,3,2,3"};

  std::ostringstream o;
  char buf[256];
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << art.config.name << ": " << art.problem_label << "</text>\n";

  const int ystep = static_cast<int>(std::max(1.0, std::ceil((ymax - ymin) / 10.0)));
  for (int e = static_cast<int>(ymax); e >= static_cast<int>(ymin); e -= ystep)
  {
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ddd\"/>\n"
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" font-size=\"11\">1e%d</text>\n",
                  left, py(e), left + pw, py(e), left - 6, py(e) + 4, e);
    o << buf;
  }
  const Index xstep = std::max<Index>(1, (kmax + 9) / 10);
  for (Index k = 0; k <= kmax; k += xstep)
  {
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#eee\"/>\n"
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"11\">%ld</text>\n",
                  px(static_cast<double>(k)), top, px(static_cast<double>(k)), top + ph,
                  px(static_cast<double>(k)), top + ph + 16, static_cast<long>(k));
    o << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                "stroke=\"black\"/>\n",
                left, top, pw, ph);
  o << buf;
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12
    << "\" text-anchor=\"middle\" font-size=\"12\">iteration k</text>\n";
  o << "<text transform=\"translate(18," << top + ph / 2
    << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">||r_k|| / ||r_0||</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s)
  {
    const char *color = palette[s % 8];
    const char *dash = dashes[(s / 2) % 4];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
    if (*dash)
    {
      o << " stroke-dasharray=\"" << dash << "\"";
    }
    o << " points=\"";
    for (std::size_t k = 0; k < series[s].size(); ++k)
    {
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", k ? " " : "", px(static_cast<double>(k)),
                    py(series[s][k]));
      o << buf;
    }
    o << "\"/>\n";
    const double ly = top + 16 + 18 * static_cast<double>(s);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" "
                  "stroke-width=\"2\"%s%s%s/>\n",
                  left + pw + 12, ly, left + pw + 36, ly, color, *dash ? " stroke-dasharray=\"" : "",
                  dash, *dash ? "\"" : "");
    o << buf;
    o << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
      << art.outcomes[s].spec.label() << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string trace_file_name(const SolverSpec &spec)
{
  std::string name = "trace_";
  for (char c : spec.label())
  {
    if (c == '(')
    {
      name += '_';
    }
    else if (c != ')')
    {
      name += c;
    }
  }
  return name + ".csv";
}

std::vector<std::filesystem::path> write_artifacts(const RunArtifact &art)
{
  namespace fs = std::filesystem;
  const fs::path dir = art.config.out;
  fs::create_directories(dir);
  std::vector<fs::path> written;

  std::map<std::string, int> seen;
  for (const auto &o : art.outcomes)
  {
    if (seen[trace_file_name(o.spec)]++)
    {
      continue;  // duplicate solver entry: same trace
    }
    const fs::path p = dir / trace_file_name(o.spec);
    write_atomically(p, [&](std::ostream &out) { write_trace_csv(out, o.trace); });
    written.push_back(p);
  }

  const fs::path cmp = dir / "comparison.csv";
  write_atomically(cmp, [&](std::ostream &out) {
    out << "iter";
    std::size_t rows = 0;
    for (const auto &o : art.outcomes)
    {
      out << ',' << o.spec.label();
      rows = std::max(rows, o.trace.records.size());
    }
    out << '\n';
    for (std::size_t k = 0; k < rows; ++k)
    {
      out << k;
      for (const auto &o : art.outcomes)
      {
        out << ',';
        if (k < o.trace.records.size())
        {
          out << format_double(o.trace.records[k].resnorm);
        }
      }
      out << '\n';
    }
  });
  written.push_back(cmp);

  const fs::path svg = dir / "convergence.svg";
  const std::string svg_text = render_convergence_svg(art);
  write_atomically(svg, [&](std::ostream &out) { out << svg_text; });
  written.push_back(svg);

  const fs::path summary = dir / "summary.txt";
  const std::string summary_text = art.summary();
  write_atomically(summary, [&](std::ostream &out) { out << summary_text; });
  written.push_back(summary);

  const fs::path cfg = dir / "config.txt";
  const std::string cfg_text = art.config.to_text();
  write_atomically(cfg, [&](std::ostream &out) { out << cfg_text; });
  written.push_back(cfg);
  return written;
}

StoredCheck check_stored_run(const std::filesystem::path &dir)
{
  StoredCheck result;
  ExperimentConfig cfg = load_config(dir / "config.txt");
  cfg.out = dir;
  const RunArtifact art = run_experiment(cfg);

  for (const auto &o : art.outcomes)
  {
    const auto path = dir / trace_file_name(o.spec);
    const std::string label = o.spec.label();
    if (!std::filesystem::exists(path))
    {
      result.pass = false;
      result.lines.push_back("FAIL  " + label + ": missing " + path.filename().string());
      continue;
    }
    const TraceTable t = read_trace_csv(path);
    bool same = t.resnorm.size() == o.trace.records.size() &&
                t.termination == to_string(o.trace.termination);
    for (std::size_t k = 0; same && k < t.resnorm.size(); ++k)
    {
      const auto &rec = o.trace.records[k];
      same = t.resnorm[k] == rec.resnorm && t.rank[k] == rec.rank &&
             t.min_norm_flag[k] == (rec.min_norm_applied ? 1 : 0);
    }
    result.pass = result.pass && same;
    result.lines.push_back(std::string(same ? "PASS" : "FAIL") + "  " + label +
                           ": stored trace " + (same ? "reproduces" : "differs from") +
                           " the recomputed run (" + std::to_string(t.resnorm.size()) + " rows)");
  }
  for (const auto &c : art.checks)
  {
    const char *tag = !c.asserted ? "INFO" : (c.pass ? "PASS" : "FAIL");
    result.lines.push_back(std::string(tag) + "  " + c.solver + " " + c.name + ": " + c.detail);
  }
  result.pass = result.pass && art.pass();
  return result;
}

}  // namespace ngmres
