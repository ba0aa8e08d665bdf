// Command-line front end: run experiments, re-check stored runs, run the
// acceptance suite, and write generated problems as Matrix Market files.
//
// Exit status: 0 all asserted checks pass, 1 a check failed, 2 usage,
// configuration or I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ngmres/acceptance.hpp"
#include "ngmres/harness.hpp"
#include "ngmres/io.hpp"
#include "ngmres/matrix_market.hpp"

namespace
{

constexpr int exit_pass = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_usage = 2;

struct Overrides
{
  std::string config;
  std::string problem;
  std::vector<std::string> solvers;
  std::string window;
  std::string x0;
  std::optional<long long> seed;
  std::optional<double> tol;
  std::optional<long long> max_iter;
  std::optional<long long> n;
  std::string out;
  std::vector<std::string> settings;  // key=value
};

void add_problem_options(CLI::App *cmd, Overrides &o)
{
  cmd->add_option("--problem", o.problem,
                  "conv_diffusion | shifted_skew | cyclic_shift | identity | random_dense | "
                  "random_positive_real | random | matrix_market");
  cmd->add_option("--n", o.n, "Problem size (grid points per side for conv_diffusion)");
  cmd->add_option("--set", o.settings, "Any config key as key=value (repeatable)");
  cmd->add_option("--out", o.out, "Output directory");
}

ngmres::ExperimentConfig resolve(const Overrides &o)
{
  ngmres::ExperimentConfig cfg;
  if (!o.config.empty())
  {
    cfg = ngmres::load_config(o.config);
  }
  // Flags override the file; --set entries are applied last.
  if (!o.problem.empty())
  {
    cfg.set("problem", o.problem);
  }
  if (o.n)
  {
    cfg.set("n", std::to_string(*o.n));
  }
  if (!o.solvers.empty())
  {
    std::string joined;
    for (const auto &s : o.solvers)
    {
      joined += (joined.empty() ? "" : ",") + s;
    }
    cfg.set("solvers", joined);
  }
  if (!o.window.empty())
  {
    cfg.set("window", o.window);
  }
  if (!o.x0.empty())
  {
    cfg.set("x0", o.x0);
  }
  if (o.seed)
  {
    cfg.set("seed", std::to_string(*o.seed));
  }
  if (o.tol)
  {
    cfg.set("tol", ngmres::format_double(*o.tol));
  }
  if (o.max_iter)
  {
    cfg.set("max_iter", std::to_string(*o.max_iter));
  }
  if (!o.out.empty())
  {
    cfg.set("out", o.out);
  }
  for (const auto &kv : o.settings)
  {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
    {
      throw ngmres::ConfigError("--set", "expected key=value, got '" + kv + "'");
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

int cmd_run(const Overrides &o, bool quiet)
{
  const ngmres::ExperimentConfig cfg = resolve(o);
  const ngmres::RunArtifact art = ngmres::run_experiment(cfg);
  const auto files = ngmres::write_artifacts(art);
  if (!quiet)
  {
    std::cout << art.summary();
    std::cout << "\nwrote:\n";
    for (const auto &f : files)
    {
      std::cout << "  " << f.string() << "\n";
    }
  }
  else
  {
    std::cout << (art.pass() ? "PASS" : "FAIL") << "  " << cfg.name << "\n";
  }
  return art.pass() ? exit_pass : exit_check_failed;
}

int cmd_check(const std::string &dir)
{
  const ngmres::StoredCheck result = ngmres::check_stored_run(dir);
  for (const auto &line : result.lines)
  {
    std::cout << line << "\n";
  }
  std::cout << "verdict: " << (result.pass ? "PASS" : "FAIL") << "\n";
  return result.pass ? exit_pass : exit_check_failed;
}

int cmd_accept(const std::vector<int> &only, bool quiet)
{
  for (int id : only)
  {
    if (id < 1 || id > ngmres::acceptance_criterion_count)
    {
      std::cerr << "error: no acceptance criterion " << id << "\n";
      return exit_usage;
    }
  }
  const std::set<int> selected(only.begin(), only.end());
  const auto results =
      ngmres::run_acceptance(std::cout, selected, ngmres::default_hooks(), !quiet);
  int failed = 0;
  for (const auto &r : results)
  {
    failed += r.pass ? 0 : 1;
  }
  std::cout << (results.size() - static_cast<std::size_t>(failed)) << "/" << results.size()
            << " criteria passed\n";
  return failed == 0 ? exit_pass : exit_check_failed;
}

int cmd_generate(const Overrides &o)
{
  ngmres::ExperimentConfig cfg = resolve(o);
  const ngmres::Problem p = ngmres::build_problem(cfg.problem);
  const std::filesystem::path dir = cfg.out;
  std::filesystem::create_directories(dir);
  const auto write_matrix = [&](const std::filesystem::path &path, const auto &value) {
    ngmres::write_atomically(path,
                             [&](std::ostream &out) { ngmres::write_matrix_market(out, value); });
    std::cout << "  " << path.string() << "\n";
  };
  std::cout << p.label() << " (n = " << p.size() << ", " << ngmres::to_string(p.symmetry())
            << ")\n";
  write_matrix(dir / "A.mtx", p.matrix());
  write_matrix(dir / "b.mtx", p.rhs());
  if (p.exact_solution())
  {
    write_matrix(dir / "x_exact.mtx", *p.exact_solution());
  }
  return exit_pass;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"NGMRES / GMRES / Anderson experiment harness"};
  app.require_subcommand(1);

  Overrides run_opts;
  bool run_quiet = false;
  auto *run = app.add_subcommand("run", "Run an experiment and write its artifacts");
  run->add_option("--config", run_opts.config, "Flat key = value config file")
      ->check(CLI::ExistingFile);
  add_problem_options(run, run_opts);
  run->add_option("--solver", run_opts.solvers,
                  "Solver, e.g. gmres, ngmres(1), ngmres(full), anderson(3), mr, ngmres1, cr "
                  "(repeatable)");
  run->add_option("--window", run_opts.window, "Default window for ngmres/anderson");
  run->add_option("--x0", run_opts.x0, "zeros | ones | random | random(<seed>)");
  run->add_option("--seed", run_opts.seed, "Seed of the random initial guess");
  run->add_option("--tol", run_opts.tol, "Relative residual tolerance");
  run->add_option("--max-iter", run_opts.max_iter, "Iteration cap");
  run->add_flag("--quiet", run_quiet, "Print only the verdict");

  std::string check_dir;
  auto *check = app.add_subcommand("check", "Re-run a stored experiment and verify its traces");
  check->add_option("dir", check_dir, "Output directory of an earlier run")
      ->required()
      ->check(CLI::ExistingDirectory);

  std::vector<int> only;
  bool accept_quiet = false;
  auto *accept = app.add_subcommand("accept", "Run the acceptance suite");
  accept->add_option("--only", only, "Criterion numbers to run (default: all)");
  accept->add_flag("--quiet", accept_quiet, "One line per criterion");

  Overrides gen_opts;
  auto *generate = app.add_subcommand("generate", "Write a problem as Matrix Market files");
  generate->add_option("--config", gen_opts.config, "Config file supplying the problem keys")
      ->check(CLI::ExistingFile);
  add_problem_options(generate, gen_opts);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? exit_pass : exit_usage;
  }

  try
  {
    if (*run)
    {
      return cmd_run(run_opts, run_quiet);
    }
    if (*check)
    {
      return cmd_check(check_dir);
    }
    if (*accept)
    {
      return cmd_accept(only, accept_quiet);
    }
    if (*generate)
    {
      return cmd_generate(gen_opts);
    }
  }
  catch (const ngmres::ConfigError &e)
  {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_usage;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
