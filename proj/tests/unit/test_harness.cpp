#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ngmres/harness.hpp"

using namespace ngmres;
namespace fs = std::filesystem;

namespace
{

const fs::path config_dir = NGMRES_CONFIG_DIR;

ExperimentConfig from_text(const std::string &text)
{
  std::istringstream in(text);
  return parse_config(in);
}

fs::path scratch(const std::string &name)
{
  const fs::path dir = fs::temp_directory_path() / ("ngmres_harness_test_" + name);
  fs::remove_all(dir);
  return dir;
}

const SolverOutcome &outcome(const RunArtifact &art, const std::string &label)
{
  for (const auto &o : art.outcomes)
  {
    if (o.spec.label() == label)
    {
      return o;
    }
  }
  throw std::runtime_error("no solver " + label);
}

const Comparison &comparison(const RunArtifact &art, const std::string &other)
{
  for (const auto &c : art.comparisons)
  {
    if (c.other == other)
    {
      return c;
    }
  }
  throw std::runtime_error("no comparison for " + other);
}

std::string slurp(const fs::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Config, ParsesKeysCommentsAndOverrides)
{
  const auto cfg = from_text(
      "# comment\n"
      "name = t\n"
      "problem = cyclic_shift\n"
      "n = 7   # trailing\n"
      "solvers = gmres, ngmres(3), anderson\n"
      "window = 2\n"
      "n = 9\n");
  EXPECT_EQ(cfg.name, "t");
  EXPECT_EQ(cfg.problem.generator, "cyclic_shift");
  EXPECT_EQ(cfg.problem.n, 9);
  const auto s = cfg.solvers();
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[1].label(), "ngmres(3)");
  EXPECT_EQ(s[2].label(), "anderson(2)");
}

TEST(Config, ErrorsNameTheKeyAndLine)
{
  try
  {
    from_text("name = x\nn = twelve\n");
    FAIL();
  }
  catch (const ConfigError &e)
  {
    EXPECT_EQ(e.field(), "n");
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(from_text("bogus = 1\n"), ConfigError);
  EXPECT_THROW(from_text("no equals sign\n"), ConfigError);
  EXPECT_THROW(from_text("solvers = gmres(3)\n").validate(), ConfigError);
  EXPECT_THROW(from_text("solvers = krylov\n").validate(), ConfigError);
  EXPECT_THROW(from_text("tol = nan\n"), ConfigError);
  EXPECT_THROW(from_text("x0 = halves\n"), ConfigError);
  EXPECT_THROW(from_text("problem = matrix_market\n").validate(), ConfigError);
}

TEST(Config, TextRoundTrips)
{
  const auto cfg = load_config(config_dir / "cyclic50.cfg");
  const auto again = from_text(cfg.to_text());
  EXPECT_EQ(again.to_text(), cfg.to_text());
  EXPECT_EQ(again.solve.tol, cfg.solve.tol);
}

TEST(Config, MissingFileIsAnError)
{
  EXPECT_ANY_THROW(load_config(config_dir / "does_not_exist.cfg"));
}

TEST(TraceCsv, RoundTripsExactly)
{
  auto cfg = load_config(config_dir / "nonsym_conv_diff.cfg");
  const auto art = run_experiment(cfg);
  for (const auto &o : art.outcomes)
  {
    std::stringstream buf;
    write_trace_csv(buf, o.trace);
    const TraceTable t = read_trace_csv(buf);
    ASSERT_EQ(t.resnorm.size(), o.trace.records.size());
    for (std::size_t k = 0; k < t.resnorm.size(); ++k)
    {
      EXPECT_EQ(t.resnorm[k], o.trace.records[k].resnorm) << o.spec.label() << " " << k;
      EXPECT_EQ(t.iter[k], static_cast<Index>(k));
    }
    EXPECT_EQ(t.termination, to_string(o.trace.termination));
  }
}

TEST(TraceCsv, RejectsMalformedRows)
{
  std::istringstream in("iter,resnorm,rank,min_norm_flag,termination\n0,1.0,-1\n");
  EXPECT_ANY_THROW(read_trace_csv(in));
}

TEST(Experiment, RunsAreDeterministic)
{
  const auto cfg = load_config(config_dir / "nonsym_conv_diff.cfg");
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  ASSERT_EQ(a.outcomes.size(), b.outcomes.size());
  for (std::size_t i = 0; i < a.outcomes.size(); ++i)
  {
    std::ostringstream sa, sb;
    write_trace_csv(sa, a.outcomes[i].trace);
    write_trace_csv(sb, b.outcomes[i].trace);
    EXPECT_EQ(sa.str(), sb.str());
  }
  EXPECT_EQ(a.summary(), b.summary());
}

TEST(Experiment, ShiftedSkewNeverDiverges)
{
  const auto art = run_experiment(load_config(config_dir / "skew_conv_diff.cfg"));
  EXPECT_TRUE(art.pass());
  EXPECT_FALSE(comparison(art, "ngmres(1)").divergence.has_value());
  EXPECT_FALSE(comparison(art, "ngmres(full)").divergence.has_value());
}

TEST(Experiment, CyclicShiftDivergesAtEleven)
{
  const auto art = run_experiment(load_config(config_dir / "cyclic50.cfg"));
  const auto &c = comparison(art, "ngmres(10)");
  ASSERT_TRUE(c.divergence.has_value());
  EXPECT_EQ(*c.divergence, 11);
  const auto &g = outcome(art, "gmres").trace;
  EXPECT_EQ(g.iterations(), 50);
  EXPECT_LE(g.records.back().resnorm, 1e-12 * g.initial_resnorm());
  const auto &w = outcome(art, "ngmres(10)").trace;
  EXPECT_GT(w.records.back().resnorm, 0.1 * w.initial_resnorm());
}

TEST(Experiment, IdentityConvergesInOneStepEverywhere)
{
  const auto art = run_experiment(load_config(config_dir / "identity.cfg"));
  EXPECT_TRUE(art.pass());
  for (const auto &o : art.outcomes)
  {
    EXPECT_EQ(o.trace.iterations(), 1) << o.spec.label();
  }
  for (const auto &v : art.checks)
  {
    EXPECT_TRUE(v.pass) << v.solver << " " << v.name << ": " << v.detail;
  }
}

TEST(Experiment, NonsymmetricDivergenceIsReportedNotFailed)
{
  const auto art = run_experiment(load_config(config_dir / "nonsym_conv_diff.cfg"));
  EXPECT_TRUE(art.pass());
}

TEST(Artifacts, StoredRunChecksAndTamperingIsCaught)
{
  auto cfg = load_config(config_dir / "cyclic5.cfg");
  cfg.out = scratch("stored");
  const auto files = write_artifacts(run_experiment(cfg));
  for (const char *name : {"summary.txt", "config.txt", "comparison.csv", "convergence.svg"})
  {
    EXPECT_TRUE(fs::exists(cfg.out / name)) << name;
  }
  EXPECT_TRUE(check_stored_run(cfg.out).pass);

  const fs::path csv = cfg.out / "trace_gmres.csv";
  std::string text = slurp(csv);
  const auto pos = text.find("\n1,");
  ASSERT_NE(pos, std::string::npos);
  text.insert(pos + 3, "9");
  std::ofstream(csv, std::ios::binary) << text;
  EXPECT_FALSE(check_stored_run(cfg.out).pass);
  fs::remove_all(cfg.out);
}

TEST(Artifacts, SvgHasOneLinePerSolver)
{
  const auto art = run_experiment(load_config(config_dir / "identity.cfg"));
  const std::string svg = render_convergence_svg(art);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  std::size_t lines = 0;
  for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1))
  {
    ++lines;
  }
  EXPECT_EQ(lines, art.outcomes.size());
}

TEST(Artifacts, TraceFileNames)
{
  EXPECT_EQ(trace_file_name(SolverSpec::parse("ngmres(full)", WindowSize::of(1))),
            "trace_ngmres_full.csv");
  EXPECT_EQ(trace_file_name(SolverSpec::parse("anderson(2)", WindowSize::of(1))),
            "trace_anderson_2.csv");
}
