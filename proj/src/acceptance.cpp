#include "ngmres/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <optional>

#include <Eigen/Dense>

#include "ngmres/diagnostics.hpp"
#include "ngmres/problems.hpp"
#include "ngmres/random.hpp"
#include "ngmres/solvers.hpp"

namespace ngmres
{

namespace
{

std::string fmt(const char *f, ...)
{
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

class Checker
{
public:
  explicit Checker(CriterionResult &res) : res_(res) { res_.pass = true; }

  void expect(bool ok, const std::string &line)
  {
    res_.details.push_back((ok ? "ok    " : "FAIL  ") + line);
    res_.pass = res_.pass && ok;
  }
  void info(const std::string &line) { res_.details.push_back("info  " + line); }

private:
  CriterionResult &res_;
};

std::string index_string(const std::optional<Index> &d)
{
  return d ? std::to_string(*d) : std::string("NONE");
}

SolveConfig config(double tol, Index max_iter, int stagnation_window)
{
  SolveConfig cfg;
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  cfg.stagnation_window = stagnation_window;
  return cfg;
}

Problem shifted_skew_conv_diff(Index n, double gamma, StencilScaling scaling)
{
  const double c = convection_from_mesh_reynolds(n, gamma);
  return to_shifted_skew(build_convection_diffusion(n, c, c, scaling));
}

Problem conv_diff(Index n, double gamma, StencilScaling scaling)
{
  const double c = convection_from_mesh_reynolds(n, gamma);
  return build_convection_diffusion(n, c, c, scaling);
}

double iterate_distance(const IterationTrace &t, Index k, const Vector &target)
{
  return (t.records[static_cast<std::size_t>(k)].x - target).norm();
}

bool bitwise_equal(const IterationTrace &a, const IterationTrace &b)
{
  if (a.records.size() != b.records.size() || a.termination != b.termination)
  {
    return false;
  }
  for (std::size_t k = 0; k < a.records.size(); ++k)
  {
    const auto &ra = a.records[k];
    const auto &rb = b.records[k];
    if (ra.x != rb.x || ra.r != rb.r || ra.resnorm != rb.resnorm ||
        ra.coefficients != rb.coefficients)
    {
      return false;
    }
  }
  return true;
}

// Residual norms of min ||r0 + A K_k y|| over the monomial Krylov basis
// K_k = [r0, A r0, ..., A^{k-1} r0], k = 0..kmax.
std::vector<double> krylov_oracle(const DenseMatrix &a, const Vector &r0, Index kmax)
{
  std::vector<double> out{r0.norm()};
  DenseMatrix basis(r0.size(), 0);
  Vector v = r0;
  for (Index k = 1; k <= kmax; ++k)
  {
    basis.conservativeResize(Eigen::NoChange, k);
    basis.col(k - 1) = v;
    v = a * v;
    const DenseMatrix ak = a * basis;
    const Vector y = ak.completeOrthogonalDecomposition().solve(-r0);
    out.push_back((r0 + ak * y).norm());
  }
  return out;
}

// ---------------------------------------------------------------------------

void criterion_shifted_skew(Checker &c)
{
  const Index n = 32;
  const double floor = 1e-8;
  const double tol = 1e-8;
  const Problem p = shifted_skew_conv_diff(n, 0.5, StencilScaling::normalized);
  const LinearSystem s(p);
  const Vector x0 = random_guess(p.size(), 42);
  const SolveConfig cfg = config(1e-9, 400, 0);
  const auto g = gmres(s, x0, cfg);
  const auto n1 = ngmres::ngmres(s, x0, WindowSize::of(1), cfg);
  const auto nf = ngmres::ngmres(s, x0, WindowSize::full(), cfg);
  const double rel_final = g.records.back().resnorm / g.initial_resnorm();
  c.expect(rel_final <= floor,
           fmt("gmres reaches ||r||/||r0|| = %.2e <= %.0e (%ld its)", rel_final, floor,
               static_cast<long>(g.iterations())));
  const double d1 = max_residual_difference(g, n1, floor);
  const double df = max_residual_difference(g, nf, floor);
  c.expect(d1 <= tol, fmt("ngmres(1) vs gmres above floor: %.2e <= %.0e", d1, tol));
  c.expect(df <= tol, fmt("ngmres(full) vs gmres above floor: %.2e <= %.0e", df, tol));

  const Problem phys = shifted_skew_conv_diff(n, 0.5, StencilScaling::physical);
  const LinearSystem sp(phys);
  const SolveConfig cfg_phys = config(1e-9, 200, 0);
  const auto gp = gmres(sp, x0, cfg_phys);
  const auto np = ngmres::ngmres(sp, x0, WindowSize::of(1), cfg_phys);
  c.info(fmt("1/h^2 stencil: ngmres(1) vs gmres above floor %.2e (not asserted)",
             max_residual_difference(gp, np, floor)));
}

void criterion_nonsymmetric(Checker &c)
{
  const Problem p = conv_diff(32, 0.5, StencilScaling::normalized);
  const LinearSystem s(p);
  const Vector x0 = random_guess(p.size(), 42);
  const SolveConfig cfg = config(1e-9, 400, 0);
  const auto g = gmres(s, x0, cfg);
  const auto n1 = ngmres::ngmres(s, x0, WindowSize::of(1), cfg);
  const auto div = compare_traces(n1, g, 1e-8);
  c.expect(div.has_value(), "ngmres(1) vs gmres divergence index " + index_string(div));
  const double r0 = g.initial_resnorm();
  const std::size_t common = std::min(g.records.size(), n1.records.size());
  double worst = -1e300;
  for (std::size_t k = 0; k < common; ++k)
  {
    worst = std::max(worst, (g.records[k].resnorm - n1.records[k].resnorm) / r0);
  }
  c.expect(worst <= 1e-10,
           fmt("max (||r_G|| - ||r_NG1||)/||r0|| = %.2e <= 1e-10 over %zu iterates", worst,
               common));
}

void criterion_cyclic_small(Checker &c)
{
  const Index n = 5;
  const Problem p = build_cyclic_shift(n);
  const LinearSystem s(p);
  const Vector &xs = *p.exact_solution();
  const SolveConfig cfg = config(1e-12, 10, 0);
  const Vector z = zeros_guess(n);

  const auto g = gmres(s, z, cfg);
  bool ok = g.iterations() >= 5;
  double stuck = 0.0;
  for (Index k = 1; ok && k <= 4; ++k)
  {
    stuck = std::max(stuck, iterate_distance(g, k, z));
  }
  c.expect(ok && stuck <= 1e-12, fmt("gmres x1..x4 = x0: max dist %.2e <= 1e-12", stuck));
  const double hit = ok ? iterate_distance(g, 5, xs) : 1.0;
  c.expect(ok && hit <= 1e-12, fmt("gmres x5 = e5: dist %.2e <= 1e-12", hit));

  for (WindowSize w : {WindowSize::full(), WindowSize::of(0)})
  {
    const auto t = ngmres::ngmres(s, z, w, cfg);
    double worst = 0.0;
    for (Index k = 0; k <= t.iterations(); ++k)
    {
      worst = std::max(worst, iterate_distance(t, k, z));
    }
    c.expect(t.iterations() == 10 && worst <= 1e-12,
             fmt("%s from x0=0: x_k = x0 for k <= %ld, max dist %.2e", t.label().c_str(),
                 static_cast<long>(t.iterations()), worst));
  }

  const Vector ones = ones_guess(n);
  const auto g1 = gmres(s, ones, cfg);
  const auto nf1 = ngmres::ngmres(s, ones, WindowSize::full(), cfg);
  const auto div = compare_traces(nf1, g1, 1e-10);
  c.expect(!div, "x0=ones: ngmres(full) vs gmres divergence " + index_string(div));
  const bool both = g1.iterations() >= 5 && nf1.iterations() >= 5;
  const double eg = both ? iterate_distance(g1, 5, xs) : 1.0;
  const double en = both ? iterate_distance(nf1, 5, xs) : 1.0;
  c.expect(both && eg <= 1e-10 && en <= 1e-10,
           fmt("x0=ones: x5 = x* (gmres %.2e, ngmres(full) %.2e)", eg, en));
}

void criterion_cyclic_large(Checker &c)
{
  const Index n = 50;
  const Problem p = build_cyclic_shift(n);
  const LinearSystem s(p);
  const Vector ones = ones_guess(n);
  const SolveConfig cfg = config(1e-14, 50, 0);
  const auto g = gmres(s, ones, cfg);
  const auto n10 = ngmres::ngmres(s, ones, WindowSize::of(10), cfg);
  const auto div = compare_traces(n10, g, 1e-10);
  c.expect(div && *div == 11, "ngmres(10) vs gmres divergence index " + index_string(div) +
                                  " (expected 11)");
  const double r0 = g.initial_resnorm();
  const double g50 = g.iterations() >= 50 ? g.records[50].resnorm / r0 : 1.0;
  c.expect(g.iterations() == 50 && g50 <= 1e-12,
           fmt("gmres ||r_50||/||r0|| = %.2e <= 1e-12", g50));
  const double n50 = n10.iterations() >= 50 ? n10.records[50].resnorm / r0 : 0.0;
  c.expect(n50 > 1e-3, fmt("ngmres(10) ||r_50||/||r0|| = %.3g > 1e-3 (stall)", n50));
}

void criterion_symmetric(Checker &c)
{
  const Problem p = build_convection_diffusion(8, 0.0, 0.0);
  const LinearSystem s(p);
  const Vector x0 = random_guess(p.size(), 5);
  const SolveConfig cfg = config(1e-11, 200, 0);
  std::vector<IterationTrace> traces{gmres(s, x0, cfg),
                                     ngmres::ngmres(s, x0, WindowSize::of(1), cfg),
                                     ngmres::ngmres(s, x0, WindowSize::full(), cfg),
                                     conjugate_residual(s, x0, cfg)};
  const double r0 = traces.front().initial_resnorm();
  const double floor = 1e-10;
  std::size_t horizon = traces.front().records.size();
  for (const auto &t : traces)
  {
    horizon = std::min(horizon, t.records.size());
  }
  // Stop at the first iterate where any history is below the floor.
  for (std::size_t k = 0; k < horizon; ++k)
  {
    bool below = false;
    for (const auto &t : traces)
    {
      below = below || t.records[k].resnorm < floor * r0;
    }
    if (below)
    {
      horizon = k;
      break;
    }
  }
  for (std::size_t a = 0; a < traces.size(); ++a)
  {
    for (std::size_t b = a + 1; b < traces.size(); ++b)
    {
      double worst = 0.0;
      for (std::size_t k = 0; k < horizon; ++k)
      {
        worst = std::max(worst,
                         std::abs(traces[a].records[k].resnorm - traces[b].records[k].resnorm) /
                             r0);
      }
      c.expect(worst <= 1e-8, fmt("%s vs %s: %.2e <= 1e-8 over %zu iterates",
                                  traces[a].label().c_str(), traces[b].label().c_str(), worst,
                                  horizon));
    }
  }
  const BoundReport bounds = compute_bounds(p);
  for (const auto &t : traces)
  {
    const auto rep = check_contraction(t, bounds);
    const BoundCheck *cheb = rep.find("chebyshev");
    c.expect(cheb && cheb->applicable && cheb->pass,
             fmt("%s Chebyshev bound (kappa %.1f): worst ratio %.3f", t.label().c_str(),
                 bounds.kappa, cheb ? cheb->worst_ratio : 0.0));
  }
}

void criterion_contraction(Checker &c, const AcceptanceHooks &hooks)
{
  const SolveConfig cfg = config(1e-10, 200, 3);
  int runs = 0;
  int failures_sigma = 0;
  int failures_nu = 0;
  int not_applicable = 0;
  double worst_sigma = 0.0;
  double worst_nu = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
  {
    const Problem p = build_random_positive_real(50, 0.1, seed);
    const LinearSystem s(p);
    const BoundReport b = compute_bounds(p);
    const Vector x0 = random_guess(p.size(), seed + 10000);
    std::vector<IterationTrace> traces{hooks.mr(s, x0, cfg)};
    for (Index m : {0, 1, 5})
    {
      traces.push_back(ngmres::ngmres(s, x0, WindowSize::of(m), cfg));
    }
    for (const auto &t : traces)
    {
      ++runs;
      const auto rep = check_contraction(t, b);
      const BoundCheck *ms = rep.find("mu_sigma");
      const BoundCheck *mn = rep.find("mu_nu");
      if (!ms->applicable)
      {
        ++not_applicable;
      }
      failures_sigma += ms->applicable && !ms->pass;
      failures_nu += mn->applicable && !mn->pass;
      worst_sigma = std::max(worst_sigma, ms->worst_ratio);
      worst_nu = std::max(worst_nu, mn->worst_ratio);
    }
  }
  c.expect(not_applicable == 0 && failures_sigma == 0,
           fmt("sqrt(1-mu^2/sigma^2): %d/%d runs violate; worst ||r_k+1||/(f||r_k||) %.4f",
               failures_sigma, runs, worst_sigma));
  c.expect(failures_nu == 0, fmt("sqrt(1-mu nu): %d/%d runs violate; worst ratio %.4f",
                                 failures_nu, runs, worst_nu));
}

struct NamedRun
{
  std::string name;
  const LinearSystem *system;
  double a_norm;
  Vector x0;
  WindowSize window;
  SolveConfig cfg;
  bool three_term = false;
};

void criterion_orthogonality(Checker &c)
{
  OrthogonalityOptions opts;
  opts.tol = 1e-9;
  opts.floor = 1e-6;
  opts.resolve = 1e-6;
  const double mono_slack = 1e-12;

  int traces = 0;
  int orth_fail = 0;
  int mono_fail = 0;
  double worst = 0.0;
  std::string first_failure;
  auto examine = [&](const IterationTrace &t, const LinearSystem &s, double a_norm,
                     WindowSize w, const std::string &name) {
    OrthogonalityOptions o = opts;
    o.a_norm = a_norm;
    const auto rep = check_orthogonality(t, s, w, o);
    const double mono = monotonicity_violation(t, mono_slack);
    ++traces;
    worst = std::max(worst, rep.worst());
    if (!rep.pass || mono > 0.0)
    {
      orth_fail += !rep.pass;
      mono_fail += mono > 0.0;
      if (first_failure.empty())
      {
        first_failure = fmt("%s %s: orth %.2e mono %.2e", name.c_str(), t.label().c_str(),
                            rep.worst(), mono);
      }
    }
  };

  const SymmetryClass classes[] = {SymmetryClass::general, SymmetryClass::symmetric,
                                   SymmetryClass::shifted_skew_symmetric,
                                   SymmetryClass::skew_symmetric};
  const SolveConfig cfg;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
  {
    const Problem p = build_random_with_symmetry(30, classes[seed % 4], seed);
    const LinearSystem s(p);
    const double a_norm = spectral_norm(p.dense());
    const Vector x0 = random_guess(30, seed + 1000);
    for (WindowSize w : {WindowSize::of(0), WindowSize::of(1), WindowSize::of(2),
                         WindowSize::of(5), WindowSize::full()})
    {
      examine(ngmres::ngmres(s, x0, w, cfg), s, a_norm, w, p.label());
    }
    examine(ngmres1_three_term(s, x0, cfg), s, a_norm, WindowSize::of(1), p.label());
  }
  const int random_traces = traces;

  // Problems from the worked examples.
  const Problem skew32 = shifted_skew_conv_diff(32, 0.5, StencilScaling::normalized);
  const Problem k32 = conv_diff(32, 0.5, StencilScaling::normalized);
  const Problem cyc5 = build_cyclic_shift(5);
  const Problem cyc50 = build_cyclic_shift(50);
  const Problem spd8 = build_convection_diffusion(8, 0.0, 0.0);
  const LinearSystem s_skew32(skew32), s_k32(k32), s_cyc5(cyc5), s_cyc50(cyc50), s_spd8(spd8);
  const double n_skew32 = spectral_norm(skew32.dense());
  const double n_k32 = spectral_norm(k32.dense());
  const double n_cyc = 1.0;
  const double n_spd8 = spectral_norm(spd8.dense());
  const SolveConfig long_cfg = config(1e-10, 400, 0);
  const SolveConfig short_cfg = config(1e-12, 10, 0);
  const SolveConfig cyc50_cfg = config(1e-14, 50, 0);
  const Vector x1024 = random_guess(1024, 42);
  const std::vector<NamedRun> runs{
      {"shifted-skew conv-diff n=32", &s_skew32, n_skew32, x1024, WindowSize::of(1), long_cfg},
      {"shifted-skew conv-diff n=32", &s_skew32, n_skew32, x1024, WindowSize::full(), long_cfg},
      {"shifted-skew conv-diff n=32", &s_skew32, n_skew32, x1024, WindowSize::of(1), long_cfg,
       true},
      {"conv-diff n=32", &s_k32, n_k32, x1024, WindowSize::of(1), long_cfg},
      {"conv-diff n=32", &s_k32, n_k32, x1024, WindowSize::full(), long_cfg},
      {"cyclic n=5 x0=0", &s_cyc5, n_cyc, zeros_guess(5), WindowSize::full(), short_cfg},
      {"cyclic n=5 x0=0", &s_cyc5, n_cyc, zeros_guess(5), WindowSize::of(0), short_cfg},
      {"cyclic n=5 x0=1", &s_cyc5, n_cyc, ones_guess(5), WindowSize::full(), short_cfg},
      {"cyclic n=50 x0=1", &s_cyc50, n_cyc, ones_guess(50), WindowSize::of(10), cyc50_cfg},
      {"spd conv-diff n=8", &s_spd8, n_spd8, random_guess(64, 5), WindowSize::of(1), long_cfg},
      {"spd conv-diff n=8", &s_spd8, n_spd8, random_guess(64, 5), WindowSize::full(),
       long_cfg},
  };
  for (const auto &r : runs)
  {
    const auto t = r.three_term ? ngmres1_three_term(*r.system, r.x0, r.cfg)
                                : ngmres::ngmres(*r.system, r.x0, r.window, r.cfg);
    examine(t, *r.system, r.a_norm, r.window, r.name);
  }
  c.expect(orth_fail == 0,
           fmt("orthogonality at %.0e (evaluated while ||r||/||r0|| > %.0e): %d/%d traces fail, "
               "worst %.2e",
               opts.tol, opts.floor, orth_fail, traces, worst));
  c.expect(mono_fail == 0, fmt("monotonicity (+%.0e ||r0||): %d/%d traces fail", mono_slack,
                               mono_fail, traces));
  c.info(fmt("%d random traces, %d example traces", random_traces, traces - random_traces));
  if (!first_failure.empty())
  {
    c.info("first failure: " + first_failure);
  }
}

void criterion_gmres_oracle(Checker &c, const AcceptanceHooks &hooks)
{
  const SolveConfig cfg = config(1e-12, 8, 0);
  const double floor = 1e-8;
  double worst_oracle = 0.0;
  double worst_first = 0.0;
  int equiv_fail = 0;
  int link_fail = 0;
  int hypothesis = 0;
  double worst_equiv = 0.0;
  double worst_link = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
  {
    const Problem p = build_random_dense(8, 1.0, seed);
    const LinearSystem s(p);
    const Vector x0 = random_guess(8, seed + 500);
    const auto g = gmres(s, x0, cfg);
    const auto oracle = krylov_oracle(p.dense(), g.records.front().r, g.iterations());
    const double r0 = g.initial_resnorm();
    for (Index k = 0; k <= g.iterations(); ++k)
    {
      worst_oracle = std::max(
          worst_oracle,
          std::abs(g.records[static_cast<std::size_t>(k)].resnorm - oracle[static_cast<std::size_t>(k)]) /
              r0);
    }

    const auto nf = ngmres::ngmres(s, x0, WindowSize::full(), cfg);
    const auto ev = check_gmres_equivalence(g, nf, 1e-8, floor);
    hypothesis += ev.hypothesis_met;
    equiv_fail += ev.hypothesis_met && !ev.pass;
    worst_equiv = std::max(worst_equiv, ev.max_difference);

    const auto aa = anderson(s, x0, WindowSize::full(), cfg);
    const auto lv = check_anderson_linkage(g, aa, 1e-8, floor);
    link_fail += lv.hypothesis_met && !lv.pass;
    worst_link = std::max(worst_link, lv.max_difference);

    // Every NGMRES-family method takes the minimal residual step first.
    const auto mr = hooks.mr(s, x0, cfg);
    const std::vector<IterationTrace> family{
        g, nf, ngmres::ngmres(s, x0, WindowSize::of(0), cfg),
        ngmres::ngmres(s, x0, WindowSize::of(1), cfg),
        ngmres::ngmres(s, x0, WindowSize::of(5), cfg), ngmres1_three_term(s, x0, cfg)};
    for (const auto &t : family)
    {
      if (t.iterations() >= 1 && mr.iterations() >= 1)
      {
        const Vector &ref = t.records[1].x;
        worst_first = std::max(worst_first, (mr.records[1].x - ref).norm() /
                                                std::max(1.0, ref.norm()));
      }
      else
      {
        worst_first = 1.0;
      }
    }
  }
  c.expect(worst_oracle <= 1e-9,
           fmt("gmres vs explicit Krylov least squares: %.2e <= 1e-9", worst_oracle));
  c.expect(equiv_fail == 0 && hypothesis > 0,
           fmt("ngmres(full) = gmres residuals: %d failures, hypothesis met %d/20, worst %.2e",
               equiv_fail, hypothesis, worst_equiv));
  c.expect(link_fail == 0,
           fmt("anderson x_{j+1} = x_j^G - r_j^G: %d failures, worst %.2e", link_fail,
               worst_link));
  c.expect(worst_first <= 1e-12,
           fmt("first-step universality (mr = gmres = ngmres(m) = ngmres1): %.2e <= 1e-12",
               worst_first));
}

Problem random_contraction(Index n, double norm_m, std::uint64_t seed)
{
  Random rng(seed);
  const DenseMatrix g = rng.normal_matrix(n, n);
  const DenseMatrix m = (norm_m / spectral_norm(g)) * g;
  const DenseMatrix a = DenseMatrix::Identity(n, n) - m;
  return with_ones_solution(to_sparse(a), SymmetryClass::general,
                            fmt("I - M, ||M|| = %.1f, n = %ld, seed %lu", norm_m,
                                static_cast<long>(n), static_cast<unsigned long>(seed)));
}

void criterion_polynomial(Checker &c)
{
  struct Case
  {
    Problem p;
    Vector x0;
  };
  std::vector<Case> cases;
  for (std::uint64_t seed : {1, 2, 3})
  {
    Problem p = random_contraction(64, 0.9, seed);
    Vector x0 = random_guess(64, seed + 70);
    cases.push_back({std::move(p), std::move(x0)});
  }
  cases.push_back({shifted_skew_conv_diff(8, 0.5, StencilScaling::normalized),
                   random_guess(64, 9)});
  cases.push_back({build_cyclic_shift(20), ones_guess(20)});

  const SolveConfig cfg = config(1e-14, 20, 0);
  double worst_recon = 0.0;
  double worst_one = 0.0;
  int traces = 0;
  for (const auto &cs : cases)
  {
    const LinearSystem s(cs.p);
    for (WindowSize w : {WindowSize::of(0), WindowSize::of(1), WindowSize::of(2),
                         WindowSize::full()})
    {
      const auto t = ngmres::ngmres(s, cs.x0, w, cfg);
      auto poly = track_polynomial(t);
      verify_polynomial(poly, t, s);
      worst_recon = std::max(worst_recon, poly.max_reconstruction_error());
      worst_one = std::max(worst_one, poly.max_deviation_at_one());
      ++traces;
    }
  }
  c.expect(worst_recon <= 1e-8,
           fmt("||p_k(M) r0 - r_k||/||r0||: %.2e <= 1e-8 over %d traces", worst_recon, traces));
  c.expect(worst_one <= 1e-10, fmt("|p_k(1) - 1|: %.2e <= 1e-10", worst_one));
}

void criterion_preconditioned(Checker &c)
{
  const Problem p = conv_diff(8, 0.5, StencilScaling::physical);
  const Vector x0 = random_guess(p.size(), 11);
  const SolveConfig cfg = config(1e-10, 200, 0);
  const LinearSystem jac = left_precondition(p, jacobi_preconditioner(p.matrix()));
  const auto g = gmres(jac, x0, cfg);
  const auto nf = ngmres::ngmres(jac, x0, WindowSize::full(), cfg);
  const auto ev = check_gmres_equivalence(g, nf, 1e-8, 1e-8);
  c.expect(ev.hypothesis_met && ev.pass,
           fmt("jacobi: ngmres(full) = gmres on P^-1 A through iterate %ld, worst %.2e",
               static_cast<long>(ev.verified_through), ev.max_difference));

  const LinearSystem plain(p);
  const LinearSystem ident = left_precondition(p, identity_preconditioner());
  bool same = true;
  for (WindowSize w : {WindowSize::of(1), WindowSize::full()})
  {
    same = same && bitwise_equal(ngmres::ngmres(plain, x0, w, cfg),
                                 ngmres::ngmres(ident, x0, w, cfg));
  }
  same = same && bitwise_equal(gmres(plain, x0, cfg), gmres(ident, x0, cfg));
  c.expect(same, "P = I reproduces unpreconditioned traces bit for bit");
}

}  // namespace

AcceptanceHooks default_hooks()
{
  AcceptanceHooks h;
  h.mr = [](const LinearSystem &s, const Vector &x0, const SolveConfig &cfg) {
    return mr_iteration(s, x0, cfg);
  };
  return h;
}

std::string criterion_title(int id)
{
  switch (id)
  {
    case 1: return "shifted-skew equivalence (conv-diff n=32)";
    case 2: return "nonsymmetric non-equivalence (conv-diff n=32)";
    case 3: return "cyclic shift n=5 stagnation";
    case 4: return "cyclic shift n=50 divergence and stall";
    case 5: return "symmetric triple equivalence and Chebyshev bound";
    case 6: return "positive-real contraction bounds";
    case 7: return "orthogonality and monotonicity suite";
    case 8: return "GMRES oracle, NGMRES/Anderson equivalence, first step";
    case 9: return "residual polynomial reconstruction";
    case 10: return "left-preconditioned equivalence";
    default: return "unknown";
  }
}

CriterionResult run_criterion(int id, const AcceptanceHooks &hooks)
{
  CriterionResult res;
  res.id = id;
  res.title = criterion_title(id);
  Checker c(res);
  const auto start = std::chrono::steady_clock::now();
  try
  {
    switch (id)
    {
      case 1: criterion_shifted_skew(c); break;
      case 2: criterion_nonsymmetric(c); break;
      case 3: criterion_cyclic_small(c); break;
      case 4: criterion_cyclic_large(c); break;
      case 5: criterion_symmetric(c); break;
      case 6: criterion_contraction(c, hooks); break;
      case 7: criterion_orthogonality(c); break;
      case 8: criterion_gmres_oracle(c, hooks); break;
      case 9: criterion_polynomial(c); break;
      case 10: criterion_preconditioned(c); break;
      default: c.expect(false, "no such criterion");
    }
  }
  catch (const std::exception &e)
  {
    c.expect(false, std::string("exception: ") + e.what());
  }
  res.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::vector<CriterionResult> run_acceptance(std::ostream &out, const std::set<int> &only,
                                            const AcceptanceHooks &hooks, bool verbose)
{
  std::vector<CriterionResult> results;
  for (int id = 1; id <= acceptance_criterion_count; ++id)
  {
    if (!only.empty() && !only.count(id))
    {
      continue;
    }
    results.push_back(run_criterion(id, hooks));
    const auto &r = results.back();
    out << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.title << " ("
        << fmt("%.2f", r.seconds) << " s)\n";
    if (verbose || !r.pass)
    {
      for (const auto &d : r.details)
      {
        out << "        " << d << "\n";
      }
    }
    out.flush();
  }
  int passed = 0;
  double total = 0.0;
  for (const auto &r : results)
  {
    passed += r.pass;
    total += r.seconds;
  }
  out << passed << "/" << results.size() << " criteria passed ("
      << fmt("%.1f", total) << " s)\n";
  return results;
}

}  // namespace ngmres
