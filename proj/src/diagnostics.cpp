#include "ngmres/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace ngmres
{

namespace
{

// |u^T v| / (unorm ||v||), or zero when v is vacuous or unresolved against
// the vectors it was formed from.
double scaled_inner(const Vector &u, double unorm, const Vector &v, double parents,
                    double resolve)
{
  const double vnorm = v.norm();
  if (unorm == 0.0 || vnorm == 0.0 || vnorm <= resolve * parents)
  {
    return 0.0;
  }
  return std::abs(u.dot(v)) / (unorm * vnorm);
}

// max over pairs i < j <= depth of |u^T (r_{k-j} - r_{k-i})| / (||u|| ||.||).
double window_pairs(const IterationTrace &trace, Index k, Index depth, const Vector &u,
                    double resolve)
{
  const double unorm = u.norm();
  double worst = 0.0;
  for (Index i = 0; i <= depth; ++i)
  {
    const auto &ri = trace.records[static_cast<std::size_t>(k - i)];
    for (Index j = i + 1; j <= depth; ++j)
    {
      const auto &rj = trace.records[static_cast<std::size_t>(k - j)];
      worst = std::max(worst, scaled_inner(u, unorm, rj.r - ri.r,
                                           std::max(ri.resnorm, rj.resnorm), resolve));
    }
  }
  return worst;
}

bool above_floor(double resnorm, double r0, double floor)
{
  return floor <= 0.0 || resnorm > floor * r0;
}

void require_size(const IterationTrace &trace, const LinearSystem &system)
{
  if (trace.records.empty())
  {
    throw std::invalid_argument("diagnostics: empty trace");
  }
  if (trace.records.front().r.size() != system.size())
  {
    throw DimensionError("diagnostics: trace and system sizes differ");
  }
}

}  // namespace

double OrthogonalityReport::worst() const
{
  double w = 0.0;
  for (const auto &s : steps)
  {
    if (s.evaluated)
    {
      w = std::max({w, s.a_orth, s.diff_orth, s.decrease_orth});
    }
  }
  return w;
}

OrthogonalityReport check_orthogonality(const IterationTrace &trace, const LinearSystem &system,
                                        WindowSize m, double tol)
{
  OrthogonalityOptions opts;
  opts.tol = tol;
  return check_orthogonality(trace, system, m, opts);
}

OrthogonalityReport check_orthogonality(const IterationTrace &trace, const LinearSystem &system,
                                        WindowSize m, const OrthogonalityOptions &opts)
{
  require_size(trace, system);
  OrthogonalityReport report;
  report.tol = opts.tol;
  const double a_norm = opts.a_norm ? *opts.a_norm : spectral_norm(system.dense_operator());
  const double r0 = trace.initial_resnorm();
  for (Index k = 0; k + 1 < static_cast<Index>(trace.records.size()); ++k)
  {
    const auto &next = trace.records[static_cast<std::size_t>(k + 1)];
    const auto &cur = trace.records[static_cast<std::size_t>(k)];
    OrthogonalityStep step;
    step.k = k;
    if (!above_floor(next.resnorm, r0, opts.floor))
    {
      step.evaluated = false;
      report.steps.push_back(step);
      continue;
    }
    const double nnorm = next.r.norm();
    const double cnorm = cur.r.norm();
    if (nnorm > 0.0 && cnorm > 0.0 && a_norm > 0.0)
    {
      step.a_orth = std::abs(next.r.dot(system.apply(cur.r))) / (nnorm * a_norm * cnorm);
    }
    step.diff_orth = window_pairs(trace, k, m.depth_at(k), next.r, opts.resolve);
    step.decrease_orth = scaled_inner(next.r, nnorm, next.r - cur.r,
                                      std::max(nnorm, cnorm), opts.resolve);
    step.pass = step.a_orth <= opts.tol && step.diff_orth <= opts.tol &&
                step.decrease_orth <= opts.tol;
    report.pass = report.pass && step.pass;
    report.steps.push_back(step);
  }
  return report;
}

OrthogonalityReport check_aa_orthogonality(const IterationTrace &trace,
                                           const LinearSystem &system, WindowSize m,
                                           const OrthogonalityOptions &opts)
{
  require_size(trace, system);
  OrthogonalityReport report;
  report.tol = opts.tol;
  const DenseMatrix mm = fixed_point_map(system).m;
  const Eigen::FullPivLU<DenseMatrix> lu(mm);
  if (!lu.isInvertible())
  {
    report.singular_m = true;
    report.pass = false;
    return report;
  }
  const double r0 = trace.initial_resnorm();
  for (Index k = 0; k + 1 < static_cast<Index>(trace.records.size()); ++k)
  {
    const auto &next = trace.records[static_cast<std::size_t>(k + 1)];
    OrthogonalityStep step;
    step.k = k;
    if (!above_floor(next.resnorm, r0, opts.floor))
    {
      step.evaluated = false;
      report.steps.push_back(step);
      continue;
    }
    const Vector u = lu.solve(next.r);
    step.diff_orth = window_pairs(trace, k, m.depth_at(k), u, opts.resolve);
    step.pass = step.diff_orth <= opts.tol;
    report.pass = report.pass && step.pass;
    report.steps.push_back(step);
  }
  return report;
}

// ---------------------------------------------------------------------------

double PolynomialTrace::max_reconstruction_error() const
{
  double w = 0.0;
  for (double e : reconstruction_error)
  {
    w = std::max(w, e);
  }
  return w;
}

double PolynomialTrace::max_deviation_at_one() const
{
  double w = 0.0;
  for (double v : value_at_one)
  {
    w = std::max(w, std::abs(v - 1.0));
  }
  return w;
}

PolynomialTrace track_polynomial(const IterationTrace &trace)
{
  if (trace.method == Method::gmres || trace.method == Method::anderson ||
      trace.method == Method::conjugate_residual)
  {
    throw std::invalid_argument("track_polynomial: needs an ngmres, ngmres1 or mr trace");
  }
  PolynomialTrace poly;
  if (trace.records.empty())
  {
    return poly;
  }
  poly.extended.push_back(ExtendedVector::Ones(1));
  for (std::size_t rec = 1; rec < trace.records.size(); ++rec)
  {
    const Index k = static_cast<Index>(rec) - 1;
    ExtendedVector beta = trace.records[rec].coefficients.cast<long double>();
    if (trace.method == Method::mr)
    {
      beta = ExtendedVector::Constant(1, beta(0) - 1.0L);
    }
    if (beta.size() > k + 1)
    {
      throw std::invalid_argument("track_polynomial: coefficient vector longer than history");
    }
    const long double lead = 1.0L + beta.sum();
    const ExtendedVector &pk = poly.extended[static_cast<std::size_t>(k)];
    ExtendedVector next = ExtendedVector::Zero(k + 2);
    next.tail(k + 1) += lead * pk;
    for (Index i = 0; i < beta.size(); ++i)
    {
      const ExtendedVector &pki = poly.extended[static_cast<std::size_t>(k - i)];
      next.head(pki.size()) -= beta(i) * pki;
    }
    poly.extended.push_back(std::move(next));
  }
  for (const ExtendedVector &c : poly.extended)
  {
    poly.coefficients.push_back(c.cast<double>());
    poly.value_at_one.push_back(static_cast<double>(c.sum()));
    poly.value_at_zero.push_back(static_cast<double>(c(0)));
  }
  return poly;
}

void verify_polynomial(PolynomialTrace &poly, const IterationTrace &trace,
                       const LinearSystem &system)
{
  require_size(trace, system);
  if (poly.coefficients.size() != trace.records.size())
  {
    throw std::invalid_argument("verify_polynomial: polynomial and trace lengths differ");
  }
  using ExtendedMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const bool have_extended = poly.extended.size() == poly.coefficients.size();
  const ExtendedMatrix mm = fixed_point_map(system).m.cast<long double>();
  const ExtendedVector r0 = trace.records.front().r.cast<long double>();
  const long double scale = r0.norm() > 0.0L ? r0.norm() : 1.0L;
  poly.reconstruction_error.clear();
  for (std::size_t k = 0; k < poly.coefficients.size(); ++k)
  {
    const ExtendedVector c =
        have_extended ? poly.extended[k] : poly.coefficients[k].cast<long double>();
    ExtendedVector acc = c(c.size() - 1) * r0;
    for (Index j = c.size() - 2; j >= 0; --j)
    {
      acc = mm * acc + c(j) * r0;
    }
    const ExtendedVector diff = acc - trace.records[k].r.cast<long double>();
    poly.reconstruction_error.push_back(static_cast<double>(diff.norm() / scale));
  }
}

// ---------------------------------------------------------------------------

double BoundReport::factor_skew() const
{
  return std::max(factor_skew_linear, factor_skew_squared);
}

double BoundReport::chebyshev_factor(Index k) const
{
  return 2.0 * std::pow(chebyshev_base, static_cast<double>(k));
}

BoundReport compute_bounds(const Problem &p) { return compute_bounds(p.dense()); }

BoundReport compute_bounds(const DenseMatrix &a)
{
  if (a.rows() != a.cols())
  {
    throw DimensionError("compute_bounds: matrix is not square");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  BoundReport b;
  const DenseMatrix sym = 0.5 * (a + a.transpose());
  b.mu = sym_eig_extremes(sym).min;
  b.sigma = spectral_norm(a);
  const DenseMatrix mm = DenseMatrix::Identity(a.rows(), a.cols()) - a;
  const double mnorm = mm.norm();
  b.skew_m = (mm + mm.transpose()).norm() <= 1e-12 * std::max(mnorm, 1.0);
  // Skew M is normal, so rho(M) = ||M||_2 from a symmetric solve; the general
  // eigensolver is cubic with a large constant and only used on small systems.
  if (b.skew_m)
  {
    b.rho_m = std::sqrt(std::max(0.0, sym_eig_extremes(mm.transpose() * mm).max));
  }
  else if (a.rows() <= rho_dense_max_n)
  {
    b.rho_m = spectral_radius(mm);
  }
  else
  {
    b.rho_m = nan;
  }

  const Eigen::FullPivLU<DenseMatrix> lu(a);
  b.invertible = lu.isInvertible();
  if (b.invertible)
  {
    const DenseMatrix inv = lu.inverse();
    b.nu = sym_eig_extremes(0.5 * (inv + inv.transpose())).min;
  }
  else
  {
    b.nu = nan;
  }
  b.positive_real = b.mu > 0.0;

  b.kappa = nan;
  b.lambda_min = nan;
  b.lambda_max = nan;
  if (relative_asymmetry(a) <= 1e-12)
  {
    const auto ext = sym_eig_extremes(sym);
    b.lambda_min = ext.min;
    b.lambda_max = ext.max;
    b.symmetric_definite = ext.min > 0.0 || ext.max < 0.0;
    if (b.symmetric_definite)
    {
      b.kappa = std::max(std::abs(ext.min), std::abs(ext.max)) /
                std::min(std::abs(ext.min), std::abs(ext.max));
      b.factor_symmetric = std::abs(ext.max - ext.min) / std::abs(ext.max + ext.min);
      const double s = std::sqrt(b.kappa);
      b.chebyshev_base = (s - 1.0) / (s + 1.0);
    }
  }
  if (b.positive_real)
  {
    b.factor_mu_sigma = std::sqrt(std::max(0.0, 1.0 - b.mu * b.mu / (b.sigma * b.sigma)));
    if (b.invertible)
    {
      b.factor_mu_nu = std::sqrt(std::max(0.0, 1.0 - b.mu * b.nu));
    }
  }
  if (b.skew_m)
  {
    b.factor_skew_linear = b.rho_m / std::sqrt(1.0 + b.rho_m);
    b.factor_skew_squared = b.rho_m / std::sqrt(1.0 + b.rho_m * b.rho_m);
  }
  return b;
}

const BoundCheck *ContractionReport::find(const std::string &name) const
{
  for (const auto &c : checks)
  {
    if (c.name == name)
    {
      return &c;
    }
  }
  return nullptr;
}

namespace
{

BoundCheck per_step(const std::string &name, bool applicable, double factor,
                    const IterationTrace &trace)
{
  BoundCheck c;
  c.name = name;
  c.applicable = applicable;
  if (!applicable)
  {
    c.note = "hypothesis not met";
    return c;
  }
  const double slack = contraction_slack * trace.initial_resnorm();
  for (std::size_t k = 0; k + 1 < trace.records.size(); ++k)
  {
    const double cur = trace.records[k].resnorm;
    const double next = trace.records[k + 1].resnorm;
    if (cur > 0.0 && factor > 0.0)
    {
      c.worst_ratio = std::max(c.worst_ratio, next / (factor * cur));
    }
    if (next > factor * cur + slack && !c.first_failure)
    {
      c.first_failure = static_cast<Index>(k);
      c.pass = false;
    }
  }
  return c;
}

bool per_step_method(const IterationTrace &trace)
{
  switch (trace.method)
  {
    case Method::gmres:
    case Method::ngmres:
    case Method::mr:
    case Method::ngmres1_three_term:
    case Method::conjugate_residual:
      return true;
    case Method::anderson:
      return false;
  }
  return false;
}

bool gmres_equivalent_on_spd(const IterationTrace &trace)
{
  switch (trace.method)
  {
    case Method::gmres:
    case Method::ngmres1_three_term:
    case Method::conjugate_residual:
      return true;
    case Method::ngmres:
      return trace.window.is_full() || trace.window.value() >= 1;
    default:
      return false;
  }
}

}  // namespace

ContractionReport check_contraction(const IterationTrace &trace, const BoundReport &b)
{
  ContractionReport rep;
  const bool stepwise = per_step_method(trace);
  rep.checks.push_back(
      per_step("mu_sigma", stepwise && b.positive_real, b.factor_mu_sigma, trace));
  rep.checks.push_back(
      per_step("mu_nu", stepwise && b.positive_real && b.invertible, b.factor_mu_nu, trace));
  rep.checks.push_back(
      per_step("symmetric", stepwise && b.symmetric_definite, b.factor_symmetric, trace));
  rep.checks.push_back(per_step("skew", stepwise && b.skew_m, b.factor_skew(), trace));
  if (stepwise && b.skew_m)
  {
    rep.skew_linear_holds = per_step("", true, b.factor_skew_linear, trace).pass;
    rep.skew_squared_holds = per_step("", true, b.factor_skew_squared, trace).pass;
  }

  BoundCheck cheb;
  cheb.name = "chebyshev";
  cheb.applicable = b.symmetric_definite && gmres_equivalent_on_spd(trace);
  if (cheb.applicable)
  {
    const double r0 = trace.initial_resnorm();
    for (std::size_t k = 0; k < trace.records.size(); ++k)
    {
      const double bound = b.chebyshev_factor(static_cast<Index>(k)) * r0;
      const double rk = trace.records[k].resnorm;
      if (bound > 0.0)
      {
        cheb.worst_ratio = std::max(cheb.worst_ratio, rk / bound);
      }
      if (rk > bound + contraction_slack * r0 && !cheb.first_failure)
      {
        cheb.first_failure = static_cast<Index>(k);
        cheb.pass = false;
      }
    }
  }
  else
  {
    cheb.note = "hypothesis not met";
  }
  rep.checks.push_back(cheb);

  for (const auto &c : rep.checks)
  {
    rep.pass = rep.pass && (!c.applicable || c.pass);
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace
{

// Number of leading iterates to compare, honouring the floor.
std::size_t comparable_prefix(const IterationTrace &a, const IterationTrace &b, double floor)
{
  const std::size_t n = std::min(a.records.size(), b.records.size());
  const double r0 = a.initial_resnorm();
  for (std::size_t j = 0; j < n; ++j)
  {
    if (!above_floor(a.records[j].resnorm, r0, floor) ||
        !above_floor(b.records[j].resnorm, r0, floor))
    {
      return j;
    }
  }
  return n;
}

double scale_of(const IterationTrace &a)
{
  const double r0 = a.initial_resnorm();
  return r0 > 0.0 ? r0 : 1.0;
}

}  // namespace

std::optional<Index> compare_traces(const IterationTrace &a, const IterationTrace &b,
                                    double tol, double floor)
{
  const std::size_t n = comparable_prefix(a, b, floor);
  const double scale = scale_of(a);
  for (std::size_t j = 0; j < n; ++j)
  {
    if ((a.records[j].r - b.records[j].r).norm() > tol * scale)
    {
      return j == 0 ? 0 : static_cast<Index>(j) - 1;
    }
  }
  return std::nullopt;
}

double max_residual_difference(const IterationTrace &a, const IterationTrace &b, double floor)
{
  const std::size_t n = comparable_prefix(a, b, floor);
  const double scale = scale_of(a);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j)
  {
    worst = std::max(worst, (a.records[j].r - b.records[j].r).norm() / scale);
  }
  return worst;
}

Index strict_decrease_horizon(const IterationTrace &g)
{
  if (g.records.empty())
  {
    return 0;
  }
  const double slack = strict_decrease_tol * g.initial_resnorm();
  for (std::size_t k = 1; k < g.records.size(); ++k)
  {
    if (!(g.records[k].resnorm < g.records[k - 1].resnorm - slack))
    {
      return static_cast<Index>(k);
    }
  }
  // Every step decreased: the hypothesis covers the whole trace.
  return static_cast<Index>(g.records.size());
}

EquivalenceVerdict check_gmres_equivalence(const IterationTrace &g, const IterationTrace &other,
                                           double tol, double floor)
{
  EquivalenceVerdict v;
  const Index horizon = strict_decrease_horizon(g);
  v.hypothesis_met = horizon >= 2;
  const Index n = static_cast<Index>(comparable_prefix(g, other, floor));
  const Index last = std::min(horizon, n - 1);
  const double scale = scale_of(g);
  for (Index j = 0; j <= last; ++j)
  {
    const double d =
        (g.records[static_cast<std::size_t>(j)].r - other.records[static_cast<std::size_t>(j)].r)
            .norm() /
        scale;
    v.max_difference = std::max(v.max_difference, d);
    if (d > tol && !v.divergence)
    {
      v.divergence = j == 0 ? 0 : j - 1;
    }
    v.verified_through = j;
  }
  v.pass = !v.hypothesis_met || !v.divergence.has_value();
  return v;
}

EquivalenceVerdict check_anderson_linkage(const IterationTrace &g, const IterationTrace &aa,
                                          double tol, double floor)
{
  EquivalenceVerdict v;
  const Index horizon = strict_decrease_horizon(g);
  v.hypothesis_met = horizon >= 2;
  const double r0 = g.initial_resnorm();
  const Index last =
      std::min(horizon, std::min(static_cast<Index>(g.records.size()),
                                 static_cast<Index>(aa.records.size()) - 1) -
                            1);
  for (Index j = 0; j <= last; ++j)
  {
    const auto &gr = g.records[static_cast<std::size_t>(j)];
    if (!above_floor(gr.resnorm, r0, floor))
    {
      break;
    }
    const Vector target = gr.x - gr.r;
    const double d = (aa.records[static_cast<std::size_t>(j + 1)].x - target).norm() /
                     std::max(1.0, target.norm());
    v.max_difference = std::max(v.max_difference, d);
    if (d > tol && !v.divergence)
    {
      v.divergence = j;
    }
    v.verified_through = j;
  }
  v.pass = !v.hypothesis_met || !v.divergence.has_value();
  return v;
}

double monotonicity_violation(const IterationTrace &trace, double slack)
{
  const double r0 = trace.initial_resnorm();
  const double scale = r0 > 0.0 ? r0 : 1.0;
  double worst = -slack;
  for (std::size_t k = 0; k + 1 < trace.records.size(); ++k)
  {
    worst = std::max(worst, (trace.records[k + 1].resnorm - trace.records[k].resnorm) / scale -
                                slack);
  }
  return worst;
}

}  // namespace ngmres
