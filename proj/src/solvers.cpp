#include "ngmres/solvers.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "ngmres/window.hpp"

namespace ngmres
{

namespace
{

// Collects records and decides when a run stops.
class Recorder
{
public:
  Recorder(Method method, WindowSize window, const SolveConfig &cfg, bool detect_stagnation)
      : cfg_(cfg), detect_stagnation_(detect_stagnation && cfg.stagnation_window > 0)
  {
    cfg.validate();
    trace_.method = method;
    trace_.window = window;
  }

  // Appends x_k, r_k. Returns a termination reason when the run should stop.
  std::optional<Termination> record(Vector x, Vector r, Vector coefficients = {},
                                    Index rank = -1, bool min_norm = false)
  {
    const Index k = static_cast<Index>(trace_.records.size());
    if (!x.allFinite() || !r.allFinite() || !coefficients.allFinite())
    {
      throw NumericalError(std::string(to_string(trace_.method)) +
                           ": non-finite arithmetic at iteration " + std::to_string(k));
    }
    IterationRecord rec;
    rec.resnorm = r.norm();
    if (k == 0)
    {
      r0_norm_ = rec.resnorm;
    }
    else if (detect_stagnation_)
    {
      const double step = (r - trace_.records.back().r).norm();
      stagnant_run_ = step <= stagnation_rel_tol * r0_norm_ ? stagnant_run_ + 1 : 0;
    }
    rec.x = std::move(x);
    rec.r = std::move(r);
    rec.coefficients = std::move(coefficients);
    rec.rank = rank;
    rec.min_norm_applied = min_norm;
    const double resnorm = rec.resnorm;
    trace_.records.push_back(std::move(rec));

    if (resnorm <= cfg_.tol * r0_norm_)
    {
      return Termination::tolerance;
    }
    if (detect_stagnation_ && stagnant_run_ >= cfg_.stagnation_window)
    {
      return Termination::stagnation;
    }
    if (k >= cfg_.max_iter)
    {
      return Termination::max_iter;
    }
    return std::nullopt;
  }

  const IterationRecord &last() const { return trace_.records.back(); }
  Index iteration() const { return static_cast<Index>(trace_.records.size()) - 1; }

  IterationTrace finish(Termination reason)
  {
    trace_.termination = reason;
    return std::move(trace_);
  }

private:
  const SolveConfig &cfg_;
  bool detect_stagnation_;
  IterationTrace trace_;
  double r0_norm_ = 0.0;
  int stagnant_run_ = 0;
};

void check_start(const LinearSystem &system, const Vector &x0)
{
  if (x0.size() != system.size())
  {
    throw DimensionError("initial guess has length " + std::to_string(x0.size()) +
                         ", system size is " + std::to_string(system.size()));
  }
  if (!x0.allFinite())
  {
    throw NonFiniteError("initial guess holds non-finite values");
  }
}

Vector next_residual(const LinearSystem &system, const SolveConfig &cfg, const Vector &x,
                     const Vector &recursive)
{
  return cfg.residual_mode == ResidualMode::explicit_recompute ? system.residual(x) : recursive;
}

struct Rotation
{
  double c = 1.0;
  double s = 0.0;
};

// Rotation taking (a, b) to (rho, 0).
Rotation make_rotation(double a, double b)
{
  if (b == 0.0)
  {
    return {1.0, 0.0};
  }
  if (std::abs(b) > std::abs(a))
  {
    const double t = a / b;
    const double s = 1.0 / std::sqrt(1.0 + t * t);
    return {t * s, s};
  }
  const double t = b / a;
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c};
}

}  // namespace

IterationTrace gmres(const LinearSystem &system, const Vector &x0, const SolveConfig &cfg)
{
  check_start(system, x0);
  Recorder rec(Method::gmres, WindowSize::full(), cfg, false);
  const Index n = system.size();

  Vector r0 = system.residual(x0);
  const double beta = r0.norm();
  if (auto stop = rec.record(x0, r0))
  {
    return rec.finish(*stop);
  }

  const Index kmax = cfg.max_iter;
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(kmax + 1));
  // Algorithm works with the classical residual b - A x0 = -r0.
  basis.push_back(-r0 / beta);

  DenseMatrix hessenberg = DenseMatrix::Zero(kmax + 1, kmax);
  DenseMatrix rotated = DenseMatrix::Zero(kmax + 1, kmax);
  std::vector<Rotation> rotations;
  rotations.reserve(static_cast<std::size_t>(kmax));
  Vector g = Vector::Zero(kmax + 1);
  g(0) = beta;

  for (Index j = 0; j < kmax; ++j)
  {
    Vector w = system.apply(basis[static_cast<std::size_t>(j)]);
    const double w_norm = w.norm();
    for (int pass = 0; pass < 2; ++pass)
    {
      for (Index i = 0; i <= j; ++i)
      {
        const Vector &v = basis[static_cast<std::size_t>(i)];
        const double h = v.dot(w);
        hessenberg(i, j) += h;
        w -= h * v;
      }
    }
    const double h_next = w.norm();
    hessenberg(j + 1, j) = h_next;
    const bool lucky = h_next <= 1e-14 * w_norm;

    rotated.col(j).head(j + 2) = hessenberg.col(j).head(j + 2);
    for (Index i = 0; i < j; ++i)
    {
      const Rotation &rot = rotations[static_cast<std::size_t>(i)];
      const double upper = rotated(i, j);
      const double lower = rotated(i + 1, j);
      rotated(i, j) = rot.c * upper + rot.s * lower;
      rotated(i + 1, j) = -rot.s * upper + rot.c * lower;
    }
    const Rotation rot = make_rotation(rotated(j, j), rotated(j + 1, j));
    rotations.push_back(rot);
    rotated(j, j) = rot.c * rotated(j, j) + rot.s * rotated(j + 1, j);
    rotated(j + 1, j) = 0.0;
    g(j + 1) = -rot.s * g(j);
    g(j) = rot.c * g(j);

    if (rotated(j, j) == 0.0)
    {
      // A maps the new basis vector into the span already seen with no
      // component left: singular operator.
      return rec.finish(Termination::breakdown);
    }

    const Vector y = rotated.topLeftCorner(j + 1, j + 1)
                         .triangularView<Eigen::Upper>()
                         .solve(g.head(j + 1));
    Vector x = x0;
    for (Index i = 0; i <= j; ++i)
    {
      x += y(i) * basis[static_cast<std::size_t>(i)];
    }

    Vector r;
    if (cfg.residual_mode == ResidualMode::explicit_recompute)
    {
      r = system.residual(x);
    }
    else
    {
      // b - A x = V_{j+1} (beta e_1 - H y), negated for the A x - b convention.
      Vector coeff = -hessenberg.topLeftCorner(j + 2, j + 1) * y;
      coeff(0) += beta;
      r = Vector::Zero(n);
      for (Index i = 0; i <= j; ++i)
      {
        r -= coeff(i) * basis[static_cast<std::size_t>(i)];
      }
      if (!lucky)
      {
        r -= coeff(j + 1) * (w / h_next);
      }
    }

    if (auto stop = rec.record(std::move(x), std::move(r), y, j + 1, false))
    {
      return rec.finish(*stop);
    }
    if (lucky)
    {
      return rec.finish(Termination::breakdown);
    }
    basis.push_back(w / h_next);
  }
  return rec.finish(Termination::max_iter);
}

IterationTrace ngmres(const LinearSystem &system, const Vector &x0, WindowSize window,
                      const SolveConfig &cfg)
{
  check_start(system, x0);
  Recorder rec(Method::ngmres, window, cfg, true);

  Vector r0 = system.residual(x0);
  if (auto stop = rec.record(x0, r0))
  {
    return rec.finish(*stop);
  }
  WindowState history(window);
  history.advance(r0, x0, system.apply_m(r0));

  while (true)
  {
    const DenseMatrix w = history.assemble();
    const Vector &mr = history.head_mr();
    const Index p = history.stored();
    const Vector &xk = history.iterate(0);
    const Vector &rk = history.residual(0);
    const Vector q = xk - rk;

    // Same minimisation over span{r_k - M r_k, r_{k-i} - r_k}. Once the
    // window stalls those differences are tiny and the coefficients large;
    // building x from iterate differences avoids cancelling large multiples
    // of nearly equal iterates. The minimisers coincide when the problem has
    // full rank; otherwise the minimum-norm beta of the original form is used.
    DenseMatrix wd(w.rows(), p);
    wd.col(0) = w.col(0);
    for (Index i = 1; i < p; ++i)
    {
      wd.col(i) = history.residual(i) - rk;
    }
    LeastSquaresSolution ls = min_norm_lstsq(wd, mr, cfg.rank_tol);
    Vector beta;
    Vector x;
    Vector r_rec;
    if (ls.numerical_rank == p)
    {
      const Vector &gamma = ls.coefficients;
      beta = gamma;
      beta(0) = gamma(0) - gamma.tail(p - 1).sum();
      x = q + gamma(0) * (q - xk);
      for (Index i = 1; i < p; ++i)
      {
        x += gamma(i) * (xk - history.iterate(i));
      }
      r_rec = mr - wd * gamma;
    }
    else
    {
      ls = min_norm_lstsq(w, mr, cfg.rank_tol);
      beta = ls.coefficients;
      x = q;
      for (Index i = 0; i < p; ++i)
      {
        x += beta(i) * (q - history.iterate(i));
      }
      r_rec = mr - w * beta;
    }
    Vector r = next_residual(system, cfg, x, r_rec);
    Vector mr_next = system.apply_m(r);

    if (auto stop = rec.record(x, r, beta, ls.numerical_rank, ls.min_norm_applied))
    {
      return rec.finish(*stop);
    }
    history.advance(std::move(r), std::move(x), std::move(mr_next));
  }
}

IterationTrace anderson(const LinearSystem &system, const Vector &x0, WindowSize window,
                        const SolveConfig &cfg)
{
  check_start(system, x0);
  Recorder rec(Method::anderson, window, cfg, true);
  const Index n = system.size();

  Vector r0 = system.residual(x0);
  if (auto stop = rec.record(x0, r0))
  {
    return rec.finish(*stop);
  }
  WindowState history(window);
  history.advance(r0, x0, Vector::Zero(n));

  while (true)
  {
    const Vector &rk = history.residual(0);
    const Vector &xk = history.iterate(0);
    const Index depth = history.depth();
    const Vector q = xk - rk;

    Vector gamma;
    Index rank = -1;
    bool min_norm = false;
    Vector combined = rk;  // r_k + sum gamma_i (r_k - r_{k-i})
    Vector x = q;
    if (depth > 0)
    {
      DenseMatrix diffs(n, depth);
      for (Index i = 1; i <= depth; ++i)
      {
        diffs.col(i - 1) = history.residual(i) - rk;
      }
      const LeastSquaresSolution ls = min_norm_lstsq(diffs, rk, cfg.rank_tol);
      gamma = ls.coefficients;
      rank = ls.numerical_rank;
      min_norm = ls.min_norm_applied;
      combined = rk - diffs * gamma;
      for (Index i = 1; i <= depth; ++i)
      {
        const Vector q_old = history.iterate(i) - history.residual(i);
        x += gamma(i - 1) * (q - q_old);
      }
    }
    Vector r = next_residual(system, cfg, x, system.apply_m(combined));

    if (auto stop = rec.record(x, r, gamma, rank, min_norm))
    {
      return rec.finish(*stop);
    }
    history.advance(std::move(r), std::move(x), Vector::Zero(n));
  }
}

IterationTrace mr_iteration(const LinearSystem &system, const Vector &x0, const SolveConfig &cfg)
{
  check_start(system, x0);
  Recorder rec(Method::mr, WindowSize::of(0), cfg, true);

  Vector x = x0;
  Vector r = system.residual(x0);
  if (auto stop = rec.record(x, r))
  {
    return rec.finish(*stop);
  }
  while (true)
  {
    const Vector ar = system.apply(r);
    const double denom = ar.squaredNorm();
    if (denom == 0.0)
    {
      return rec.finish(Termination::breakdown);
    }
    const double alpha = r.dot(ar) / denom;
    x -= alpha * r;
    r = next_residual(system, cfg, x, r - alpha * ar);
    Vector coeff(1);
    coeff << alpha;
    if (auto stop = rec.record(x, r, coeff, 1, false))
    {
      return rec.finish(*stop);
    }
  }
}

IterationTrace ngmres1_three_term(const LinearSystem &system, const Vector &x0,
                                  const SolveConfig &cfg)
{
  check_start(system, x0);
  Recorder rec(Method::ngmres1_three_term, WindowSize::of(1), cfg, true);

  Vector x_prev = x0;
  Vector r_prev = system.residual(x0);
  if (auto stop = rec.record(x_prev, r_prev))
  {
    return rec.finish(*stop);
  }

  // First step is the minimal residual step.
  Vector ar = system.apply(r_prev);
  {
    const double denom = ar.squaredNorm();
    if (denom == 0.0)
    {
      return rec.finish(Termination::breakdown);
    }
    const double alpha = r_prev.dot(ar) / denom;
    Vector beta(1);
    beta << alpha - 1.0;
    Vector x = x_prev - alpha * r_prev;
    Vector r = next_residual(system, cfg, x, r_prev - alpha * ar);
    if (auto stop = rec.record(x, r, beta, 1, false))
    {
      return rec.finish(*stop);
    }
  }

  while (true)
  {
    const Vector &x = rec.last().x;
    const Vector &r = rec.last().r;
    ar = system.apply(r);
    const Vector mr = r - ar;
    const Vector w2 = ar + r_prev - r;

    Eigen::Matrix2d c;
    c(0, 0) = ar.dot(ar);
    c(0, 1) = ar.dot(w2);
    c(1, 0) = c(0, 1);
    c(1, 1) = w2.dot(w2);
    const Eigen::Vector2d f(ar.dot(mr), w2.dot(mr));

    const LeastSquaresSolution ls = min_norm_lstsq(c, f, cfg.rank_tol);
    const double b0 = ls.coefficients(0);
    const double b1 = ls.coefficients(1);

    Vector x_next = x - (1.0 + b0 + b1) * r + b1 * (x - x_prev);
    Vector r_next =
        next_residual(system, cfg, x_next, (1.0 + b0 + b1) * mr - b0 * r - b1 * r_prev);

    x_prev = x;
    r_prev = r;
    if (auto stop = rec.record(std::move(x_next), std::move(r_next), ls.coefficients,
                               ls.numerical_rank, ls.min_norm_applied))
    {
      return rec.finish(*stop);
    }
  }
}

IterationTrace conjugate_residual(const LinearSystem &system, const Vector &x0,
                                  const SolveConfig &cfg)
{
  if (system.symmetry() != SymmetryClass::symmetric)
  {
    throw std::invalid_argument("conjugate_residual requires a symmetric system");
  }
  check_start(system, x0);
  Recorder rec(Method::conjugate_residual, WindowSize::of(1), cfg, false);

  Vector x = x0;
  // Classical residual s = b - A x.
  Vector s = -system.residual(x0);
  if (auto stop = rec.record(x, -s))
  {
    return rec.finish(*stop);
  }
  Vector p = s;
  Vector as = system.apply(s);
  Vector ap = as;
  double s_as = s.dot(as);

  while (true)
  {
    const double ap_norm2 = ap.squaredNorm();
    if (s_as == 0.0 || ap_norm2 == 0.0)
    {
      return rec.finish(Termination::breakdown);
    }
    const double alpha = s_as / ap_norm2;
    x += alpha * p;
    if (cfg.residual_mode == ResidualMode::explicit_recompute)
    {
      s = -system.residual(x);
    }
    else
    {
      s -= alpha * ap;
    }
    as = system.apply(s);
    const double s_as_next = s.dot(as);
    const double beta = s_as_next / s_as;
    p = s + beta * p;
    ap = as + beta * ap;
    s_as = s_as_next;

    Vector coeff(2);
    coeff << alpha, beta;
    if (auto stop = rec.record(x, -s, coeff, -1, false))
    {
      return rec.finish(*stop);
    }
  }
}

IterationTrace gmres(const Problem &p, const Vector &x0, const SolveConfig &cfg)
{
  return gmres(LinearSystem(p), x0, cfg);
}

IterationTrace ngmres(const Problem &p, const Vector &x0, WindowSize window,
                      const SolveConfig &cfg)
{
  return ngmres(LinearSystem(p), x0, window, cfg);
}

IterationTrace anderson(const Problem &p, const Vector &x0, WindowSize window,
                        const SolveConfig &cfg)
{
  return anderson(LinearSystem(p), x0, window, cfg);
}

IterationTrace mr_iteration(const Problem &p, const Vector &x0, const SolveConfig &cfg)
{
  return mr_iteration(LinearSystem(p), x0, cfg);
}

IterationTrace ngmres1_three_term(const Problem &p, const Vector &x0, const SolveConfig &cfg)
{
  return ngmres1_three_term(LinearSystem(p), x0, cfg);
}

IterationTrace conjugate_residual(const Problem &p, const Vector &x0, const SolveConfig &cfg)
{
  return conjugate_residual(LinearSystem(p), x0, cfg);
}

IterationTrace solve(Method method, const LinearSystem &system, const Vector &x0,
                     WindowSize window, const SolveConfig &cfg)
{
  switch (method)
  {
    case Method::gmres:
      return gmres(system, x0, cfg);
    case Method::ngmres:
      return ngmres(system, x0, window, cfg);
    case Method::anderson:
      return anderson(system, x0, window, cfg);
    case Method::mr:
      return mr_iteration(system, x0, cfg);
    case Method::ngmres1_three_term:
      return ngmres1_three_term(system, x0, cfg);
    case Method::conjugate_residual:
      return conjugate_residual(system, x0, cfg);
  }
  throw std::invalid_argument("unknown method");
}

double residual_drift(const IterationTrace &trace, const LinearSystem &system)
{
  const double scale = trace.initial_resnorm();
  double worst = 0.0;
  for (const auto &rec : trace.records)
  {
    const double diff = (rec.r - system.residual(rec.x)).norm();
    worst = std::max(worst, scale > 0.0 ? diff / scale : diff);
  }
  return worst;
}

}  // namespace ngmres
