// Python bindings: problems, solvers, traces, diagnostics, the experiment
// harness and the acceptance criteria. Vectors and matrices cross as NumPy
// arrays; sparse matrices as scipy.sparse CSR.

#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ngmres/acceptance.hpp"
#include "ngmres/diagnostics.hpp"
#include "ngmres/harness.hpp"
#include "ngmres/problems.hpp"
#include "ngmres/solvers.hpp"

namespace py = pybind11;
using namespace ngmres;

namespace
{

WindowSize to_window(const py::object &w)
{
  if (w.is_none())
  {
    return WindowSize::full();
  }
  return WindowSize::parse(py::str(w).cast<std::string>());
}

Method parse_method(const std::string &name)
{
  for (Method m : {Method::gmres, Method::ngmres, Method::anderson, Method::mr,
                   Method::ngmres1_three_term, Method::conjugate_residual})
  {
    if (to_string(m) == name)
    {
      return m;
    }
  }
  if (name == "ngmres1")
  {
    return Method::ngmres1_three_term;
  }
  if (name == "cr")
  {
    return Method::conjugate_residual;
  }
  throw py::value_error("unknown method '" + name + "'");
}

// Columns are iterates 0..k.
DenseMatrix stack(const IterationTrace &t, bool residuals)
{
  const Index n = t.records.empty() ? 0 : t.records.front().x.size();
  DenseMatrix out(n, static_cast<Index>(t.records.size()));
  for (std::size_t k = 0; k < t.records.size(); ++k)
  {
    out.col(static_cast<Index>(k)) = residuals ? t.records[k].r : t.records[k].x;
  }
  return out;
}

py::dict bounds_dict(const BoundReport &b)
{
  py::dict d;
  d["mu"] = b.mu;
  d["nu"] = b.nu;
  d["sigma"] = b.sigma;
  d["rho_m"] = b.rho_m;
  d["kappa"] = b.kappa;
  d["lambda_min"] = b.lambda_min;
  d["lambda_max"] = b.lambda_max;
  d["invertible"] = b.invertible;
  d["positive_real"] = b.positive_real;
  d["symmetric_definite"] = b.symmetric_definite;
  d["skew_m"] = b.skew_m;
  d["factor_mu_sigma"] = b.factor_mu_sigma;
  d["factor_mu_nu"] = b.factor_mu_nu;
  d["factor_symmetric"] = b.factor_symmetric;
  d["factor_skew"] = b.factor_skew();
  d["chebyshev_base"] = b.chebyshev_base;
  return d;
}

py::dict verdict_dict(const EquivalenceVerdict &v)
{
  py::dict d;
  d["hypothesis_met"] = v.hypothesis_met;
  d["verified_through"] = v.verified_through;
  d["max_difference"] = v.max_difference;
  d["divergence"] = v.divergence;
  d["pass"] = v.pass;
  return d;
}

py::dict artifact_dict(const RunArtifact &art)
{
  py::dict d;
  d["pass"] = art.pass();
  d["summary"] = art.summary();
  d["problem"] = art.problem_label;
  d["n"] = art.n;
  py::dict traces;
  for (const auto &o : art.outcomes)
  {
    traces[py::str(o.spec.label())] = o.trace;
  }
  d["traces"] = traces;
  py::dict divergence;
  for (const auto &c : art.comparisons)
  {
    divergence[py::str(c.other)] = c.divergence;
  }
  d["divergence"] = divergence;
  py::list checks;
  for (const auto &c : art.checks)
  {
    py::dict e;
    e["solver"] = c.solver;
    e["name"] = c.name;
    e["asserted"] = c.asserted;
    e["pass"] = c.pass;
    e["detail"] = c.detail;
    checks.append(e);
  }
  d["checks"] = checks;
  return d;
}

ExperimentConfig config_from_text(const std::string &text)
{
  std::istringstream in(text);
  ExperimentConfig cfg = parse_config(in);
  cfg.validate();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Nonlinear GMRES, GMRES and Anderson acceleration on linear systems";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<Problem>(m, "Problem")
      .def(py::init([](const SparseMatrix &a, const Vector &b, const std::string &symmetry,
                       const std::string &label) {
             return Problem(a, b, parse_symmetry_class(symmetry), label);
           }),
           py::arg("matrix"), py::arg("rhs"), py::arg("symmetry") = "general",
           py::arg("label") = "user")
      .def_property_readonly("matrix", &Problem::matrix)
      .def_property_readonly("rhs", &Problem::rhs)
      .def_property_readonly("symmetry",
                             [](const Problem &p) { return std::string(to_string(p.symmetry())); })
      .def_property_readonly("label", &Problem::label)
      .def_property_readonly("exact_solution", &Problem::exact_solution)
      .def_property_readonly("size", &Problem::size)
      .def("dense", &Problem::dense)
      .def("__repr__", [](const Problem &p) {
        return "<Problem " + p.label() + " n=" + std::to_string(p.size()) + ">";
      });

  m.def(
      "convection_diffusion",
      [](Index n, double gamma, const std::string &scaling) {
        const double s = convection_from_mesh_reynolds(n, gamma);
        return build_convection_diffusion(n, s, s, parse_stencil_scaling(scaling));
      },
      py::arg("n"), py::arg("gamma") = 0.5, py::arg("scaling") = "physical",
      "n x n grid, sigma = tau chosen for mesh Reynolds number gamma");
  m.def(
      "shifted_skew",
      [](const Problem &k) { return to_shifted_skew(k); }, py::arg("problem"),
      "A = I - (K - K^T)/2 with b = A * ones");
  m.def("cyclic_shift", &build_cyclic_shift, py::arg("n"));
  m.def("identity", &build_identity, py::arg("n"));
  m.def("random_positive_real", &build_random_positive_real, py::arg("n"),
        py::arg("min_sym_eig") = 0.1, py::arg("seed") = 1);
  m.def("random_dense", &build_random_dense, py::arg("n"), py::arg("shift") = 1.0,
        py::arg("seed") = 1);
  m.def("random_guess", &random_guess, py::arg("n"), py::arg("seed"));

  py::class_<IterationTrace>(m, "Trace")
      .def_property_readonly("method",
                             [](const IterationTrace &t) { return std::string(to_string(t.method)); })
      .def_property_readonly("label", &IterationTrace::label)
      .def_property_readonly("termination", [](const IterationTrace &t) {
        return std::string(to_string(t.termination));
      })
      .def_property_readonly("iterations", &IterationTrace::iterations)
      .def_property_readonly("resnorms", [](const IterationTrace &t) {
        const auto r = t.resnorms();
        return Vector(Eigen::Map<const Vector>(r.data(), static_cast<Index>(r.size())));
      })
      .def_property_readonly("x", [](const IterationTrace &t) { return t.records.back().x; })
      .def_property_readonly("iterates", [](const IterationTrace &t) { return stack(t, false); })
      .def_property_readonly("residuals", [](const IterationTrace &t) { return stack(t, true); })
      .def_property_readonly("coefficients",
                             [](const IterationTrace &t) {
                               std::vector<Vector> c;
                               for (const auto &r : t.records)
                               {
                                 c.push_back(r.coefficients);
                               }
                               return c;
                             })
      .def_property_readonly("ranks",
                             [](const IterationTrace &t) {
                               std::vector<Index> c;
                               for (const auto &r : t.records)
                               {
                                 c.push_back(r.rank);
                               }
                               return c;
                             })
      .def_property_readonly("min_norm_applied",
                             [](const IterationTrace &t) {
                               std::vector<bool> c;
                               for (const auto &r : t.records)
                               {
                                 c.push_back(r.min_norm_applied);
                               }
                               return c;
                             })
      .def("__len__", [](const IterationTrace &t) { return t.records.size(); })
      .def("__repr__", [](const IterationTrace &t) {
        return "<Trace " + t.label() + " iterations=" + std::to_string(t.iterations()) + " " +
               std::string(to_string(t.termination)) + ">";
      });

  m.def(
      "solve",
      [](const Problem &p, const std::string &method, const py::object &window,
         std::optional<Vector> x0, double tol, Index max_iter, double rank_tol,
         const std::string &residual_mode, int stagnation_window) {
        SolveConfig cfg;
        cfg.tol = tol;
        cfg.max_iter = max_iter;
        cfg.rank_tol = rank_tol;
        cfg.residual_mode = parse_residual_mode(residual_mode);
        cfg.stagnation_window = stagnation_window;
        cfg.validate();
        const Vector start = x0 ? *x0 : zeros_guess(p.size());
        const Method m = parse_method(method);
        const WindowSize w = to_window(window);
        const LinearSystem sys(p);
        py::gil_scoped_release release;
        return ngmres::solve(m, sys, start, w, cfg);
      },
      py::arg("problem"), py::arg("method") = "ngmres", py::arg("window") = 1,
      py::arg("x0") = py::none(), py::arg("tol") = 1e-10, py::arg("max_iter") = 200,
      py::arg("rank_tol") = default_rank_tol, py::arg("residual_mode") = "explicit",
      py::arg("stagnation_window") = 3,
      "method: gmres | ngmres | anderson | mr | ngmres1 | cr; window: int or None/'full'");

  m.def("compare_traces", &compare_traces, py::arg("a"), py::arg("b"), py::arg("tol"),
        py::arg("floor") = 0.0, "First iterate whose residuals differ by more than tol ||r0||");
  m.def(
      "check_gmres_equivalence",
      [](const IterationTrace &g, const IterationTrace &other, double tol, double floor) {
        return verdict_dict(check_gmres_equivalence(g, other, tol, floor));
      },
      py::arg("gmres"), py::arg("other"), py::arg("tol") = 1e-8, py::arg("floor") = 0.0);
  m.def(
      "bounds", [](const Problem &p) { return bounds_dict(compute_bounds(p)); },
      py::arg("problem"), "Dense spectral quantities and contraction factors");

  m.def(
      "run_experiment",
      [](const std::string &config_text, bool write) {
        const ExperimentConfig cfg = config_from_text(config_text);
        RunArtifact art;
        {
          py::gil_scoped_release release;
          art = run_experiment(cfg);
        }
        py::dict d = artifact_dict(art);
        if (write)
        {
          std::vector<std::string> files;
          for (const auto &f : write_artifacts(art))
          {
            files.push_back(f.string());
          }
          d["files"] = files;
        }
        return d;
      },
      py::arg("config"), py::arg("write") = false,
      "Runs a flat 'key = value' experiment config; writes artifacts to its 'out' when asked");
  m.def(
      "check_stored_run",
      [](const std::filesystem::path &dir) {
        const StoredCheck c = check_stored_run(dir);
        return py::make_tuple(c.pass, c.lines);
      },
      py::arg("dir"));

  m.attr("criterion_count") = acceptance_criterion_count;
  m.def("criterion_title", &criterion_title, py::arg("id"));
  m.def(
      "run_criterion",
      [](int id) {
        CriterionResult r;
        {
          py::gil_scoped_release release;
          r = run_criterion(id);
        }
        py::dict d;
        d["id"] = r.id;
        d["title"] = r.title;
        d["pass"] = r.pass;
        d["seconds"] = r.seconds;
        d["details"] = r.details;
        return d;
      },
      py::arg("id"));
}
