import numpy as np
import pytest

import ngmres


def test_mr_first_step_matches_hand_value():
    # A = diag(1, 2), b = (1, 1), x0 = 0: r0 = -b, alpha = (r.Ar)/(Ar.Ar) = 3/5.
    p = ngmres.from_matrix(np.diag([1.0, 2.0]), b=[1.0, 1.0])
    t = ngmres.solve(p, "mr", max_iter=1, tol=1e-16)
    assert t.iterations == 1
    np.testing.assert_allclose(t.x, [0.6, 0.6], rtol=0, atol=1e-15)


def test_ngmres1_follows_gmres_on_symmetric_system():
    p = ngmres.convection_diffusion(6, gamma=0.0)
    assert p.symmetry == "symmetric"
    x0 = ngmres.random_guess(p.size, 3)
    g = ngmres.solve(p, "gmres", window=None, x0=x0)
    w = ngmres.solve(p, "ngmres", window=1, x0=x0)
    v = ngmres.check_gmres_equivalence(g, w, tol=1e-8, floor=1e-8)
    assert v["hypothesis_met"] and v["pass"]
    assert ngmres.compare_traces(g, w, 1e-8, 1e-8) is None


def test_cyclic_shift_stalls_gmres_from_zero():
    p = ngmres.cyclic_shift(5)
    t = ngmres.solve(p, "gmres", window=None, max_iter=4, tol=1e-14)
    np.testing.assert_allclose(t.resnorms, np.ones(5), atol=1e-15)
    assert t.residuals.shape == (5, 5)


def test_skew_bounds():
    p = ngmres.from_matrix(np.array([[1.0, -1.0], [1.0, 1.0]]))
    b = ngmres.bounds(p)
    assert b["skew_m"]
    assert b["rho_m"] == pytest.approx(1.0, abs=1e-14)
    assert b["factor_skew"] == pytest.approx(1 / np.sqrt(2), abs=1e-14)


def test_experiment_and_config_errors(tmp_path):
    cfg = "\n".join(
        [
            "name = smoke",
            "problem = identity",
            "n = 4",
            "solvers = gmres, ngmres(1), anderson(2)",
            f"out = {tmp_path / 'run'}",
        ]
    )
    art = ngmres.run_experiment(cfg, write=True)
    assert art["pass"]
    assert art["divergence"]["ngmres(1)"] is None
    assert art["traces"]["gmres"].iterations == 1
    ok, _ = ngmres.check_stored_run(tmp_path / "run")
    assert ok
    with pytest.raises(ngmres.ConfigError):
        ngmres.run_experiment("solvers = krylov\n")


def test_bad_arguments_raise():
    p = ngmres.identity(3)
    with pytest.raises(ValueError):
        ngmres.solve(p, "bicgstab")
    with pytest.raises(ValueError):
        ngmres.solve(p, "gmres", x0=np.zeros(2))


def test_acceptance_first_step_criterion():
    (r,) = ngmres.run_acceptance([8])
    assert r["pass"], r["details"]
