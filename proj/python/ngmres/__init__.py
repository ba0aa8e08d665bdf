"""Nonlinear GMRES, GMRES and Anderson acceleration on linear systems.

Thin layer over the compiled ``_core`` module. Vectors are NumPy arrays,
problem matrices are ``scipy.sparse`` CSR matrices.
"""

import numpy as np
import scipy.sparse as sp

from ._core import (
    ConfigError,
    NumericalError,
    Problem,
    Trace,
    bounds,
    check_gmres_equivalence,
    check_stored_run,
    compare_traces,
    convection_diffusion,
    criterion_count,
    criterion_title,
    cyclic_shift,
    identity,
    random_dense,
    random_guess,
    random_positive_real,
    run_criterion,
    run_experiment,
    shifted_skew,
    solve,
)

__all__ = [
    "ConfigError",
    "NumericalError",
    "Problem",
    "Trace",
    "bounds",
    "check_gmres_equivalence",
    "check_stored_run",
    "compare_traces",
    "convection_diffusion",
    "criterion_count",
    "criterion_title",
    "cyclic_shift",
    "from_matrix",
    "identity",
    "random_dense",
    "random_guess",
    "random_positive_real",
    "run_acceptance",
    "run_criterion",
    "run_experiment",
    "shifted_skew",
    "solve",
]


def from_matrix(a, b=None, symmetry="general", label="user"):
    """Problem from a dense or sparse matrix; b defaults to A @ ones."""
    a = sp.csr_matrix(a, dtype=float)
    if b is None:
        b = a @ np.ones(a.shape[0])
    return Problem(a, np.asarray(b, dtype=float), symmetry, label)


def run_acceptance(only=None):
    """Runs the acceptance criteria (all by default); returns one dict per criterion."""
    ids = only if only is not None else range(1, criterion_count + 1)
    return [run_criterion(i) for i in ids]
