"""Numerical tolerances shared across the package."""

import os

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_FLOOR = -1e-9
PARAM_TOL = 1e-12
# "!= 0" clauses of the parametric criteria
NONZERO_TOL = 1e-9

_DEFAULT_MATRIX_TOL = 1e-9


def matrix_tol(tol=None):
    """Resolve the matrix-route tolerance.

    An explicit ``tol`` wins; otherwise ``COBREAK_TOL`` from the environment,
    falling back to 1e-9.
    """
    if tol is not None:
        return float(tol)
    env = os.environ.get("COBREAK_TOL")
    if env:
        try:
            value = float(env)
        except ValueError as exc:
            raise ValueError(f"COBREAK_TOL must be a float, got {env!r}") from exc
        if not value > 0:
            raise ValueError(f"COBREAK_TOL must be positive, got {env!r}")
        return value
    return _DEFAULT_MATRIX_TOL
