"""Input validation helpers.

These mirror the ``check_array`` family: each takes array-like input,
verifies an invariant, and returns a clean ``numpy`` array or raises
:class:`~cobreak.exceptions.ValidationError` naming what failed.
"""

import numpy as np

from ._config import HERMITIAN_TOL, PSD_FLOOR, TRACE_TOL, matrix_tol
from .exceptions import ValidationError


def check_square(a, name="matrix", dim=None):
    """Return ``a`` as a complex 2-D square array."""
    try:
        arr = np.asarray(a, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name}: not numeric ({exc})") from exc
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{name}: expected a square matrix, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ValidationError(f"{name}: expected dimension {dim}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name}: contains non-finite entries")
    return arr


def check_density_matrix(rho, dim=None, name="rho"):
    """Validate a density matrix and return it as a complex array.

    Checks, in order: square shape, hermiticity (1e-10), unit trace (1e-10)
    and positive semidefiniteness (smallest eigenvalue >= -1e-9).
    """
    arr = check_square(rho, name=name, dim=dim)
    if arr.shape[0] < 1:
        raise ValidationError(f"{name}: empty matrix")
    herm_err = np.max(np.abs(arr - arr.conj().T))
    if herm_err > HERMITIAN_TOL:
        raise ValidationError(f"{name}: not Hermitian (max deviation {herm_err:.3g})")
    trace_err = abs(np.trace(arr) - 1)
    if trace_err > TRACE_TOL:
        raise ValidationError(f"{name}: trace is not 1 (deviation {trace_err:.3g})")
    min_eig = np.linalg.eigvalsh((arr + arr.conj().T) / 2)[0]
    if min_eig < PSD_FLOOR:
        raise ValidationError(f"{name}: not positive semidefinite (min eigenvalue {min_eig:.3g})")
    return arr


def check_density_matrices(X, dim=None):
    """Validate a batch of density matrices.

    Accepts a single ``(d, d)`` matrix or a stack ``(n, d, d)`` and always
    returns the stacked form.
    """
    arr = np.asarray(X, dtype=complex)
    if arr.ndim == 2:
        arr = arr[np.newaxis]
    if arr.ndim != 3:
        raise ValidationError(f"X: expected shape (n, d, d), got {arr.shape}")
    for i, rho in enumerate(arr):
        check_density_matrix(rho, dim=dim, name=f"X[{i}]")
    return arr


def check_unitary(U, tol=None, name="U"):
    """Validate ``U^dagger U = I`` entrywise within the matrix tolerance."""
    arr = check_square(U, name=name)
    err = np.max(np.abs(arr.conj().T @ arr - np.eye(arr.shape[0])))
    if err > matrix_tol(tol):
        raise ValidationError(f"{name}: not unitary (max |U^dag U - I| = {err:.3g})")
    return arr


def check_real(a, name, tol=None):
    """Return the real part of ``a`` after checking the imaginary part is negligible."""
    arr = np.asarray(a)
    if np.iscomplexobj(arr):
        imag = np.max(np.abs(arr.imag), initial=0.0)
        if imag > matrix_tol(tol):
            raise ValidationError(f"{name}: imaginary part {imag:.3g} exceeds tolerance")
        arr = arr.real
    try:
        arr = np.asarray(arr, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name}: not numeric ({exc})") from exc
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name}: contains non-finite entries")
    return arr
