"""Density matrices, l1 coherence and the generalized Gell-Mann coordinates.

States are plain ``numpy`` arrays; every public function validates its input
with :func:`cobreak.validation.check_density_matrix`.

Coordinates follow ``rho = I/d + (1/2) * sum_i b_i X_i`` with
``b_i = tr(rho X_i)``.  The basis ``X`` is ordered as all symmetric /
antisymmetric pairs ``(sigma_s^{jk}, sigma_a^{jk})`` for ``j < k`` in
lexicographic order, followed by the diagonal elements ``sigma^1 ..
sigma^{d-1}``.  For ``d = 2`` this is ``(sigma_x, sigma_y, sigma_z)`` and the
coordinates are the usual Bloch vector.
"""

from functools import lru_cache

import numpy as np

from ._config import PSD_FLOOR
from .exceptions import ArgumentError, DomainError, ValidationError
from .validation import check_density_matrix

__all__ = [
    "gell_mann_basis",
    "offdiagonal_count",
    "c_l1",
    "dephase",
    "to_coherence_vector",
    "from_coherence_vector",
    "random_state",
    "random_unitary",
    "probe_states",
]


@lru_cache(maxsize=None)
def _basis(dim):
    mats = []
    for j in range(dim - 1):
        for k in range(j + 1, dim):
            s = np.zeros((dim, dim), dtype=complex)
            s[j, k] = s[k, j] = 1
            a = np.zeros((dim, dim), dtype=complex)
            a[j, k] = -1j
            a[k, j] = 1j
            mats += [s, a]
    for l in range(1, dim):
        diag = np.zeros(dim)
        diag[:l] = 1
        diag[l] = -l
        mats.append(np.diag(np.sqrt(2 / (l * (l + 1))) * diag).astype(complex))
    basis = np.array(mats).reshape(dim * dim - 1, dim, dim)
    basis.setflags(write=False)
    return basis


def gell_mann_basis(dim):
    """Return the ``(d^2 - 1, d, d)`` stack of traceless Hermitian basis elements.

    Elements satisfy ``tr(X_i X_j) = 2 delta_ij``.  The returned array is
    read-only and shared between calls.
    """
    if int(dim) != dim or dim < 2:
        raise ArgumentError(f"dim must be an integer >= 2, got {dim!r}")
    return _basis(int(dim))


def offdiagonal_count(dim):
    """Number of leading coordinates that carry coherence, ``d^2 - d``."""
    return dim * dim - dim


def c_l1(rho):
    """l1 norm of coherence: sum of magnitudes of all off-diagonal entries."""
    return _offdiag_l1(check_density_matrix(rho))


def _offdiag_l1(mat):
    # unvalidated variant used on raw channel outputs
    mat = np.asarray(mat)
    return float(np.sum(np.abs(mat[~np.eye(mat.shape[0], dtype=bool)])))


def dephase(rho):
    """Completely dephase ``rho``: keep the diagonal, zero everything else."""
    rho = check_density_matrix(rho)
    return np.diag(np.diag(rho))


def to_coherence_vector(rho):
    """Coordinates ``b_i = tr(rho X_i)`` of a state, as a real vector of length ``d^2 - 1``."""
    rho = check_density_matrix(rho)
    basis = gell_mann_basis(rho.shape[0])
    return np.einsum("ij,kji->k", rho, basis).real


def _reconstruct(b, dim):
    basis = gell_mann_basis(dim)
    return np.eye(dim, dtype=complex) / dim + 0.5 * np.einsum("k,kij->ij", b, basis)


def from_coherence_vector(b, dim=None):
    """Rebuild the density matrix with coordinates ``b``.

    Args:
        b: real vector of length ``d^2 - 1``.
        dim: optional dimension; inferred from ``len(b)`` when omitted.

    Raises:
        ValidationError: wrong length or non-real input.
        DomainError: the reconstructed matrix is not positive semidefinite.
    """
    b = np.asarray(b)
    if np.iscomplexobj(b):
        if np.max(np.abs(b.imag), initial=0.0) > 1e-9:
            raise ValidationError("coherence vector must be real")
        b = b.real
    b = b.astype(float).ravel()
    if dim is None:
        dim = int(round(np.sqrt(b.size + 1)))
    if b.size != dim * dim - 1:
        raise ValidationError(f"coherence vector of length {b.size} does not match d={dim}")
    rho = _reconstruct(b, dim)
    min_eig = np.linalg.eigvalsh(rho)[0]
    if min_eig < PSD_FLOOR:
        raise DomainError(
            f"coordinates do not describe a state (min eigenvalue {min_eig:.3g})"
        )
    return rho


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unitary(dim, seed=None):
    """Haar-random unitary via QR of a complex Gaussian matrix with phase fixing."""
    if int(dim) != dim or dim < 1:
        raise ArgumentError(f"dim must be a positive integer, got {dim!r}")
    rng = _rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_state(dim, seed=None, kind="mixed"):
    """Sample a density matrix deterministically from ``seed``.

    ``kind="pure"`` normalizes a complex Gaussian vector.  ``kind="mixed"``
    draws a spectrum uniformly from the simplex and conjugates it with a
    Haar-random unitary.

    ``seed`` may also be a ``numpy.random.Generator`` so callers can draw
    many states from one stream.
    """
    if int(dim) != dim or dim < 2:
        raise ArgumentError(f"dim must be an integer >= 2, got {dim!r}")
    dim = int(dim)
    rng = _rng(seed)
    if kind == "pure":
        psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        psi /= np.linalg.norm(psi)
        rho = np.outer(psi, psi.conj())
    elif kind == "mixed":
        spectrum = rng.dirichlet(np.ones(dim))
        u = random_unitary(dim, rng)
        rho = (u * spectrum) @ u.conj().T
    else:
        raise ArgumentError(f"kind must be 'pure' or 'mixed', got {kind!r}")
    return (rho + rho.conj().T) / 2


@lru_cache(maxsize=None)
def _probes(dim):
    states = []
    for j in range(dim):
        e = np.zeros((dim, dim), dtype=complex)
        e[j, j] = 1
        states.append(e)
    for j in range(dim - 1):
        for k in range(j + 1, dim):
            for phase in (1, 1j):
                psi = np.zeros(dim, dtype=complex)
                psi[j] = 1 / np.sqrt(2)
                psi[k] = phase / np.sqrt(2)
                states.append(np.outer(psi, psi.conj()))
    out = np.array(states)
    out.setflags(write=False)
    return out


def probe_states(dim):
    """States spanning the operator space: ``|j><j|`` then ``|j>+|k>``, ``|j>+i|k>`` for ``j < k``.

    Every matrix unit is a linear combination of these, so a linear map that
    sends all of them to diagonal matrices sends every operator to a diagonal
    matrix.
    """
    if int(dim) != dim or dim < 2:
        raise ArgumentError(f"dim must be an integer >= 2, got {dim!r}")
    return _probes(int(dim))
