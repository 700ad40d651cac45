"""Channel representations and the conversions between them.

Two concrete representations are used throughout:

* :class:`KrausChannel` -- a list of Kraus operators, ``Phi(X) = sum K X K^dag``.
* :class:`AffineRep` -- the action ``b -> M b + n`` on the coordinates of
  :mod:`cobreak.qstate`, with ``M_ij = (1/2) tr(X_i Phi(X_j))`` and
  ``n_i = tr(X_i Phi(I/d))``.

Most functions accept either; :func:`to_affine` converts on demand.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._config import PSD_FLOOR, matrix_tol
from .exceptions import ArgumentError, ConsistencyError, DomainError, ValidationError
from .qstate import from_coherence_vector, gell_mann_basis, to_coherence_vector
from .validation import check_density_matrix, check_real, check_square, check_unitary

__all__ = [
    "KrausChannel",
    "AffineRep",
    "NCFamilyParams",
    "CptpReport",
    "apply",
    "evaluate",
    "nc_family_channel",
    "kraus_to_affine",
    "to_affine",
    "affine_apply",
    "compose",
    "compose_kraus",
    "iterate",
    "choi",
    "validate_cptp",
    "unitary_channel",
    "identity_channel",
    "dephasing_channel",
]


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A channel given by Kraus operators satisfying ``sum K^dag K = I``."""

    kraus: tuple

    def __post_init__(self):
        ops = self.kraus
        if isinstance(ops, np.ndarray) and ops.ndim == 2:
            ops = [ops]
        ops = list(ops)
        if not ops:
            raise ValidationError("kraus: at least one operator is required")
        dim = None
        clean = []
        for i, k in enumerate(ops):
            arr = check_square(k, name=f"kraus[{i}]", dim=dim)
            dim = arr.shape[0]
            arr = arr.copy()
            arr.setflags(write=False)
            clean.append(arr)
        total = sum(k.conj().T @ k for k in clean)
        err = np.max(np.abs(total - np.eye(dim)))
        if err > matrix_tol():
            raise ValidationError(f"kraus: completeness violated (max |sum K^dag K - I| = {err:.3g})")
        object.__setattr__(self, "kraus", tuple(clean))

    @property
    def dim(self):
        return self.kraus[0].shape[0]

    def __len__(self):
        return len(self.kraus)

    def __repr__(self):
        return f"KrausChannel(dim={self.dim}, n_kraus={len(self)})"


@dataclass(frozen=True, eq=False)
class AffineRep:
    """Affine action ``b -> M b + n`` on state coordinates.

    ``checked`` records whether the data came from a validated CPTP source.
    Affine data read from files is marked unchecked until
    :func:`validate_cptp` has been run on it.
    """

    M: np.ndarray
    n: np.ndarray
    checked: bool = True

    def __post_init__(self):
        M = check_real(self.M, "M")
        n = check_real(self.n, "n").ravel()
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValidationError(f"M: expected a square matrix, got shape {M.shape}")
        size = M.shape[0]
        dim = int(round(np.sqrt(size + 1)))
        if dim < 2 or dim * dim - 1 != size:
            raise ValidationError(f"M: size {size} is not d^2 - 1 for any d >= 2")
        if n.shape != (size,):
            raise ValidationError(f"n: expected length {size}, got {n.size}")
        M, n = M.copy(), n.copy()
        M.setflags(write=False)
        n.setflags(write=False)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "n", n)

    @property
    def dim(self):
        return int(round(np.sqrt(self.M.shape[0] + 1)))

    @classmethod
    def identity(cls, dim):
        size = dim * dim - 1
        return cls(np.eye(size), np.zeros(size))

    def __repr__(self):
        return f"AffineRep(dim={self.dim}, checked={self.checked})"


@dataclass(frozen=True)
class NCFamilyParams:
    """Angles selecting a rank-2 non-coherence-generating qubit channel.

    ``family=1`` uses all four angles; ``family=2`` ignores ``eta``.
    """

    family: int
    theta: float
    phi: float
    xi: float
    eta: float = 0.0

    def __post_init__(self):
        if self.family not in (1, 2):
            raise ValidationError(f"family must be 1 or 2, got {self.family!r}")
        for name in ("theta", "phi", "xi", "eta"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))


class CptpReport(NamedTuple):
    cp: bool
    tp: bool
    min_eig: float


def _kraus_action(ch, X):
    return sum(k @ X @ k.conj().T for k in ch.kraus)


def _affine_action(a, X):
    # linear extension of rho -> I/d + (1/2) sum (M b + n)_i X_i to any operator
    dim = a.dim
    basis = gell_mann_basis(dim)
    X = np.asarray(X, dtype=complex)
    tr = np.trace(X)
    v = np.einsum("ij,kji->k", X, basis)
    coeff = tr * a.n + a.M @ v
    return tr * np.eye(dim) / dim + 0.5 * np.einsum("k,kij->ij", coeff, basis)


def evaluate(ch, X):
    """Apply the linear map of ``ch`` to an arbitrary ``d x d`` operator, unvalidated."""
    if isinstance(ch, KrausChannel):
        return _kraus_action(ch, np.asarray(X, dtype=complex))
    if isinstance(ch, AffineRep):
        return _affine_action(ch, X)
    raise ArgumentError(f"expected KrausChannel or AffineRep, got {type(ch).__name__}")


def _check_dims(ch, dim):
    if ch.dim != dim:
        raise ArgumentError(f"dimension mismatch: channel acts on d={ch.dim}, state has d={dim}")


def apply(ch, rho):
    """Apply a channel to a density matrix.

    Kraus channels are applied directly; affine representations go through
    :func:`affine_apply`.
    """
    rho = check_density_matrix(rho)
    _check_dims(ch, rho.shape[0])
    if isinstance(ch, AffineRep):
        return affine_apply(ch, rho)
    out = _kraus_action(ch, rho)
    return (out + out.conj().T) / 2


def identity_channel(dim):
    return KrausChannel([np.eye(dim)])


def dephasing_channel(dim):
    """Complete dephasing as the Kraus set ``{|j><j|}``."""
    ops = []
    for j in range(dim):
        k = np.zeros((dim, dim))
        k[j, j] = 1
        ops.append(k)
    return KrausChannel(ops)


def nc_family_channel(p):
    """Build the two-Kraus qubit channel of an :class:`NCFamilyParams` point."""
    ct, st = np.cos(p.theta), np.sin(p.theta)
    cp, sp = np.cos(p.phi), np.sin(p.phi)
    exi = np.exp(1j * p.xi)
    if p.family == 1:
        eeta = np.exp(1j * p.eta)
        e1 = np.array([[eeta * ct * cp, 0], [-st * sp, exi * cp]])
        e2 = np.array([[st * cp, exi * sp], [np.conj(eeta) * ct * sp, 0]])
    else:
        e1 = np.array([[ct, 0], [0, exi * cp]])
        e2 = np.array([[0, sp], [exi * st, 0]])
    return KrausChannel([e1, e2])


def kraus_to_affine(ch, tol=None):
    """Convert a Kraus channel to its affine representation.

    Raises:
        ConsistencyError: the computed data is not real, or the channel does
            not preserve the trace of the basis elements (a non-CPTP input).
    """
    tol = matrix_tol(tol)
    dim = ch.dim
    basis = gell_mann_basis(dim)
    images = np.array([_kraus_action(ch, x) for x in basis])
    M = 0.5 * np.einsum("iab,jba->ij", basis, images)
    centre = _kraus_action(ch, np.eye(dim) / dim)
    n = np.einsum("iab,ba->i", basis, centre)
    traces = np.einsum("jaa->j", images)
    if np.max(np.abs(traces), initial=0.0) > tol or abs(np.trace(centre) - 1) > tol:
        raise ConsistencyError("transfer matrix first row is not (1, 0): channel is not trace preserving")
    imag = max(np.max(np.abs(M.imag)), np.max(np.abs(n.imag)))
    if imag > tol:
        raise ConsistencyError(f"affine data has imaginary part {imag:.3g}: input is not Hermiticity preserving")
    return AffineRep(M.real, n.real)


def to_affine(ch):
    if isinstance(ch, AffineRep):
        return ch
    if isinstance(ch, KrausChannel):
        return kraus_to_affine(ch)
    raise ArgumentError(f"expected KrausChannel or AffineRep, got {type(ch).__name__}")


def affine_apply(a, rho):
    """Apply ``b -> M b + n`` to a state.

    Raises:
        DomainError: the image is not positive semidefinite, which means the
            affine data does not describe a positive map.
    """
    rho = check_density_matrix(rho)
    _check_dims(a, rho.shape[0])
    b = to_coherence_vector(rho)
    try:
        return from_coherence_vector(a.M @ b + a.n, a.dim)
    except DomainError as exc:
        raise DomainError(f"affine map sends a state outside the state space: {exc}") from exc


def compose(outer, inner):
    """Affine representation of ``outer o inner`` (``inner`` acts first)."""
    outer, inner = to_affine(outer), to_affine(inner)
    if outer.dim != inner.dim:
        raise ArgumentError(f"dimension mismatch: {outer.dim} vs {inner.dim}")
    return AffineRep(
        outer.M @ inner.M,
        outer.M @ inner.n + outer.n,
        checked=outer.checked and inner.checked,
    )


def compose_kraus(outer, inner):
    """Kraus set of ``outer o inner`` from all operator products."""
    if outer.dim != inner.dim:
        raise ArgumentError(f"dimension mismatch: {outer.dim} vs {inner.dim}")
    return KrausChannel([a @ b for a in outer.kraus for b in inner.kraus])


def iterate(a, k):
    """``k``-fold self-composition ``(M^k, (sum_{i<k} M^i) n)``."""
    if int(k) != k or k < 1:
        raise ArgumentError(f"k must be a positive integer, got {k!r}")
    a = to_affine(a)
    size = a.M.shape[0]
    power = np.eye(size)
    partial = np.zeros((size, size))
    for _ in range(int(k)):
        partial += power
        power = power @ a.M
    return AffineRep(power, partial @ a.n, checked=a.checked)


def _matrix_units(dim):
    for j in range(dim):
        for k in range(dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[j, k] = 1
            yield j, k, e


def choi(ch):
    """Choi matrix ``J = sum_jk E_jk (x) Phi(E_jk)`` of shape ``(d^2, d^2)``.

    Affine inputs are lifted to operators by linearity through
    :func:`evaluate`.
    """
    dim = ch.dim
    J = np.zeros((dim * dim, dim * dim), dtype=complex)
    for _, _, e in _matrix_units(dim):
        J += np.kron(e, evaluate(ch, e))
    return J


def validate_cptp(ch, tol=None):
    """Report complete positivity and trace preservation of ``ch``.

    Verdicts are returned, never raised.  ``min_eig`` is the smallest
    eigenvalue of the (Hermitian part of the) Choi matrix.
    """
    tol = matrix_tol(tol)
    J = choi(ch)
    dim = ch.dim
    herm = np.max(np.abs(J - J.conj().T)) <= tol
    min_eig = float(np.linalg.eigvalsh((J + J.conj().T) / 2)[0])
    cp = bool(herm and min_eig >= PSD_FLOOR)
    marginal = np.einsum("jaka->jk", J.reshape(dim, dim, dim, dim))
    tp = bool(np.max(np.abs(marginal - np.eye(dim))) <= tol)
    return CptpReport(cp=cp, tp=tp, min_eig=min_eig)


def unitary_channel(U, tol=None):
    """Single-Kraus channel ``rho -> U rho U^dag``.

    Raises:
        ArgumentError: ``U`` is not unitary within tolerance.
    """
    try:
        U = check_unitary(U, tol=tol)
    except ValidationError as exc:
        raise ArgumentError(str(exc)) from exc
    return KrausChannel([U])
