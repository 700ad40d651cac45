"""Incoherence, coherence breaking and the coherence-breaking index.

Two independent routes decide whether a channel is coherence breaking:

* :func:`is_cbc_structural` reads the zero pattern of the affine data: the
  rows of ``M`` and entries of ``n`` indexed by off-diagonal basis elements
  must all vanish.
* :func:`is_cbc_oracle` evaluates the channel on a spanning set of probe
  states and checks every output is diagonal in the computational basis.

The parametric criteria for the two qubit families (``family*_cbc`` and
``family*_index2``) need no channel at all and are checked against the
matrix routes in the test-suite.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from ._config import NONZERO_TOL, PARAM_TOL, matrix_tol
from .exceptions import ArgumentError
from .qchannel import AffineRep, KrausChannel, NCFamilyParams, evaluate, to_affine
from .qstate import _offdiag_l1, offdiagonal_count, probe_states

__all__ = [
    "EXCEEDS_CAP",
    "Witness",
    "CbcVerdict",
    "IndexResult",
    "is_incoherent_kraus",
    "is_nc",
    "is_cbc_structural",
    "is_cbc_oracle",
    "best_witness",
    "cbc_index",
    "family1_cbc",
    "family2_cbc",
    "family1_index2",
    "family2_index2",
    "family2_index2_case",
]

EXCEEDS_CAP = "exceeds_cap"
DEFAULT_CAP = 16


@dataclass(frozen=True)
class Witness:
    """An input state together with the l1 coherence of its image."""

    state: np.ndarray = field(repr=False)
    coherence: float


@dataclass(frozen=True)
class CbcVerdict:
    is_cbc: bool
    route: str
    witness: Witness = None

    def __bool__(self):
        return self.is_cbc


@dataclass(frozen=True)
class IndexResult:
    """Outcome of :func:`cbc_index`.

    ``trail[k - 1]`` is the structural verdict for the ``k``-th iterate, for
    ``k = 1 .. cap``.
    """

    index: object
    cap: int
    trail: list

    @property
    def finite(self):
        return self.index != EXCEEDS_CAP


def is_incoherent_kraus(ch, tol=None):
    """True iff every column of every Kraus operator has at most one nonzero entry.

    Only the supplied decomposition is examined.
    """
    tol = matrix_tol(tol)
    for k in ch.kraus:
        if np.any(np.sum(np.abs(k) > tol, axis=0) > 1):
            return False
    return True


def is_nc(a, tol=None):
    """True iff diagonal inputs are mapped to diagonal outputs."""
    a = to_affine(a)
    tol = matrix_tol(tol)
    off = offdiagonal_count(a.dim)
    return bool(
        np.all(np.abs(a.M[:off, off:]) <= tol) and np.all(np.abs(a.n[:off]) <= tol)
    )


def best_witness(ch, tol=None):
    """Probe state whose image has the largest l1 coherence.

    Returns ``None`` when every probe image is diagonal within tolerance.
    """
    tol = matrix_tol(tol)
    best = None
    for rho in probe_states(ch.dim):
        value = _offdiag_l1(evaluate(ch, rho))
        if best is None or value > best.coherence:
            best = Witness(state=np.array(rho), coherence=value)
    if best is None or best.coherence <= tol:
        return None
    return best


def _structural_zero(a, tol):
    off = offdiagonal_count(a.dim)
    return bool(np.all(np.abs(a.M[:off]) <= tol) and np.all(np.abs(a.n[:off]) <= tol))


def is_cbc_structural(a, tol=None):
    """Decide coherence breaking from the zero pattern of ``(M, n)``.

    The leading ``d^2 - d`` rows of ``M`` and entries of ``n`` (the
    off-diagonal coordinates of the image) must all vanish.
    """
    a = to_affine(a)
    cbc = _structural_zero(a, matrix_tol(tol))
    witness = None if cbc else best_witness(a, tol=0.0)
    return CbcVerdict(is_cbc=cbc, route="structural", witness=witness)


def is_cbc_oracle(ch, tol=None):
    """Decide coherence breaking by evaluating the channel on probe states.

    The probes span the operator space, so by linearity every output is
    diagonal iff every probe output is.  Works for Kraus and affine inputs
    and never inspects the block structure of ``M``.
    """
    if not isinstance(ch, (KrausChannel, AffineRep)):
        raise ArgumentError(f"expected KrausChannel or AffineRep, got {type(ch).__name__}")
    witness = best_witness(ch, tol=tol)
    return CbcVerdict(is_cbc=witness is None, route="oracle", witness=witness)


def cbc_index(a, cap=DEFAULT_CAP, tol=None):
    """Smallest ``k <= cap`` with the ``k``-th iterate coherence breaking.

    The full trail up to ``cap`` is always computed.  A warning is emitted
    when the channel is not non-coherence-generating, because the index is
    only defined for incoherent channels; the value is still returned.
    """
    if int(cap) != cap or cap < 1:
        raise ArgumentError(f"cap must be a positive integer, got {cap!r}")
    a = to_affine(a)
    if not is_nc(a, tol=tol):
        warnings.warn(
            "channel is not non-coherence-generating; the coherence-breaking index is only defined for incoherent channels",
            RuntimeWarning,
            stacklevel=2,
        )
    tol = matrix_tol(tol)
    trail = []
    index = EXCEEDS_CAP
    power = a
    for k in range(1, int(cap) + 1):
        if k > 1:
            power = AffineRep(a.M @ power.M, a.M @ power.n + a.n)
        verdict = _structural_zero(power, tol)
        trail.append(verdict)
        if verdict and index == EXCEEDS_CAP:
            index = k
    return IndexResult(index=index, cap=int(cap), trail=trail)


def _require_family(p, family):
    if not isinstance(p, NCFamilyParams) or p.family != family:
        got = getattr(p, "family", type(p).__name__)
        raise ArgumentError(f"criterion applies to family {family} only, got {got}")


def _zero(x):
    return bool(abs(x) <= PARAM_TOL)


def _nonzero(x):
    return bool(abs(x) > NONZERO_TOL)


def family1_cbc(p):
    """Family-1 channel is coherence breaking iff ``cos(theta) = 0``."""
    _require_family(p, 1)
    return _zero(np.cos(p.theta))


def family2_cbc(p):
    """Family-2 channel is coherence breaking iff ``sin(theta) = cos(phi) = 0`` or ``cos(theta) = sin(phi) = 0``."""
    _require_family(p, 2)
    return (_zero(np.sin(p.theta)) and _zero(np.cos(p.phi))) or (
        _zero(np.cos(p.theta)) and _zero(np.sin(p.phi))
    )


def family1_index2(p):
    """Closed-form test for index 2 in family 1.

    ``cos(2 phi) = 0``, ``sin(theta) = 0`` and
    ``sin(xi) sin(eta) + cos(xi) cos(eta) = 0``.
    """
    _require_family(p, 1)
    return (
        _zero(np.cos(2 * p.phi))
        and _zero(np.sin(p.theta))
        and _zero(np.sin(p.xi) * np.sin(p.eta) + np.cos(p.xi) * np.cos(p.eta))
    )


def family2_index2_case(p):
    """Which of the three published index-2 cases holds for a family-2 point.

    Returns ``"i"``, ``"ii"``, ``"iii"`` or ``None``.  Case ``"i"`` is
    reported as published; the matrix routes show those points never become
    coherence breaking (see README, "Known discrepancies").
    """
    _require_family(p, 2)
    cplus = np.cos(p.theta + p.phi)
    cminus = np.cos(p.theta - p.phi)
    if _zero(np.cos(2 * p.xi)) and _zero(cplus - cminus) and _nonzero(cminus):
        return "i"
    if _zero(cminus) and _zero(np.cos(p.xi)) and _nonzero(cplus):
        return "ii"
    if _zero(cplus) and _zero(np.cos(p.xi)) and _nonzero(cminus):
        return "iii"
    return None


def family2_index2(p):
    """True iff one of the published index-2 cases holds (see :func:`family2_index2_case`)."""
    return family2_index2_case(p) is not None
