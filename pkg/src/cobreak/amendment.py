"""Unitary amendment of coherence-breaking channels.

A coherence-breaking channel ``Phi`` is *amended* by a unitary channel
``L`` when a composite built from them is no longer coherence breaking.
Four strategies are provided:

``post``
    ``L o Phi`` for a coherence-breaking ``Phi``.
``interleaved``
    ``Phi o L o Phi`` for a channel of index 2.
``interleaved_general``
    ``Phi o L o Phi o ... o L o Phi`` with ``depth`` copies of ``Phi`` and the
    same ``L`` in every slot.  Exploratory: no success guarantee exists.
``post_square``
    ``L o Phi^2``, mostly useful to exhibit channels that *cannot* be
    amended this way.

Every reported success has been re-checked with
:func:`cobreak.analysis.is_cbc_oracle` on the composed channel.
"""

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._config import matrix_tol
from .analysis import EXCEEDS_CAP, Witness, _structural_zero, cbc_index, is_cbc_oracle, is_cbc_structural
from .exceptions import ArgumentError, ConsistencyError, PreconditionError
from .qchannel import compose, iterate, kraus_to_affine, to_affine, unitary_channel
from .qstate import random_unitary

__all__ = [
    "UnitaryParams",
    "BlockRotationPlan",
    "AmendmentResult",
    "general_unitary",
    "transfer_matrix_of_unitary",
    "transfer_matrix_closed_form",
    "block_rotation_unitary",
    "unitary_affine",
    "rotation_angles",
    "phase_angles",
    "unitary_param_grid",
    "block_rotation_plans",
    "post_search_grid",
    "interleaved_search_grid",
    "interleave",
    "amend_post",
    "amend_search_post",
    "amend_interleaved",
    "amend_search_interleaved",
    "impossibility_post_square",
    "STRATEGIES",
]

STRATEGIES = ("post", "interleaved", "post_square", "interleaved_general")

_CONSTRAINT_TOL = 1e-9


def _wrap(angle):
    return (angle + np.pi) % (2 * np.pi) - np.pi


@dataclass(frozen=True)
class UnitaryParams:
    """Angles of the qubit unitary ``[[c, -e^{i a1} s], [e^{i a2} s, e^{i a3} c]]``.

    ``c = cos(alpha)``, ``s = sin(alpha)``.  The matrix is unitary only when
    ``a3 = a1 + a2 (mod 2 pi)`` or ``sin(2 alpha) = 0``; construction fails
    otherwise.
    """

    alpha: float
    alpha1: float = 0.0
    alpha2: float = 0.0
    alpha3: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "alpha1", "alpha2", "alpha3"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ArgumentError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if abs(np.sin(2 * self.alpha)) > _CONSTRAINT_TOL:
            gap = _wrap(self.alpha3 - self.alpha1 - self.alpha2)
            if abs(gap) > _CONSTRAINT_TOL:
                raise ArgumentError(
                    "matrix is not unitary: with sin(2 alpha) != 0 the off-diagonal "
                    "entry of U^dag U is sin(alpha)cos(alpha)(e^{i(alpha3-alpha2)} - e^{i alpha1}), "
                    f"so alpha3 must equal alpha1 + alpha2 (mod 2 pi); off by {gap:.3g}"
                )

    @classmethod
    def constrained(cls, alpha, alpha1=0.0, alpha2=0.0):
        return cls(alpha, alpha1, alpha2, alpha1 + alpha2)


@dataclass(frozen=True)
class BlockRotationPlan:
    """Block-diagonal real rotation: a 2x2 rotation by ``alpha`` on each pair.

    Use :meth:`default` / :meth:`shifted` for the standard layouts.
    """

    dim: int
    alpha: float
    pairing: tuple
    fixed_indices: tuple = ()

    def __post_init__(self):
        pairing = tuple(tuple(int(i) for i in pair) for pair in self.pairing)
        fixed = tuple(int(i) for i in self.fixed_indices)
        object.__setattr__(self, "pairing", pairing)
        object.__setattr__(self, "fixed_indices", fixed)
        if int(self.dim) != self.dim or self.dim < 2:
            raise ArgumentError(f"dim must be an integer >= 2, got {self.dim!r}")
        seen = []
        for pair in pairing:
            if len(pair) != 2 or pair[0] == pair[1]:
                raise ArgumentError(f"invalid pair {pair}")
            seen.extend(pair)
        seen.extend(fixed)
        if sorted(seen) != list(range(self.dim)):
            raise ArgumentError(
                f"pairs {pairing} and fixed indices {fixed} must partition 0..{self.dim - 1}"
            )

    @classmethod
    def default(cls, dim, alpha):
        """Pairs ``(0,1), (2,3), ...``; for odd ``d`` index 0 is left fixed."""
        start = dim % 2
        pairs = tuple((j, j + 1) for j in range(start, dim - 1, 2))
        return cls(dim, alpha, pairs, tuple(range(start)))

    @classmethod
    def shifted(cls, dim, alpha):
        """The complementary adjacent pairing: ``(1,2), (3,4), ...`` for even ``d``, ``(0,1), ...`` for odd."""
        if dim < 3:
            raise ArgumentError("a shifted pairing needs dim >= 3")
        if dim % 2 == 0:
            pairs = tuple((j, j + 1) for j in range(1, dim - 2, 2))
            return cls(dim, alpha, pairs, (0, dim - 1))
        pairs = tuple((j, j + 1) for j in range(0, dim - 1, 2))
        return cls(dim, alpha, pairs, (dim - 1,))


@dataclass
class AmendmentResult:
    strategy: str
    params: object
    success: bool
    witness: Witness = None
    scanned: int = 0
    unitary: np.ndarray = field(default=None, repr=False)
    certificate: str = None


def general_unitary(p):
    """Qubit unitary for :class:`UnitaryParams` ``p``."""
    c, s = np.cos(p.alpha), np.sin(p.alpha)
    return np.array(
        [
            [c, -np.exp(1j * p.alpha1) * s],
            [np.exp(1j * p.alpha2) * s, np.exp(1j * p.alpha3) * c],
        ]
    )


def block_rotation_unitary(plan):
    U = np.eye(plan.dim)
    c, s = np.cos(plan.alpha), np.sin(plan.alpha)
    for j, k in plan.pairing:
        U[j, j] = U[k, k] = c
        U[j, k] = -s
        U[k, j] = s
    return U


def _as_unitary(u):
    if isinstance(u, UnitaryParams):
        return general_unitary(u)
    if isinstance(u, BlockRotationPlan):
        return block_rotation_unitary(u)
    return np.asarray(u, dtype=complex)


def unitary_affine(u):
    """Affine representation of ``rho -> U rho U^dag``."""
    return kraus_to_affine(unitary_channel(_as_unitary(u)))


def transfer_matrix_of_unitary(p):
    """``N_ij = (1/2) tr(X_i U X_j U^dag)`` for unitary parameters or a matrix."""
    return unitary_affine(p).M


def transfer_matrix_closed_form(p):
    """Closed-form qubit rotation entries, valid when ``alpha3 = alpha1 + alpha2``."""
    a, a1, a2, a3 = p.alpha, p.alpha1, p.alpha2, p.alpha3
    c2, s2, sin2 = np.cos(a) ** 2, np.sin(a) ** 2, np.sin(2 * a)
    return np.array(
        [
            [c2 * np.cos(a3) - s2 * np.cos(a1 - a2), s2 * np.sin(a1 - a2) - c2 * np.sin(a3), sin2 * np.cos(a2)],
            [c2 * np.sin(a3) + s2 * np.sin(a1 - a2), s2 * np.cos(a1 - a2) + c2 * np.cos(a3), sin2 * np.sin(a2)],
            [-sin2 * np.cos(a1), sin2 * np.sin(a1), np.cos(2 * a)],
        ]
    )


# -- grids -------------------------------------------------------------------

def rotation_angles(grid_size, skip_degenerate=True):
    """``alpha_k = k pi / N`` for ``k = 1..N``; by default drops angles with ``sin(2 alpha) = 0``."""
    if int(grid_size) != grid_size or grid_size < 1:
        raise ArgumentError(f"grid_size must be a positive integer, got {grid_size!r}")
    angles = [k * np.pi / grid_size for k in range(1, int(grid_size) + 1)]
    if skip_degenerate:
        angles = [a for a in angles if abs(np.sin(2 * a)) > _CONSTRAINT_TOL]
    return angles


def phase_angles(grid_size):
    """``2 pi m / N`` for ``m = 0..N-1``."""
    if int(grid_size) != grid_size or grid_size < 1:
        raise ArgumentError(f"grid_size must be a positive integer, got {grid_size!r}")
    return [2 * np.pi * m / grid_size for m in range(int(grid_size))]


def unitary_param_grid(grid_size, mixing_only=False):
    """Qubit unitaries on an ``alpha x alpha1 x alpha2`` grid with ``alpha3 = alpha1 + alpha2``.

    ``alpha`` runs over ``k pi / N`` for ``k = 0..N-1``; with
    ``mixing_only`` the points with ``sin(2 alpha) = 0`` are dropped.
    """
    alphas = [k * np.pi / grid_size for k in range(int(grid_size))]
    if mixing_only:
        alphas = [a for a in alphas if abs(np.sin(2 * a)) > _CONSTRAINT_TOL]
    phases = phase_angles(grid_size)
    return [
        UnitaryParams.constrained(a, a1, a2)
        for a, a1, a2 in itertools.product(alphas, phases, phases)
    ]


def block_rotation_plans(dim, alpha):
    plans = [BlockRotationPlan.default(dim, alpha)]
    if dim > 2:
        plans.append(BlockRotationPlan.shifted(dim, alpha))
    return plans


def post_search_grid(dim, grid_size):
    """Candidates scanned by :func:`amend_search_post`, in scan order."""
    angles = rotation_angles(grid_size)
    grid = []
    for layout in range(1 if dim == 2 else 2):
        for alpha in angles:
            grid.append(block_rotation_plans(dim, alpha)[layout])
    if dim == 2:
        grid.extend(unitary_param_grid(grid_size, mixing_only=True))
    return grid


def interleaved_search_grid(dim, grid_size):
    """Candidates scanned by :func:`amend_search_interleaved`, in scan order."""
    if dim == 2:
        return unitary_param_grid(grid_size)
    angles = rotation_angles(grid_size, skip_degenerate=False)
    return [plan for alpha in angles for plan in block_rotation_plans(dim, alpha)]


# -- strategies ----------------------------------------------------------------

def interleave(a, lam, depth):
    """``Phi o L o Phi o ... o L o Phi`` with ``depth`` copies of ``Phi``."""
    if int(depth) != depth or depth < 1:
        raise ArgumentError(f"depth must be a positive integer, got {depth!r}")
    out = a
    for _ in range(int(depth) - 1):
        out = compose(a, compose(lam, out))
    return out


def _verified(composite):
    """Oracle verdict on ``composite``, cross-checked with the structural route."""
    oracle = is_cbc_oracle(composite)
    if oracle.is_cbc != is_cbc_structural(composite).is_cbc:
        raise ConsistencyError("structural and oracle routes disagree on an amended channel")
    return oracle


def _require_cbc(a):
    if not is_cbc_structural(a).is_cbc:
        raise PreconditionError("channel is not coherence breaking: nothing to amend")


def _result(strategy, params, U, verdict, scanned):
    return AmendmentResult(
        strategy=strategy,
        params=params,
        success=not verdict.is_cbc,
        witness=verdict.witness,
        scanned=scanned,
        unitary=np.asarray(U, dtype=complex),
    )


def _scan(strategy, grid, build):
    tol = matrix_tol()
    last = None
    for count, params in enumerate(grid, start=1):
        U = _as_unitary(params)
        composite = build(unitary_affine(U))
        # cheap structural screen; a success is then re-verified by the oracle
        if _structural_zero(composite, tol):
            last = (params, U)
            continue
        return _result(strategy, params, U, _verified(composite), count)
    params, U = last if last else (None, None)
    return AmendmentResult(
        strategy=strategy,
        params=params,
        success=False,
        scanned=len(grid),
        unitary=None if U is None else np.asarray(U, dtype=complex),
    )


def amend_post(ch, U):
    """Test whether ``L_U o Phi`` is no longer coherence breaking.

    Args:
        ch: a coherence-breaking channel (Kraus or affine).
        U: unitary matrix, :class:`UnitaryParams` or :class:`BlockRotationPlan`.

    Raises:
        PreconditionError: ``ch`` is not coherence breaking.
    """
    a = to_affine(ch)
    _require_cbc(a)
    matrix = _as_unitary(U)
    composite = compose(unitary_affine(matrix), a)
    return _result("post", U, matrix, _verified(composite), 1)


def amend_search_post(ch, grid_size=8):
    """Scan block rotations (and, for qubits, general unitaries) for a post-amendment.

    Returns the first success in :func:`post_search_grid` order, or a
    failure carrying the number of candidates scanned.
    """
    a = to_affine(ch)
    _require_cbc(a)
    grid = post_search_grid(a.dim, grid_size)
    return _scan("post", grid, lambda lam: compose(lam, a))


def _warn_index(a, depth):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        index = cbc_index(a, cap=max(16, depth)).index
    if index != depth:
        shown = "beyond the search cap" if index == EXCEEDS_CAP else index
        warnings.warn(
            f"interleaving {depth} copies is meant for channels of index {depth}; this one has index {shown}",
            RuntimeWarning,
            stacklevel=3,
        )
    return index


def amend_interleaved(ch, U, depth=2):
    """Test whether ``Phi o L_U o Phi`` (or the ``depth``-fold pattern) is not coherence breaking."""
    a = to_affine(ch)
    if int(depth) != depth or depth < 2:
        raise ArgumentError(f"depth must be an integer >= 2, got {depth!r}")
    _warn_index(a, depth)
    matrix = _as_unitary(U)
    composite = interleave(a, unitary_affine(matrix), depth)
    strategy = "interleaved" if depth == 2 else "interleaved_general"
    return _result(strategy, U, matrix, _verified(composite), 1)


def amend_search_interleaved(ch, grid_size=8, depth=2, grid=None):
    """Scan interleaved composites with the same unitary in every slot.

    Args:
        ch: channel to amend; ideally of index ``depth``.
        grid_size: resolution of the default grid.
        depth: number of copies of the channel.
        grid: explicit candidate list overriding :func:`interleaved_search_grid`.
    """
    a = to_affine(ch)
    if int(depth) != depth or depth < 2:
        raise ArgumentError(f"depth must be an integer >= 2, got {depth!r}")
    _warn_index(a, depth)
    if grid is None:
        grid = interleaved_search_grid(a.dim, grid_size)
    grid = list(grid)
    strategy = "interleaved" if depth == 2 else "interleaved_general"
    return _scan(strategy, grid, lambda lam: interleave(a, lam, depth))


def _is_zero(a, tol=1e-9):
    return np.max(np.abs(a.M), initial=0.0) <= tol and np.max(np.abs(a.n), initial=0.0) <= tol


def impossibility_post_square(ch, samples=64, seed=0, grid_size=8, short_circuit=False):
    """Look for a unitary ``L`` making ``L o Phi^2`` non coherence breaking.

    The structured grid of :func:`post_search_grid` is scanned first, then
    ``samples`` seeded Haar-random unitaries.  When ``Phi^2`` is the
    completely depolarizing map an analytic certificate is attached: its
    output is always ``I/d``, which every unitary fixes.  The scan still runs
    unless ``short_circuit`` is set, so ``scanned`` reflects the evidence.

    Raises:
        PreconditionError: ``Phi^2`` is not coherence breaking.
    """
    a = to_affine(ch)
    square = iterate(a, 2)
    if not is_cbc_structural(square).is_cbc:
        raise PreconditionError("the squared channel is not coherence breaking: nothing to amend")
    certificate = None
    if _is_zero(square):
        certificate = (
            f"image is I/{a.dim}: the squared channel outputs the maximally mixed state "
            "for every input, and unitary conjugation leaves it fixed"
        )
        if short_circuit:
            return AmendmentResult("post_square", None, False, scanned=0, certificate=certificate)
    rng = np.random.default_rng(seed)
    grid = post_search_grid(a.dim, grid_size)
    grid += [random_unitary(a.dim, rng) for _ in range(int(samples))]
    result = _scan("post_square", grid, lambda lam: compose(lam, square))
    if result.success and certificate is not None:
        raise ConsistencyError("amendment found despite a depolarizing certificate")
    result.certificate = certificate
    return result
