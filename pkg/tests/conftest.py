import numpy as np
import pytest

from cobreak.qchannel import AffineRep, KrausChannel, NCFamilyParams, nc_family_channel
from cobreak.qstate import random_unitary

ACCEPTANCE_RESULTS = {}


@pytest.fixture
def z_contraction():
    return AffineRep(np.diag([0.0, 0.0, 0.5]), np.zeros(3))


@pytest.fixture
def nilpotent():
    M = np.zeros((3, 3))
    M[0, 1] = 0.8
    return AffineRep(M, np.zeros(3))


@pytest.fixture
def depolarizing():
    return AffineRep(np.zeros((3, 3)), np.zeros(3))


def random_incoherent_kraus(dim, rng, n_kraus=None):
    """Incoherent Kraus set: permutation-like operators plus single-entry ones.

    Column ``j`` spreads unit weight over ``n_kraus`` operators that move it to
    distinct rows, and one extra operator ``|r_j><j|`` that may collide.
    """
    n_kraus = n_kraus or int(rng.integers(1, 4))
    weights = rng.dirichlet(np.ones(n_kraus + 1), size=dim)  # weights[j, i]
    phases = np.exp(2j * np.pi * rng.random((dim, n_kraus + 1)))
    coeffs = np.sqrt(weights) * phases
    ops = []
    for i in range(n_kraus):
        k = np.zeros((dim, dim), dtype=complex)
        k[rng.permutation(dim), np.arange(dim)] = coeffs[:, i]
        ops.append(k)
    for j in range(dim):
        k = np.zeros((dim, dim), dtype=complex)
        k[rng.integers(0, dim), j] = coeffs[j, -1]
        ops.append(k)
    return KrausChannel(ops)


def random_classical_kraus(dim, rng):
    """Incoherent coherence-breaking channel: a stochastic map on the diagonal."""
    p = rng.dirichlet(np.ones(dim), size=dim).T  # p[i, j] = P(i | j)
    ops = []
    for i in range(dim):
        for j in range(dim):
            k = np.zeros((dim, dim))
            k[i, j] = np.sqrt(p[i, j])
            ops.append(k)
    return KrausChannel(ops)


def random_measure_prepare(dim, rng):
    """Generic coherence-breaking channel ``rho -> sum_i tr(E_i rho) |i><i|`` for a random POVM."""
    u = random_unitary(dim * dim, rng)[:, :dim]  # isometry d -> d*d
    blocks = u.reshape(dim, dim, dim)
    ops = []
    for i in range(dim):
        a = blocks[i]  # E_i = a^dag a
        for r in range(dim):
            k = np.zeros((dim, dim), dtype=complex)
            k[i, :] = a[r, :]
            ops.append(k)
    return KrausChannel(ops)


def random_general_kraus(dim, rng, n_kraus=2):
    u = random_unitary(dim * n_kraus, rng)[:, :dim]
    return KrausChannel(list(u.reshape(n_kraus, dim, dim)))


def random_nc_family(rng, special=False):
    family = int(rng.integers(1, 3))
    if special:
        angles = rng.integers(0, 8, size=4) * np.pi / 4
    else:
        angles = rng.uniform(-np.pi, np.pi, size=4)
    if family == 1:
        # keep the supplied decomposition incoherent
        angles[int(rng.integers(0, 2))] = rng.integers(0, 4) * np.pi / 2
    return NCFamilyParams(family, *angles)


def channel_zoo(n, seed=2024, dims=(2, 3)):
    """Deterministic mix of incoherent, coherence-breaking and generic channels."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        kind = i % 5
        dim = dims[(i // 5) % len(dims)]
        if kind == 0:
            out.append(random_incoherent_kraus(dim, rng))
        elif kind == 1:
            out.append(random_classical_kraus(dim, rng))
        elif kind == 2:
            out.append(nc_family_channel(random_nc_family(rng, special=bool(i % 2))))
        elif kind == 3:
            out.append(random_measure_prepare(dim, rng))
        else:
            out.append(random_general_kraus(dim, rng))
    return out


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        ACCEPTANCE_RESULTS[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in ACCEPTANCE_RESULTS.items():
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
