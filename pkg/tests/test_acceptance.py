"""Acceptance criteria, one test each.

The terminal summary lists a PASS/FAIL line per criterion.
"""

import itertools
import subprocess
import sys
import warnings
from importlib.resources import files

import numpy as np
from conftest import random_general_kraus, random_incoherent_kraus, random_nc_family

from cobreak.amendment import (
    UnitaryParams,
    amend_interleaved,
    amend_post,
    amend_search_interleaved,
    amend_search_post,
    impossibility_post_square,
    interleaved_search_grid,
    post_search_grid,
    transfer_matrix_closed_form,
    transfer_matrix_of_unitary,
)
from cobreak.analysis import (
    cbc_index,
    family1_cbc,
    family1_index2,
    family2_cbc,
    family2_index2,
    family2_index2_case,
    is_cbc_oracle,
    is_cbc_structural,
    is_incoherent_kraus,
)
from cobreak.qchannel import NCFamilyParams, compose, iterate, kraus_to_affine, nc_family_channel

GRID = np.linspace(0, np.pi, 9)
SPECS = files("cobreak").joinpath("specs")


def quiet(fn, *args, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fn(*args, **kwargs)


def family_points(family):
    etas = GRID if family == 1 else [0.0]
    for theta, phi, xi, eta in itertools.product(GRID, GRID, GRID, etas):
        yield NCFamilyParams(family, theta, phi, xi, eta)


def test_criterion_01_z_contraction(z_contraction):
    assert is_cbc_structural(z_contraction).is_cbc and is_cbc_oracle(z_contraction).is_cbc
    assert cbc_index(z_contraction).index == 1
    ok = amend_post(z_contraction, UnitaryParams(np.pi / 4))
    assert ok.success and ok.witness.coherence > 1e-9
    assert not amend_post(z_contraction, UnitaryParams(np.pi / 2)).success


def test_criterion_02_nilpotent(nilpotent):
    assert not is_cbc_structural(nilpotent).is_cbc and not is_cbc_oracle(nilpotent).is_cbc
    assert cbc_index(nilpotent).index == 2
    inter = amend_interleaved(nilpotent, np.diag([1, 1j]))
    assert inter.success and inter.witness.coherence > 1e-9
    square = iterate(nilpotent, 2)
    assert np.all(square.M == 0) and np.all(square.n == 0)
    result = impossibility_post_square(nilpotent)
    assert not result.success
    assert result.certificate and result.certificate.startswith("image is I/2")


def test_criterion_03_structural_equals_oracle():
    rng = np.random.default_rng(2023)
    disagreements = 0
    for i in range(200):
        dim = (2, 3)[i % 2]
        if i % 4 < 2:
            ch = random_incoherent_kraus(dim, rng)
        elif dim == 2:
            ch = nc_family_channel(random_nc_family(rng, special=bool(i % 8 == 2)))
        else:
            ch = random_general_kraus(dim, rng)
        structural = is_cbc_structural(kraus_to_affine(ch), tol=1e-9).is_cbc
        disagreements += structural != is_cbc_oracle(ch, tol=1e-9).is_cbc
    assert disagreements == 0


def test_criterion_04_family_criteria_match_oracle():
    disagreements = []
    for family, criterion in ((1, family1_cbc), (2, family2_cbc)):
        for p in family_points(family):
            ch = nc_family_channel(p)
            if family == 1 and not is_incoherent_kraus(ch):
                continue
            if criterion(p) != is_cbc_oracle(ch).is_cbc:
                disagreements.append(p)
    assert disagreements == []


def test_criterion_05_index_two_criteria():
    failures = []
    checked = 0
    for family, index2, cbc in ((1, family1_index2, family1_cbc), (2, family2_index2, family2_cbc)):
        for p in family_points(family):
            ch = nc_family_channel(p)
            if family == 1 and not is_incoherent_kraus(ch):
                continue
            a = kraus_to_affine(ch)
            if index2(p):
                checked += 1
                index = quiet(cbc_index, a).index
                square_cbc = is_cbc_oracle(iterate(a, 2)).is_cbc
                if index != 2 or is_cbc_oracle(ch).is_cbc or not square_cbc:
                    case = family2_index2_case(p) if family == 2 else "-"
                    failures.append((family, case, p.theta, p.phi, p.xi, p.eta, index))
            if cbc(p) and quiet(cbc_index, a).index != 1:
                failures.append((family, "cbc", p.theta, p.phi, p.xi, p.eta))
    assert checked > 0
    if failures:
        cases = sorted({f[1] for f in failures})
        print(f"\n{len(failures)} of {checked} index-2 points fail; cases: {cases}; first: {failures[0]}")
    assert failures == []


def test_criterion_06_iteration_identity():
    rng = np.random.default_rng(6)
    for i in range(50):
        dim = (2, 3)[i % 2]
        a = kraus_to_affine(random_general_kraus(dim, rng, n_kraus=int(rng.integers(1, 4))))
        for k in (2, 3, 5):
            it = iterate(a, k)
            rep = a
            for _ in range(k - 1):
                rep = compose(a, rep)
            assert np.max(np.abs(it.M - rep.M)) <= 1e-9
            assert np.max(np.abs(it.n - rep.n)) <= 1e-9
            closed_n = sum(np.linalg.matrix_power(a.M, j) for j in range(k)) @ a.n
            assert np.max(np.abs(it.M - np.linalg.matrix_power(a.M, k))) <= 1e-9
            assert np.max(np.abs(it.n - closed_n)) <= 1e-9


def test_criterion_07_transfer_matrix():
    rng = np.random.default_rng(7)
    for _ in range(100):
        p = UnitaryParams.constrained(*rng.uniform(-np.pi, np.pi, 3))
        N = transfer_matrix_of_unitary(p)
        assert np.max(np.abs(N - transfer_matrix_closed_form(p))) <= 1e-9
        assert np.max(np.abs(N.T @ N - np.eye(3))) <= 1e-9


def test_criterion_08_family1_interleaved_sweep():
    unitary = UnitaryParams(0.0, alpha3=np.pi / 2)
    points = [p for p in family_points(1) if family1_index2(p)]
    assert points
    failures = []
    for p in points:
        result = amend_interleaved(nc_family_channel(p), unitary)
        if not result.success or not result.witness.coherence > 1e-9:
            failures.append(p)
    assert failures == []


def test_criterion_09_depolarizing_control(depolarizing):
    post = amend_search_post(depolarizing)
    assert not post.success and post.scanned == len(post_search_grid(2, 8))
    grid = interleaved_search_grid(2, 8)
    inter = quiet(amend_search_interleaved, depolarizing)
    assert not inter.success and inter.scanned == len(grid)
    general = quiet(amend_search_interleaved, depolarizing, depth=3)
    assert not general.success and general.scanned == len(grid)
    square = impossibility_post_square(depolarizing, samples=64)
    assert not square.success and square.scanned == len(post_search_grid(2, 8)) + 64


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "cobreak", *argv], capture_output=True)


def test_criterion_10_cli_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert _cli("sweep", "--family", "2", "--grid", "9", "--out", str(a)).returncode == 0
    assert _cli("sweep", "--family", "2", "--grid", "9", "--out", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()
    r_contract = _cli("analyze", str(SPECS.joinpath("z_contraction.json")))
    assert r_contract.returncode == 0
    assert b"cbc: true" in r_contract.stdout and b"index: 1\n" in r_contract.stdout
    r_nil = _cli("analyze", str(SPECS.joinpath("nilpotent.json")))
    assert r_nil.returncode == 0
    assert b"cbc: false" in r_nil.stdout and b"index: 2\n" in r_nil.stdout
