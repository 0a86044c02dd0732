"""Acceptance criteria 1-10, one test each (``test_criterion_NN_*``).

A PASS/FAIL line per criterion, with its wall time, is printed in the
terminal summary by ``conftest.py``.
"""

import math
import time

import numpy as np
import pytest

from jostlab.analytics import (PointMultiset, blaschke_partial_sum, counting_function,
                               log_strip_clearance)
from jostlab.cli import main
from jostlab.clusters import boundary_arcs, build_clusters, loop_length, perimeter_mc
from jostlab.evaluator import polynomial_evaluator
from jostlab.interpolation import build_interpolant, contour_block, finish_bundle, residue_block
from jostlab.jost import JostFunction
from jostlab.lk import cos_lemma_holds
from jostlab.potential import Potential
from jostlab.sharpness import build_counterexample, obstruction_profile, parse_rate
from jostlab.zeros import Rectangle, locate_zeros

# 30-digit mpmath roots of kappa cos(kappa) - i k sin(kappa), kappa^2 = k^2 - 4,
# in [0.1, 20] x [-5, -0.01]; see test_zeros.test_box_oracle_reproducible
BOX_ORACLE = np.array([
    3.3797188375310687 - 0.98466905381792069j,
    6.2956323031673941 - 1.7692045669153484j,
    9.3924579220737203 - 2.2081782954519291j,
    12.520483420901922 - 2.5100356314679301j,
    15.657712722927369 - 2.740367284110654j,
    18.798390125473111 - 2.9268020219215924j,
])
BOX = Potential.box(1.0, 4.0)
CLUSTER_LAM = PointMultiset(-1j * (2 + 18 * np.arange(8) ** 2 / 49))
STRIP_LAM = PointMultiset([0.5 - 2j, -1 - 3j, -4.5j, 1.5 - 6j, -2 - 8j, 2.5 - 11j])
STRIP_CSV = "re,im,mult\n0.5,-2,1\n-1,-3,1\n0,-4.5,1\n1.5,-6,1\n-2,-8,1\n2.5,-11,1\n"
CLUSTER_CSV = "re,im,mult\n" + "".join(f"0,{-(2 + 18 * j * j / 49)!r},1\n" for j in range(8))


@pytest.fixture(scope="module")
def resonances_200():
    t0 = time.perf_counter()
    rep = locate_zeros(JostFunction(BOX), Rectangle(-200, 200, -200, -0.01), 1e-10, workers=8)
    return PointMultiset.from_report(rep), time.perf_counter() - t0


def test_criterion_01_box_oracle():
    t0 = time.perf_counter()
    rep = locate_zeros(JostFunction(BOX), Rectangle(0.1, 20, -5, -0.01), 1e-10, workers=1)
    elapsed = time.perf_counter() - t0
    found = np.array([z.location for z in rep.zeros])
    assert rep.total_count == BOX_ORACLE.size
    assert found.size == BOX_ORACLE.size
    assert np.all(np.abs(found - BOX_ORACLE) <= 1e-9)
    assert elapsed <= 60


def test_criterion_02_counting(resonances_200):
    s, elapsed = resonances_200
    ratio = counting_function(s, 200.0) / (2 / math.pi * 200.0)
    assert 0.9 <= ratio <= 1.1
    assert elapsed <= 300


def test_criterion_03_blaschke(resonances_200):
    s, _ = resonances_200
    partial = [0.0] + [blaschke_partial_sum(s, r) for r in (50.0, 100.0, 200.0)]
    inc = np.diff(partial)
    assert inc[0] > inc[1] > inc[2] > 0


def test_criterion_04_log_strip(resonances_200):
    s, _ = resonances_200
    re = np.abs(s.locations.real)
    values = [log_strip_clearance(s.select((re >= 5) & (re <= w))) for w in (50, 100, 200)]
    assert all(v >= 0.1 for v in values)
    assert all(np.isfinite(v) for v in values)


def test_criterion_05_cos_lemma():
    rng = np.random.default_rng(5)
    n = 100_000
    z = rng.uniform(-100, 100, n) + 1j * rng.uniform(-100, 100, n)
    z = np.where(np.abs(z.imag) < 1e-6, z.real + 1e-6j, z)
    assert int(np.count_nonzero(~cos_lemma_holds(z))) == 0


def test_criterion_06_duality():
    rng = np.random.default_rng(6)
    for _ in range(20):
        c = complex(rng.uniform(-10, 10), -rng.uniform(3, 15))
        lam = PointMultiset(c + rng.uniform(-0.6, 0.6, 3) + 1j * rng.uniform(-0.6, 0.6, 3))
        H = polynomial_evaluator(np.concatenate((lam.locations, [c + 7, c - 6j])))
        sigma = rng.uniform(0.5, 3)
        chains = [ch for comp in build_clusters(lam, 1.0).components for ch in comp.chains()]
        z = c + 4 + 3j
        ref = residue_block(H, lam, sigma, z)
        assert abs(contour_block(H, chains, sigma, z) - ref) <= 1e-8 * abs(ref)


@pytest.mark.parametrize("lam, sigma, strategy, source", [
    (CLUSTER_LAM, 2.0, "cluster", "lk"), (STRIP_LAM, 3.0, "strip", "sinc")],
    ids=["cluster", "strip"])
def test_criterion_07_interpolation(lam, sigma, strategy, source):
    t0 = time.perf_counter()
    b = build_interpolant(lam, sigma, strategy, source)
    finish_bundle(b, Rectangle(-70, 70, 0, 70), Rectangle(-50, 50, 0, 50))
    elapsed = time.perf_counter() - t0
    d = b.diagnostics
    assert d.max_residual <= 1e-8 and d.max_f_residual <= 1e-8
    assert abs(d.g0) <= 1e-12
    assert d.upper_winding == 0
    assert d.band_residual <= 0.05
    assert elapsed <= 120


def test_criterion_08_cluster_geometry():
    arcs, _ = boundary_arcs(PointMultiset([0, 1.0]), 1.0)
    assert abs(loop_length(arcs) - 8 * math.pi / 3) <= 1e-9
    assert abs(perimeter_mc([0, 1.0], 1.0, 1_000_000) / (8 * math.pi / 3) - 1) <= 0.01
    single = build_clusters(PointMultiset([2 - 3j]), 1.0).components[0]
    assert single.length == 2 * math.pi
    rng = np.random.default_rng(8)
    for _ in range(20):
        s = PointMultiset(rng.uniform(-6, 6, 12) + 1j * rng.uniform(-6, 6, 12))
        for c in build_clusters(s, 1.0).components:
            n = len(c.members)
            assert c.length <= 2 * math.pi * n
            assert (abs(c.length - 2 * math.pi * n) <= 1e-12) == (n == 1)


def test_criterion_09_sharpness():
    t0 = time.perf_counter()
    cs = build_counterexample(parse_rate("log1p"), parse_rate("pow:0.5"), 8)
    cs.check()
    rows = obstruction_profile(cs)
    elapsed = time.perf_counter() - t0
    total = 0
    for k, (n, r) in enumerate(zip(cs.indices, cs.radii)):
        z = cs.z(k)
        assert abs(abs(z) - r) <= 1e-9 * r and abs(z.imag + cs.tau(r)) <= 1e-9 * cs.tau(r)
        assert 2 ** k * n <= r
        assert k == 0 or total <= cs.rho(r) - cs.kappa(r)
        total += n
    lb = [row.lower_bound for row in rows]
    assert all(a < b for a, b in zip(lb, lb[1:]))
    assert lb[-1] > 10 * lb[0]
    assert all(row.p >= row.lower_bound for row in rows)
    assert elapsed <= 30


def test_criterion_10_determinism(tmp_path):
    box = tmp_path / "box.json"
    box.write_text('{"segments": [{"length": 1.0, "q": 4.0}]}')
    (tmp_path / "cluster.csv").write_text(CLUSTER_CSV)
    (tmp_path / "strip.csv").write_text(STRIP_CSV)
    runs = {
        "c1": ["resonances", "--potential", box, "--region", "0.1,20,-5,-0.01"],
        "c7a": ["interpolate", "--points", tmp_path / "cluster.csv", "--sigma", "2"],
        "c7b": ["interpolate", "--points", tmp_path / "strip.csv", "--sigma", "3",
                "--strategy", "strip", "--h-source", "sinc"],
        "c9": ["sharpness", "--tau", "log1p", "--rho", "pow:0.5", "--K", "8"],
    }
    for name, argv in runs.items():
        blobs = []
        for rep in range(2):
            out = tmp_path / f"{name}.{rep}"
            assert main([str(a) for a in argv] + ["--out", str(out)]) == 0
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1], name
