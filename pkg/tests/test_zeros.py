import numpy as np
import pytest

from jostlab.errors import BoundaryZeroError
from jostlab.evaluator import FunctionEvaluator, polynomial_evaluator
from jostlab.jost import JostFunction
from jostlab.potential import Potential
from jostlab.zeros import Rectangle, locate_zeros, winding_count

SIN = FunctionEvaluator(np.sin, np.cos)
ONE = FunctionEvaluator(lambda z: np.ones_like(z), lambda z: np.zeros_like(z))

# kappa cot kappa = i k, kappa^2 = k^2 - 4, solved with mpmath.findroot from a
# 40 x 5 seed grid over the rectangle (30 digits), rounded to binary64
BOX_ORACLE = np.array([
    3.3797188375310687 - 0.98466905381792069j,
    6.2956323031673941 - 1.7692045669153484j,
    9.3924579220737203 - 2.2081782954519291j,
    12.520483420901922 - 2.5100356314679301j,
    15.657712722927369 - 2.740367284110654j,
    18.798390125473111 - 2.9268020219215924j,
])


def test_rectangle_parse_and_validate():
    r = Rectangle.parse("-1,2,-3,4")
    assert (r.re_min, r.re_max, r.im_min, r.im_max) == (-1, 2, -3, 4)
    with pytest.raises(ValueError):
        Rectangle(1, 0, 0, 1)
    with pytest.raises(ValueError):
        Rectangle.parse("1,2,3")


def test_winding_examples():
    assert winding_count(ONE, Rectangle(-3, 4, -2, 5)) == 0
    assert winding_count(SIN, Rectangle(2.9, 3.4, -0.2, 0.2)) == 1
    assert winding_count(polynomial_evaluator([0, 0]), Rectangle(-1, 1, -1, 1)) == 2


def test_boundary_zero_detected():
    with pytest.raises(BoundaryZeroError):
        winding_count(SIN, Rectangle(0.0, 1.0, -1, 1))


def test_free_jost_has_no_zeros():
    rep = locate_zeros(JostFunction(Potential(())), Rectangle(-10, 10, -10, -0.1))
    assert rep.total_count == 0 and rep.zeros == []


def test_polynomial_multiplicities():
    f = polynomial_evaluator([-1j, -1j, -2 + 3j])
    rep = locate_zeros(f, Rectangle(-5, 5, -5, 5))
    assert rep.total_count == 3
    locs = {(round(z.location.real, 8), round(z.location.imag, 8)): z.multiplicity for z in rep.zeros}
    assert locs == {(0.0, -1.0): 2, (-2.0, 3.0): 1}


def test_box_against_oracle(box):
    rep = locate_zeros(JostFunction(box), Rectangle(0.1, 20, -5, -0.01), 1e-10)
    assert rep.total_count == len(BOX_ORACLE)
    assert np.max(np.abs(rep.locations - BOX_ORACLE)) <= 1e-9


def test_partition_additivity(box):
    f = JostFunction(box)
    whole = winding_count(f, Rectangle(-20.3, 20.7, -6.1, -0.05))
    xs = np.linspace(-20.3, 20.7, 5)
    ys = np.linspace(-6.1, -0.05, 4)
    parts = sum(winding_count(f, Rectangle(xs[i], xs[i + 1], ys[j], ys[j + 1]))
                for i in range(4) for j in range(3))
    assert parts == whole


def test_nested_rectangles(box):
    f = JostFunction(box)
    outer = locate_zeros(f, Rectangle(-40, 40, -8, -0.01))
    inner = locate_zeros(f, Rectangle(-15, 25, -4, -0.5))
    sub = outer.within(inner.region)
    assert sub.total_count == inner.total_count
    assert np.max(np.abs(sub.locations - inner.locations)) <= 1e-9


def test_residuals_small(box):
    f = JostFunction(box)
    rep = locate_zeros(f, Rectangle(-60, 60, -10, -0.01))
    for z in rep.zeros:
        ref = max(1.0, abs(f.value(z.location + 0.1j)))
        assert z.residual <= 1e-8 * ref and z.converged


def test_output_independent_of_workers(box):
    f = JostFunction(box)
    r = Rectangle(-50, 50, -8, -0.01)
    a, b = locate_zeros(f, r, workers=1), locate_zeros(f, r, workers=4)
    assert np.array_equal(a.locations, b.locations)
    assert np.array_equal(a.multiplicities, b.multiplicities)


def test_sorted_output(box):
    rep = locate_zeros(JostFunction(box), Rectangle(-30, 30, -6, -0.01))
    keys = [(z.location.real, z.location.imag) for z in rep.zeros]
    assert keys == sorted(keys)


def test_box_oracle_reproducible():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 30

    def h(k):
        kap = mpmath.sqrt(k * k - 4)
        return kap * mpmath.cos(kap) - 1j * k * mpmath.sin(kap)

    for z in BOX_ORACLE:
        root = complex(mpmath.findroot(h, mpmath.mpc(z.real + 1e-3, z.imag - 1e-3)))
        assert abs(root - z) <= 1e-15 * abs(z)
