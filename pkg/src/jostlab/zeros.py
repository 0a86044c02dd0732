"""Zeros of entire functions in rectangles via the argument principle.

The winding number of ``f`` around a rectangle is accumulated panel by
panel.  On each panel the increment of ``log f`` is known exactly up to a
multiple of ``2 pi i`` from the endpoint values; a 7/15-point
Gauss-Kronrod estimate of ``int f'/f dz`` picks the multiple.  A panel is
accepted only if that estimate lies within 0.1 rad of the principal value
and the phase change is below ``pi/2``, so the summed phase is an integer
multiple of ``2 pi`` up to rounding and the quadrature sum certifies which
integer.  Panels are also refined while ``|f/f'|`` at a node is below a
quarter of the panel length, which keeps zeros from hiding between nodes
next to the contour.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryZeroError, ConsistencyError

# Gauss-Kronrod 7/15 on [-1, 1]
_XGK = np.array([
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245, 0.405845151377397166906606412076961,
    0.586087235467691130294144845693013, 0.741531185599394439863864773280788,
    0.864864423359769072789712788640926, 0.949107912342758524526189684047851,
    0.991455371120812639206854697526329])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082])
_GAUSS_IDX = np.arange(1, 15, 2)
_NODES = np.concatenate(([-1.0], _XGK, [1.0]))

_PHASE_MATCH = 0.1
_GK_MATCH = 0.01
_REACH = 0.25
_TINY = 1e-13
_BOUNDARY_REL = 1e-9
_INITIAL_PANELS = 16
_SPLIT_FRACTIONS = (0.5, 0.5123, 0.4823, 0.5311, 0.4581, 0.5707)


@dataclass(frozen=True)
class Rectangle:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    @property
    def perimeter(self) -> float:
        return 2.0 * (self.width + self.height)

    def corners(self):
        """Counterclockwise, starting bottom-left."""
        return (complex(self.re_min, self.im_min), complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max), complex(self.re_min, self.im_max))

    def contains(self, z, margin: float = 0.0):
        z = np.asarray(z)
        return ((z.real >= self.re_min - margin) & (z.real <= self.re_max + margin)
                & (z.imag >= self.im_min - margin) & (z.imag <= self.im_max + margin))

    def shifted(self, dz: complex) -> "Rectangle":
        return Rectangle(self.re_min + dz.real, self.re_max + dz.real,
                         self.im_min + dz.imag, self.im_max + dz.imag)

    def split(self, frac: float = 0.5):
        """Two halves across the longer side, cut at ``frac`` of its length."""
        if self.width >= self.height:
            cut = self.re_min + frac * self.width
            return (Rectangle(self.re_min, cut, self.im_min, self.im_max),
                    Rectangle(cut, self.re_max, self.im_min, self.im_max))
        cut = self.im_min + frac * self.height
        return (Rectangle(self.re_min, self.re_max, self.im_min, cut),
                Rectangle(self.re_min, self.re_max, cut, self.im_max))

    @classmethod
    def parse(cls, text: str) -> "Rectangle":
        parts = [float(v) for v in text.split(",")]
        if len(parts) != 4:
            raise ValueError("rectangle needs re0,re1,im0,im1")
        return cls(*parts)


@dataclass
class Zero:
    location: complex
    multiplicity: int
    residual: float
    converged: bool = True


@dataclass
class ZeroReport:
    zeros: list[Zero] = field(default_factory=list)
    total_count: int = 0
    tol: float = 0.0
    region: Rectangle | None = None

    @property
    def locations(self) -> np.ndarray:
        return np.array([z.location for z in self.zeros], dtype=complex)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([z.multiplicity for z in self.zeros], dtype=int)

    def within(self, rect: Rectangle) -> "ZeroReport":
        keep = [z for z in self.zeros if rect.contains(z.location)]
        return ZeroReport(keep, sum(z.multiplicity for z in keep), self.tol, rect)


def _winding(f, rect: Rectangle):
    """Return ``(exact_turns, quadrature_turns)`` around ``rect``."""
    corners = rect.corners()
    perimeter = rect.perimeter
    min_len = _BOUNDARY_REL * perimeter
    starts, ends = [], []
    for j in range(4):
        a, b = corners[j], corners[(j + 1) % 4]
        t = np.linspace(0.0, 1.0, _INITIAL_PANELS + 1)
        pts = a + (b - a) * t
        starts.append(pts[:-1])
        ends.append(pts[1:])
    A = np.concatenate(starts)
    B = np.concatenate(ends)
    exact = 0.0
    quad = 0.0
    while A.size:
        mid = 0.5 * (A + B)
        half = 0.5 * (B - A)
        z = mid[:, None] + half[:, None] * _NODES[None, :]
        val, der = f(z)
        val = np.asarray(val, dtype=complex)
        der = np.asarray(der, dtype=complex)
        if not np.all(np.isfinite(val)):
            raise OverflowError("function overflowed on the contour")
        mag = np.abs(val)
        tiny = mag.min(axis=1) <= _TINY * mag.max(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = der[:, 1:-1] / val[:, 1:-1]
            inc = np.angle(val[:, -1] / val[:, 0])
            # |f/f'| bounds the distance to the nearest zero from below (per multiplicity)
            reach = np.min(np.abs(val / der), axis=1)
        ik = half * (ratio @ _WGK)
        ig = half * (ratio[:, _GAUSS_IDX] @ _WG)
        good = (~tiny & np.isfinite(ik) & np.isfinite(ig)
                & (reach >= _REACH * np.abs(B - A))
                & (np.abs(ik.imag - ig.imag) <= _GK_MATCH)
                & (np.abs(ik.imag - inc) <= _PHASE_MATCH)
                & (np.abs(inc) < 0.5 * math.pi))
        exact += float(np.sum(inc[good]))
        quad += float(np.sum(ik.imag[good]))
        bad = ~good
        if not np.any(bad):
            break
        if np.any(np.abs(B[bad] - A[bad]) < min_len):
            raise BoundaryZeroError(
                f"zero on or near the boundary of {rect}; perturb the rectangle")
        a, m, b = A[bad], mid[bad], B[bad]
        A = np.concatenate((a, m))
        B = np.concatenate((m, b))
    return exact / (2 * math.pi), quad / (2 * math.pi)


def winding_count(f, r: Rectangle) -> int:
    """Number of zeros of ``f`` inside ``r`` counted with multiplicity.

    Raises
    ------
    BoundaryZeroError
        If a zero sits on the boundary or the quadrature certificate
        (unrounded value within 0.25 of an integer) fails.
    """
    exact, quad = _winding(f, r)
    n = round(exact)
    if abs(exact - n) > 1e-6 or abs(quad - n) > 0.25:
        raise BoundaryZeroError(
            f"winding integral {quad:.4f} is not near an integer on {r}; perturb the rectangle")
    if n < 0:
        raise ConsistencyError(f"negative winding {n}: function is not analytic inside {r}")
    return int(n)


def _perturbed_count(f, r: Rectangle, retries: int = 5):
    ex, ey = 1e-6 * r.width, 1e-6 * r.height
    shifts = [0j, complex(ex, 0), complex(-ex, 0), complex(0, ey), complex(0, -ey),
              complex(ex, ey)][:retries + 1]
    last = None
    for dz in shifts:
        rr = r.shifted(dz)
        try:
            return rr, winding_count(f, rr)
        except BoundaryZeroError as exc:
            last = exc
    raise last


def _split(f, rect: Rectangle, count: int):
    last = None
    for frac in _SPLIT_FRACTIONS:
        lo, hi = rect.split(frac)
        try:
            n_lo = winding_count(f, lo)
            n_hi = winding_count(f, hi)
        except BoundaryZeroError as exc:
            last = exc
            continue
        if n_lo + n_hi == count:
            return [(lo, n_lo), (hi, n_hi)]
        last = ConsistencyError(
            f"winding mismatch splitting {rect}: {n_lo} + {n_hi} != {count}")
    if isinstance(last, ConsistencyError):
        raise last
    raise ConsistencyError(f"could not split {rect} without boundary zeros: {last}")


def _newton(f, z0: complex, mult: int, tol: float, maxiter: int = 50):
    z = complex(z0)
    for _ in range(maxiter):
        with np.errstate(all="ignore"):
            val, der = f(np.array([z]))
        val, der = complex(val[0]), complex(der[0])
        if val == 0:
            return z, True
        if der == 0 or not np.isfinite(der) or not np.isfinite(val):
            return z, False
        step = mult * val / der
        z -= step
        if abs(step) < max(tol * 1e-3, 8 * np.finfo(float).eps * max(1.0, abs(z))):
            return z, True
    return z, False


def _refine(f, rect: Rectangle, count: int, tol: float):
    """Process one cell: return (zeros, children)."""
    if count == 0:
        return [], []
    side = max(rect.width, rect.height)
    if side < tol:
        z, ok = _newton(f, rect.center, count, tol)
        if not (ok and rect.contains(z, margin=side)):
            z, ok = rect.center, False
        return [(z, count, ok)], []
    if count == 1:
        z, ok = _newton(f, rect.center, 1, tol)
        if ok and rect.contains(z, margin=1e-12 * side):
            return [(z, 1, True)], []
    return [], _split(f, rect, count)


def _drain(f, cells, tol):
    found = []
    work = list(cells)
    while work:
        rect, count = work.pop()
        zs, children = _refine(f, rect, count, tol)
        found.extend(zs)
        work.extend(children)
    return found


def locate_zeros(f, r: Rectangle, tol: float = 1e-10, *, workers: int = 1) -> ZeroReport:
    """All zeros of ``f`` in ``r`` with multiplicities, Newton-polished.

    Cells are bisected until they hold at most one zero (then Newton from
    the cell centre) or are smaller than ``tol`` (then reported as one
    cluster with the summed multiplicity).  Multiplicities always come from
    winding numbers.  Output is sorted by real part, then imaginary part.
    """
    region, total = _perturbed_count(f, r)
    cells = [(region, total)]
    if workers > 1 and total > 1:
        # fan out once enough independent cells exist
        while len(cells) < 4 * workers:
            cells.sort(key=lambda c: -c[1])
            rect, count = cells[0]
            if count <= 1 or max(rect.width, rect.height) < tol:
                break
            cells = cells[1:] + _split(f, rect, count)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _drain(f, [c], tol), cells))
        found = [z for part in parts for z in part]
    else:
        found = _drain(f, cells, tol)
    found.sort(key=lambda t: (t[0].real, t[0].imag))
    zeros = []
    if found:
        vals = np.abs(f(np.array([t[0] for t in found], dtype=complex))[0])
        for (z, m, ok), res in zip(found, vals):
            zeros.append(Zero(complex(z), int(m), float(res), bool(ok)))
    if sum(z.multiplicity for z in zeros) != total:
        raise ConsistencyError("reported multiplicities do not sum to the winding count")
    return ZeroReport(zeros, total, tol, region)
