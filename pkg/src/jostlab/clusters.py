"""Disk-union neighbourhoods of point sets and polygonal strip partitions.

``V_r`` is the union of closed disks of radius ``r`` around the points.  Its
connected components are found from the intersection graph; the boundary
of each component is an exact chain of circular arcs.  The strip partition
cuts an angle ``K_A = {-Im z >= A |Re z|}`` into a top triangle and
quadrilaterals along horizontal lines.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .analytics import PointMultiset
from .errors import DegenerateError, DomainError, InfeasibleError

TWO_PI = 2.0 * math.pi
_STITCH = 1e-9


@dataclass(frozen=True)
class Arc:
    """Counterclockwise arc ``center + radius e^{it}``, ``t0 <= t <= t1``."""

    center: complex
    radius: float
    t0: float
    t1: float
    orientation: str = "counterclockwise"

    @property
    def length(self) -> float:
        return self.radius * (self.t1 - self.t0)

    @property
    def start(self) -> complex:
        return self.center + self.radius * complex(math.cos(self.t0), math.sin(self.t0))

    @property
    def end(self) -> complex:
        return self.center + self.radius * complex(math.cos(self.t1), math.sin(self.t1))

    def point(self, u):
        """Point at parameter ``u`` in ``[0, 1]``."""
        t = self.t0 + (self.t1 - self.t0) * np.asarray(u, dtype=float)
        return self.center + self.radius * np.exp(1j * t)

    def tangent(self, u):
        """``dw/du``."""
        t = self.t0 + (self.t1 - self.t0) * np.asarray(u, dtype=float)
        return 1j * self.radius * (self.t1 - self.t0) * np.exp(1j * t)

    def signed_area(self) -> float:
        """Contribution ``(1/2) int x dy - y dx``."""
        r, c = self.radius, self.center
        return 0.5 * (r * r * (self.t1 - self.t0)
                      + r * c.real * (math.sin(self.t1) - math.sin(self.t0))
                      - r * c.imag * (math.cos(self.t1) - math.cos(self.t0)))

    def to_json(self) -> dict:
        return {"cx": self.center.real, "cy": self.center.imag, "r": self.radius,
                "t0": self.t0, "t1": self.t1}


@dataclass(frozen=True)
class Segment:
    """Straight edge from ``a`` to ``b``."""

    a: complex
    b: complex

    @property
    def length(self) -> float:
        return abs(self.b - self.a)

    @property
    def start(self) -> complex:
        return self.a

    @property
    def end(self) -> complex:
        return self.b

    def point(self, u):
        return self.a + (self.b - self.a) * np.asarray(u, dtype=float)

    def tangent(self, u):
        return (self.b - self.a) * np.ones_like(np.asarray(u, dtype=float))

    def signed_area(self) -> float:
        return 0.5 * (self.a.real * self.b.imag - self.b.real * self.a.imag)


def loop_area(loop) -> float:
    """Signed area enclosed by a closed chain (positive when counterclockwise)."""
    return math.fsum(p.signed_area() for p in loop)


def loop_length(loop) -> float:
    return math.fsum(p.length for p in loop)


def loop_nodes(loop, order: int = 32, panels: int = 1):
    """Composite Gauss-Legendre nodes ``w`` and weights ``dw`` on a chain."""
    x, wts = np.polynomial.legendre.leggauss(order)
    u = 0.5 * (x + 1.0)
    wts = 0.5 * wts
    ws, dws = [], []
    for piece in loop:
        for p in range(panels):
            uu = (p + u) / panels
            ws.append(piece.point(uu))
            dws.append(piece.tangent(uu) * (wts / panels))
    return np.concatenate(ws), np.concatenate(dws)


def contour_integral(func, loop, order: int = 32, panels: int = 1):
    """``oint func(w) dw`` and the matching scale ``oint |func(w)| |dw|``."""
    w, dw = loop_nodes(loop, order, panels)
    fw = np.asarray(func(w), dtype=complex)
    return complex(np.sum(fw * dw)), float(np.sum(np.abs(fw) * np.abs(dw)))


def winding_about(loop, z: complex) -> float:
    """Unrounded winding number of a closed chain about ``z``."""
    val, _ = contour_integral(lambda w: 1.0 / (w - z), loop, order=64, panels=4)
    return (val / (2j * math.pi)).real


# ---------------------------------------------------------------- clusters

def _ordered_indices(locs: np.ndarray) -> np.ndarray:
    return np.lexsort((np.angle(locs), np.abs(locs)))


def _covered(center: complex, others: np.ndarray, r: float):
    """Angular intervals of the circle around ``center`` covered by ``others``."""
    out = []
    for c in others:
        d = abs(c - center)
        if d >= 2 * r:
            continue
        half = math.acos(d / (2 * r))
        if d == 0:
            raise DegenerateError("coincident centres")
        phi = math.atan2((c - center).imag, (c - center).real)
        out.append((phi - half, phi + half))
    return out


def _uncovered(intervals):
    """Complement in ``[a, a + 2 pi)`` of a union of angular intervals.

    Returns ``None`` when nothing is covered (the full circle survives) and
    an empty list when everything is.
    """
    if not intervals:
        return None
    # anchor the sweep at the start of the first interval so no wrap is needed
    base = min(lo for lo, _ in intervals)
    norm = []
    for lo, hi in intervals:
        shift = math.floor((lo - base) / TWO_PI) * TWO_PI
        lo, hi = lo - shift, hi - shift
        norm.append((lo, hi))
        if hi > base + TWO_PI:
            norm.append((lo - TWO_PI, hi - TWO_PI))
    norm.sort()
    gaps = []
    reach = base
    for lo, hi in norm:
        if lo > reach:
            gaps.append((reach, lo))
        reach = max(reach, hi)
    if reach < base + TWO_PI:
        gaps.append((reach, base + TWO_PI))
    return [g for g in gaps if g[1] - g[0] > 0]


def boundary_arcs(members: PointMultiset, r: float):
    """Boundary of the union of radius-``r`` disks as counterclockwise arcs.

    Each arc is traversed counterclockwise about its own centre, so the union
    lies to the left everywhere: stitched outer loops come out
    counterclockwise and loops around holes clockwise.  Returns
    ``(arcs, loops)`` with ``loops`` a list of index lists into ``arcs``.
    """
    if not r > 0:
        raise DomainError("radius must be positive")
    locs = members.locations[_ordered_indices(members.locations)]
    arcs: list[Arc] = []
    for i, c in enumerate(locs):
        others = np.delete(locs, i)
        gaps = _uncovered(_covered(complex(c), others, r))
        if gaps is None:
            arcs.append(Arc(complex(c), r, -math.pi, math.pi))
            continue
        for lo, hi in gaps:
            arcs.append(Arc(complex(c), r, lo, hi))
    return arcs, _stitch(arcs, r)


def _stitch(arcs, r: float):
    starts = np.array([a.start for a in arcs], dtype=complex)
    used = [False] * len(arcs)
    loops = []
    for first in range(len(arcs)):
        if used[first]:
            continue
        loop, cur = [], first
        while True:
            used[cur] = True
            loop.append(cur)
            if arcs[cur].t1 - arcs[cur].t0 >= TWO_PI - 1e-15 and len(loop) == 1:
                break
            d = np.abs(starts - arcs[cur].end)
            hits = np.flatnonzero(d <= _STITCH * r)
            if hits.size != 1:
                raise DegenerateError(
                    f"arc end {arcs[cur].end} matches {hits.size} arc starts")
            cur = int(hits[0])
            if cur == first:
                break
            if used[cur]:
                raise DegenerateError("arc chain closes on an interior arc")
        loops.append(loop)
    return loops


@dataclass
class Cluster:
    """One connected component of the disk union.

    ``loops[0]`` is the outer boundary (largest signed area); any further
    loops with negative area bound holes.
    """

    members: PointMultiset
    arcs: list
    loops: list
    anchor: complex
    radius: float

    @property
    def length(self) -> float:
        return loop_length(self.arcs)

    def chains(self):
        """Loops as lists of :class:`Arc` objects."""
        return [[self.arcs[i] for i in loop] for loop in self.loops]

    def to_json(self):
        return [a.to_json() for a in self.arcs]


@dataclass
class ClusterDecomposition:
    radius: float
    components: list = field(default_factory=list)

    def __len__(self):
        return len(self.components)

    def arcs_json(self) -> str:
        return json.dumps([c.to_json() for c in self.components], indent=1)


def _components(locs: np.ndarray, r: float) -> np.ndarray:
    n = locs.size
    pairs = cKDTree(np.column_stack((locs.real, locs.imag))).query_pairs(
        2 * r * (1 + 1e-12), output_type="ndarray")
    # the KD-tree radius is padded; the closed condition is applied exactly
    if pairs.size:
        keep = np.abs(locs[pairs[:, 0]] - locs[pairs[:, 1]]) <= 2 * r
        pairs = pairs[keep]
    g = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])) if len(pairs) else
                   (np.zeros(0), (np.zeros(0, int), np.zeros(0, int))), shape=(n, n))
    return connected_components(g, directed=False)[1]


def build_clusters(s: PointMultiset, r: float) -> ClusterDecomposition:
    """Connected components of the radius-``r`` disk union, sorted by anchor."""
    if len(s) == 0:
        raise DomainError("empty point set")
    if not r > 0:
        raise DomainError("radius must be positive")
    labels = _components(s.locations, r)
    comps = []
    for lab in np.unique(labels):
        mask = labels == lab
        members = s.select(mask)
        order = _ordered_indices(members.locations)
        anchor = complex(members.locations[order[0]])
        members = PointMultiset(members.locations[order], members.multiplicities[order])
        try:
            arcs, loops = boundary_arcs(members, r)
        except DegenerateError:
            arcs, loops = boundary_arcs(members, r * (1 + 1e-10))
        loops.sort(key=lambda lp: -loop_area([arcs[i] for i in lp]))
        comps.append(Cluster(members, arcs, loops, anchor, r))
    comps.sort(key=lambda c: (abs(c.anchor), math.atan2(c.anchor.imag, c.anchor.real)))
    return ClusterDecomposition(r, comps)


def perimeter_mc(locs, r: float, samples: int = 1_000_000, seed: int = 0,
                 rel_step: float = 0.1) -> float:
    """Boundary length as ``(A(r + e) - A(r - e)) / 2e`` with shared samples."""
    locs = np.asarray(locs, dtype=complex)
    e = rel_step * r
    pad = r + 2 * e
    box = (locs.real.min() - pad, locs.real.max() + pad, locs.imag.min() - pad, locs.imag.max() + pad)
    rng = np.random.default_rng(seed)
    x0, x1, y0, y1 = box
    pts = np.column_stack((rng.uniform(x0, x1, samples), rng.uniform(y0, y1, samples)))
    d, _ = cKDTree(np.column_stack((locs.real, locs.imag))).query(pts)
    area = (x1 - x0) * (y1 - y0)
    frac = np.count_nonzero((d <= r + e) & (d > r - e)) / samples
    return frac * area / (2 * e)


# --------------------------------------------------------- strip partition

@dataclass
class StripPartition:
    """Angle ``K_A`` cut at heights ``-h_0 > -h_1 > ...``.

    ``contours[0]`` is the triangle with apex 0 down to ``-h_0``;
    ``contours[n]`` the quadrilateral between ``-h_{n-1}`` and ``-h_n``.
    Each contour is a counterclockwise list of :class:`Segment`.
    """

    A: float
    h: list
    groups: list
    contours: list

    def to_json(self) -> str:
        return json.dumps({"A": self.A, "h": self.h,
                           "polygons": [[[p.a.real, p.a.imag] for p in c] for c in self.contours]},
                          indent=1)


def _polygon(A: float, top: float | None, bottom: float):
    lo_l, lo_r = complex(-bottom / A, -bottom), complex(bottom / A, -bottom)
    if top is None:
        verts = [0j, lo_l, lo_r]
    else:
        verts = [complex(-top / A, -top), lo_l, lo_r, complex(top / A, -top)]
    return [Segment(verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts))]


def _cut_clear(h: float, A: float, avoid: np.ndarray, d: float) -> bool:
    if avoid.size == 0:
        return True
    x = np.clip(avoid.real, -h / A, h / A)
    return bool(np.all(np.abs(avoid - (x - 1j * h)) >= d))


def _clear_heights(lo: float, hi: float, A: float, avoid, d: float):
    step = d / 10.0
    n = int(math.floor((hi - lo) / step + 1e-9))
    for j in range(n + 1):
        h = min(lo + j * step, hi)
        if _cut_clear(h, A, avoid, d):
            yield h


def _cuts(h: float, deepest: float, A: float, avoid, d: float, budget: list):
    """Cut sequence continuing from ``h``; backtracks when a window is blocked."""
    if h > deepest:
        return [h]
    for nxt in _clear_heights(h + 2, 2 * h, A, avoid, d):
        budget[0] -= 1
        if budget[0] < 0:
            break
        tail = _cuts(nxt, deepest, A, avoid, d, budget)
        if tail is not None:
            return [h] + tail
    return None


def strip_partition(s: PointMultiset, A: float, H_zeros: PointMultiset, d: float,
                    h0: float) -> StripPartition:
    """Greedy cuts ``h_{k+1}`` = smallest clear height in ``[h_k + 2, 2 h_k]``.

    When a window holds no clear height the previous cut is moved to its
    next clear value (depth-first backtracking).

    A cut is clear when its segment inside ``K_A`` stays at distance ``>= d``
    from every point of ``s`` and ``H_zeros``.  The window is nonempty only
    for ``h_k >= 2``, so the first cut is searched from ``max(h0, 2)``.
    """
    if not A > 0:
        raise DomainError("A must be positive")
    if not 0 < d < 1:
        raise DomainError("d must lie in (0, 1)")
    locs = s.locations
    if locs.size and np.any(-locs.imag <= A * np.abs(locs.real)):
        raise DomainError("points must lie inside the angle -Im z > A |Re z|")
    avoid = np.concatenate((locs, H_zeros.locations))
    start = max(h0, 2.0)
    deepest = float(np.max(-locs.imag)) if locs.size else 0.0
    budget = [100_000]
    hs = None
    for first in _clear_heights(start, 2 * start, A, avoid, d):
        hs = _cuts(first, deepest, A, avoid, d, budget)
        if hs is not None or budget[0] < 0:
            break
    if hs is None:
        raise InfeasibleError(f"no admissible cut sequence from h0 = {start}; decrease d")
    contours, groups = [], []
    depth = -locs.imag
    for n, h in enumerate(hs):
        top = None if n == 0 else hs[n - 1]
        contours.append(_polygon(A, top, h))
        mask = (depth < h) & (depth > (0.0 if top is None else top))
        groups.append(s.select(mask))
    return StripPartition(A, hs, groups, contours)
