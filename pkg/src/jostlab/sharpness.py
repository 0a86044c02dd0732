"""Counterexample sets whose phase sum blows up along a subsequence.

Given rates ``tau = o(rho)``, put ``kappa = (rho + tau)/2``, solve
``kappa(r_n) = n`` and place ``z_n`` on ``|z| = r_n`` at height
``-tau(r_n)``.  A greedy subsequence ``n_0 < n_1 < ...`` with multiplicity
``n_k`` at ``z_{n_k}`` keeps the counting function below ``rho`` and the
Blaschke sum bounded, yet ``p(Re z_{n_k}) >= kappa/tau`` grows without bound.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize

from .analytics import PointMultiset, counting_function, phase_sum
from .errors import ConsistencyError, DomainError, InfeasibleError, ParseError, PreconditionError

ITERATION_CAP = 1_000_000


@dataclass(frozen=True)
class RateFunction:
    """Increasing unbounded map ``[0, inf) -> [0, inf)`` with a text tag."""

    fn: Callable[[float], float]
    tag: str

    def __call__(self, r):
        return self.fn(r)

    def check_increasing(self, rmax: float, samples: int = 257) -> None:
        r = np.linspace(0.0, rmax, samples)
        v = np.array([self.fn(float(x)) for x in r])
        if np.any(np.diff(v) <= 0):
            raise DomainError(f"{self.tag} is not strictly increasing on [0, {rmax:g}]")


def _split_args(body: str):
    depth, start, out = 0, 0, []
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append(body[start:i].strip())
            start = i + 1
    out.append(body[start:].strip())
    return out


def parse_rate(text: str) -> RateFunction:
    """Parse ``log1p``, ``pow:a``, ``scaled(c, spec)`` or ``sum(spec, spec)``."""
    t = text.strip()
    if t == "log1p":
        return RateFunction(math.log1p, t)
    m = re.fullmatch(r"pow:([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)", t)
    if m:
        a = float(m.group(1))
        if not a > 0:
            raise ParseError(f"pow exponent must be positive: {t!r}")
        return RateFunction(lambda r, a=a: r ** a, t)
    m = re.fullmatch(r"(scaled|sum)\((.*)\)", t)
    if m:
        args = _split_args(m.group(2))
        if len(args) != 2:
            raise ParseError(f"{m.group(1)} takes two arguments: {t!r}")
        if m.group(1) == "scaled":
            try:
                c = float(args[0])
            except ValueError:
                raise ParseError(f"scale factor is not a number: {args[0]!r}") from None
            if not c > 0:
                raise ParseError(f"scale factor must be positive: {t!r}")
            inner = parse_rate(args[1])
            return RateFunction(lambda r, c=c, f=inner: c * f(r), t)
        a, b = parse_rate(args[0]), parse_rate(args[1])
        return RateFunction(lambda r, a=a, b=b: a(r) + b(r), t)
    raise ParseError(f"unknown rate function {t!r}")


def kappa(tau, rho, r):
    return 0.5 * (rho(r) + tau(r))


def radius_solve(kappa_fn: Callable[[float], float], n: float, r_cap: float = 1e300) -> float:
    """Root of ``kappa(r) = n`` for increasing ``kappa``."""
    if n < kappa_fn(0.0):
        raise DomainError(f"n = {n} is below kappa(0)")
    hi = 1.0
    while kappa_fn(hi) < n:
        hi *= 2.0
        if hi > r_cap:
            raise InfeasibleError(f"kappa stays below {n} up to r = {r_cap:g}")
    lo = hi / 2.0 if hi > 1.0 else 0.0
    if kappa_fn(hi) == n:
        return hi
    return optimize.brentq(lambda r: kappa_fn(r) - n, lo, hi, xtol=1e-300,
                           rtol=4 * np.finfo(float).eps, maxiter=500)


@dataclass
class CounterexampleSet:
    indices: list
    radii: list
    points: PointMultiset
    tau: RateFunction
    rho: RateFunction

    def z(self, k: int) -> complex:
        return complex(self.points.locations[k])

    def kappa(self, r: float) -> float:
        return kappa(self.tau, self.rho, r)

    def check(self) -> None:
        """Raise :class:`ConsistencyError` unless every construction invariant holds."""
        total = 0
        for k, (n, r) in enumerate(zip(self.indices, self.radii)):
            z = self.z(k)
            ok = (abs(abs(z) - r) <= 1e-9 * r and abs(z.imag + self.tau(r)) <= 1e-9 * self.tau(r)
                  and z.real > 0 and 2 ** k * n <= r
                  and (k == 0 or total <= self.rho(r) - self.kappa(r)))
            if not ok:
                raise ConsistencyError(f"invariant violated at k = {k}")
            total += n
        if any(a >= b for a, b in zip(self.indices, self.indices[1:])):
            raise ConsistencyError("indices are not strictly increasing")

    def split(self) -> PointMultiset:
        """Multiplicity-``n_k`` points replaced by ``n_k`` points ``1e-6 r`` apart."""
        pts = []
        for k, r in enumerate(self.radii):
            one = PointMultiset([self.z(k)], [self.indices[k]])
            pts.extend(one.split_multiple(1e-6 * r).locations.tolist())
        return PointMultiset(pts)

    def to_json(self) -> str:
        doc = {"tau": self.tau.tag, "rho": self.rho.tag,
               "points": [{"n": int(n), "r": float(r), "re": self.z(k).real, "im": self.z(k).imag}
                          for k, (n, r) in enumerate(zip(self.indices, self.radii))]}
        return json.dumps(doc, indent=1)


def _point(tau, r: float) -> complex:
    y = tau(r)
    return complex(math.sqrt((r - y) * (r + y)), -y)


def check_rates(tau: RateFunction, rho: RateFunction, rmax: float = 1e8) -> RateFunction:
    """Validate ``tau = o(rho)`` and return the (possibly reduced) ``rho``.

    When ``rho(r)/r`` does not decay, ``rho`` is replaced by ``sqrt(rho tau)``.
    """
    grid = np.geomspace(1e2, rmax, 25)
    t = np.array([tau(float(r)) for r in grid])
    p = np.array([rho(float(r)) for r in grid])
    ratio = t / p
    if ratio[-1] >= 0.5 or np.any(np.diff(ratio) > 1e-12):
        raise PreconditionError("tau = o(rho) fails: tau/rho must decrease below 1/2")
    if np.any(np.diff(t / grid) > 0) or t[-1] / grid[-1] >= 0.5:
        raise PreconditionError("tau = o(r) fails on the sampled range")
    if not (p[-1] / grid[-1] < 0.5 * p[0] / grid[0]):
        base = rho
        rho = RateFunction(lambda r: math.sqrt(base(r) * tau(r)), f"sqrt({base.tag}*{tau.tag})")
    return rho


def build_counterexample(tau: RateFunction, rho: RateFunction, K: int) -> CounterexampleSet:
    """Greedy minimal subsequence ``n_0 < ... < n_{K-1}`` (``K`` points)."""
    if K < 1:
        raise DomainError("K must be at least 1")
    rho = check_rates(tau, rho)
    kap = lambda r: kappa(tau, rho, r)  # noqa: E731
    n = max(1, math.ceil(kap(0.0)))
    steps = 0

    def radius(n):
        return radius_solve(kap, n)

    while True:
        r = radius(n)
        if tau(r) < r and n <= r:
            break
        n += 1
        steps += 1
        if steps > ITERATION_CAP:
            raise InfeasibleError("no admissible n_0 within the iteration cap")
    indices, radii = [n], [r]
    total = n
    for k in range(1, K):
        n = indices[-1] + 1
        while True:
            r = radius(n)
            if 2 ** k * n <= r and total <= rho(r) - kap(r):
                break
            n += 1
            steps += 1
            if steps > ITERATION_CAP:
                raise InfeasibleError(f"n_{k} not found within {ITERATION_CAP} steps")
        indices.append(n)
        radii.append(r)
        total += n
    pts = PointMultiset([_point(tau, r) for r in radii], indices)
    cs = CounterexampleSet(indices, radii, pts, tau, rho)
    cs.check()
    return cs


@dataclass(frozen=True)
class ProfileRow:
    k: int
    n: int
    t: float
    p: float
    lower_bound: float


def obstruction_profile(cs: CounterexampleSet) -> list[ProfileRow]:
    rows = []
    for k, (n, r) in enumerate(zip(cs.indices, cs.radii)):
        t = cs.z(k).real
        p = float(phase_sum(cs.points, t))
        lb = cs.kappa(r) / cs.tau(r)
        if p < lb - 1e-9 * max(1.0, lb):
            raise ConsistencyError(f"p(t_{k}) = {p} below the bound {lb}")
        rows.append(ProfileRow(k, int(n), float(t), p, float(lb)))
    return rows


def counting_bound_holds(cs: CounterexampleSet, radii) -> bool:
    """``n(r) <= rho(r)`` at the given radii."""
    return all(counting_function(cs.points, r) <= cs.rho(r) for r in radii)


def profile_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "n", "t", "p", "lower_bound"])
    for row in rows:
        w.writerow([row.k, row.n, format(row.t, ".17g"), format(row.p, ".17g"),
                    format(row.lower_bound, ".17g")])
    return buf.getvalue()
