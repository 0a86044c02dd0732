"""Paley-Wiener interpolation ``g(0) = 0, g(l) = l exp(-i sigma l)``.

The interpolant is ``g = H * sum_n F_n`` where ``H`` vanishes on the nodes
and each block

    F_n(z) = sum_{l in block n} T(l) / (H'(l) (z - l))

equals ``(1/2 pi i) oint T(w) / (H(w) (z - w)) dw`` around the block.  The
nodes are first moved down by ``s0`` and an extra node ``-s0`` (target 0)
is added, so ``H`` never vanishes near the real axis and ``g(0) = 0`` is
one of the interpolation conditions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .analytics import PointMultiset, band_limit_residual
from .clusters import (ClusterDecomposition, StripPartition, build_clusters,
                       loop_nodes, strip_partition)
from .errors import BoundaryZeroError, DegenerateError, DomainError
from .evaluator import AnalyticEvaluator, cauchy_eval, log_abs_sin, product_rule
from .lk import LKProduct, epsilon_schedule, lk_config_for_type
from .zeros import Rectangle, locate_zeros, winding_count

RESIDUAL_TOL = 1e-8


def G(sigma: float, z):
    """``z exp(-i sigma z)``."""
    z = np.asarray(z, dtype=complex)
    out = z * np.exp(-1j * sigma * z)
    return complex(out) if out.ndim == 0 else out


def _target(sigma: float, target: Callable | None):
    return target if target is not None else (lambda w: G(sigma, w))


def _residue_coefficients(H, lam: np.ndarray, targets: np.ndarray) -> np.ndarray:
    hv, hd = H(lam)
    hv, hd = np.asarray(hv, dtype=complex), np.asarray(hd, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(hd)))) if hd.size else 1.0
    if np.any(np.abs(hd) < 1e-13 * scale):
        raise DegenerateError("H'(l) vanishes at a node: split multiple nodes first")
    if np.any(np.abs(hv) > 1e-10 * np.abs(hd) * (1.0 + np.abs(lam))):
        raise DomainError("block member is not a zero of H")
    return targets / hd


def residue_block(H: AnalyticEvaluator, members: PointMultiset, sigma: float, z, *,
                  target: Callable | None = None):
    """``F(z) = sum T(l) / (H'(l) (z - l))``, members in stored order."""
    lam = members.expanded()
    if np.any(members.multiplicities > 1):
        raise DegenerateError("multiple nodes are not simple zeros of H")
    coef = _residue_coefficients(H, lam, np.asarray(_target(sigma, target)(lam), dtype=complex))
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    for c, l in zip(coef, lam):
        out = out + c / (z - l)
    return complex(out) if out.ndim == 0 else out


def contour_block(H: AnalyticEvaluator, loops, sigma: float, z, *,
                  target: Callable | None = None, rtol: float = 1e-10, max_panels: int = 512):
    """``(1/2 pi i) oint T(w) / (H(w) (z - w)) dw`` over closed chains.

    ``loops`` is one chain (list of arcs/segments) or a list of chains.
    Panels per piece are doubled until two successive results differ by
    less than ``rtol`` relative to the result (or to the integral of the
    absolute integrand when the result is tiny).
    """
    if loops and not isinstance(loops[0], (list, tuple)):
        loops = [loops]
    tfun = _target(sigma, target)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    scalar = np.ndim(z) == 1 and z.size == 1

    def rule(panels):
        w, dw = np.concatenate([loop_nodes(lp, 32, panels)[0] for lp in loops]), \
            np.concatenate([loop_nodes(lp, 32, panels)[1] for lp in loops])
        hv = np.asarray(H(w)[0], dtype=complex)
        if np.min(np.abs(hv)) < 1e-13 * np.max(np.abs(hv)):
            raise BoundaryZeroError("H vanishes on the contour")
        q = np.asarray(tfun(w), dtype=complex) / hv * dw
        terms = q[:, None] / (z[None, :] - w[:, None])
        return terms.sum(axis=0) / (2j * math.pi), np.abs(terms).sum(axis=0) / (2 * math.pi)

    prev, _ = rule(1)
    panels = 2
    while True:
        cur, scale = rule(panels)
        ref = np.maximum(np.abs(cur), 1e-6 * scale)
        if np.all(np.abs(cur - prev) <= rtol * ref) or panels >= max_panels:
            break
        prev, panels = cur, 2 * panels
    return complex(cur[0]) if scalar else cur.reshape(z.shape)


# ---------------------------------------------------------------- blocks

@dataclass
class Block:
    """Nodes with their residue coefficients and the enclosing contour."""

    nodes: np.ndarray
    coef: np.ndarray
    loops: list
    label: int

    def __call__(self, z):
        val = np.zeros(z.shape, dtype=complex)
        der = np.zeros(z.shape, dtype=complex)
        for c, l in zip(self.coef, self.nodes):
            d = z - l
            val = val + c / d
            der = der - c / (d * d)
        return val, der


def partition_blocks(H, partition, targets: Callable) -> list[Block]:
    """Residue blocks in partition order (anchor order or strip order)."""
    blocks = []
    if isinstance(partition, ClusterDecomposition):
        parts = [(c.members, c.chains()) for c in partition.components]
    else:
        parts = [(g, [c]) for g, c in zip(partition.groups, partition.contours)]
    for n, (members, loops) in enumerate(parts):
        lam = members.expanded()
        coef = _residue_coefficients(H, lam, np.asarray(targets(lam), dtype=complex)) \
            if lam.size else np.zeros(0, complex)
        blocks.append(Block(lam, coef, loops, n))
    return blocks


def _block_sum(blocks, z, grouping: str):
    if grouping == "flat":
        order = [blocks]
    elif grouping == "parity":
        order = [blocks[:1], blocks[2::2], blocks[1::2]]
    elif grouping == "reversed":
        order = [blocks[::-1]]
    else:
        raise DomainError(f"unknown grouping {grouping!r}")
    val = np.zeros(z.shape, dtype=complex)
    der = np.zeros(z.shape, dtype=complex)
    for group in order:
        gv = np.zeros(z.shape, dtype=complex)
        gd = np.zeros(z.shape, dtype=complex)
        for b in group:
            v, d = b(z)
            gv, gd = gv + v, gd + d
        val, der = val + gv, der + gd
    return val, der


class Interpolant(AnalyticEvaluator):
    """``g~(z) = H(z) sum_n F_n(z)`` with exact node values.

    Within ``0.1 rho`` of a node (``rho`` = local Cauchy radius) value and
    derivative come from the Cauchy integral on the circle of radius
    ``rho``, which avoids the ``0 * inf`` cancellation of ``H * F``.
    """

    def __init__(self, H, blocks, targets: Callable, grouping: str = "flat"):
        self.H = H
        self.blocks = blocks
        self.targets = targets
        self.grouping = grouping
        nodes = [b.nodes for b in blocks if b.nodes.size]
        self.nodes = np.concatenate(nodes) if nodes else np.zeros(0, complex)
        self.rho = _cauchy_radii(self.nodes)

    def raw(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            hv, hd = self.H(z)
            s, sd = _block_sum(self.blocks, z, self.grouping)
            return hv * s, hd * s + hv * sd

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        val, der = self.raw(z)
        if self.nodes.size == 0:
            return val, der
        val, der = np.array(val), np.array(der)
        flat_z = z.ravel()
        dist = np.abs(flat_z[:, None] - self.nodes[None, :])
        near = np.argmin(dist, axis=1)
        close = dist[np.arange(flat_z.size), near] < 0.1 * self.rho[near]
        vf, df = val.reshape(-1), der.reshape(-1)
        for j in np.flatnonzero(close):
            k = near[j]
            cv, cd = cauchy_eval(lambda w: self.raw(w)[0], self.nodes[k], self.rho[k], flat_z[j])
            vf[j], df[j] = cv, cd
            if flat_z[j] == self.nodes[k]:
                vf[j] = self.targets(self.nodes[k:k + 1])[0]
        return vf.reshape(z.shape), df.reshape(z.shape)

    def cauchy_value(self, z0: complex) -> complex:
        """``g~(z0)`` from its mean over a circle (never the node shortcut)."""
        d = np.abs(self.nodes - z0) if self.nodes.size else np.array([np.inf])
        rho = float(self.rho[np.argmin(d)]) if self.nodes.size else 0.1
        return complex(cauchy_eval(lambda w: self.raw(w)[0], z0, rho, np.array([z0]))[0][0])


def _cauchy_radii(nodes: np.ndarray) -> np.ndarray:
    if nodes.size <= 1:
        return np.full(nodes.size, 0.1)
    d = np.abs(nodes[:, None] - nodes[None, :])
    np.fill_diagonal(d, np.inf)
    return np.minimum(0.25 * d.min(axis=1), 0.1)


class Shifted(AnalyticEvaluator):
    """``z -> inner(z - s0)``."""

    def __init__(self, inner, s0: complex):
        self.inner, self.s0 = inner, s0

    def __call__(self, z):
        return self.inner(np.asarray(z, dtype=complex) - self.s0)


class JostCandidate(AnalyticEvaluator):
    """``f(z) = 1 - exp(i sigma z) g(z) / z``; Cauchy formula for ``|z| < 0.1``."""

    radius = 0.5

    def __init__(self, g, sigma: float):
        self.g, self.sigma = g, sigma

    def raw(self, z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            gv, gd = self.g(z)
            e = np.exp(1j * self.sigma * z)
            val = 1.0 - e * gv / z
            der = -e * (1j * self.sigma * gv / z + gd / z - gv / (z * z))
        return val, der

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        val, der = self.raw(z)
        near = np.abs(z) < 0.1
        if np.any(near):
            val, der = np.array(val), np.array(der)
            cv, cd = cauchy_eval(lambda w: self.raw(w)[0], 0.0, self.radius, z[near])
            val[near], der[near] = cv, cd
        return val, der


# ------------------------------------------------------------ generating H

def _sinc(u):
    small = np.abs(u) < 1e-3
    us = np.where(small, 1.0, u)
    v = np.where(small, 1 - u * u / 6 + u ** 4 / 120, np.sin(us) / us)
    d = np.where(small, -u / 3 + u ** 3 / 30, (us * np.cos(us) - np.sin(us)) / (us * us))
    return v, d


class SincPowerH(AnalyticEvaluator):
    """``prod (1 - z/l) (sin(dz)/(dz))^M`` with ``M = N + 1``, ``d = gamma/M``."""

    def __init__(self, nodes: PointMultiset, gamma: float):
        lam = nodes.expanded()
        if np.any(lam == 0):
            raise DomainError("generating function needs nonzero nodes")
        if not gamma > 0:
            raise DomainError("gamma must be positive")
        self.nodes = lam
        self.M = lam.size + 1
        self.delta = gamma / self.M
        self.gamma = gamma

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        lam = self.nodes.reshape((-1,) + (1,) * z.ndim)
        F = 1.0 - z / lam
        D = -1.0 / lam * np.ones_like(F)
        pv, pd = product_rule(F, D)
        sv, sd = _sinc(self.delta * z)
        sm = sv ** self.M
        smd = self.M * sv ** (self.M - 1) * sd * self.delta
        return pv * sm, pd * sm + pv * smd

    def log_abs(self, z):
        """``log|H(z)|`` without overflow for large ``|Im z|``."""
        z = np.asarray(z, dtype=complex)
        u = self.delta * z
        out = np.zeros(z.shape)
        with np.errstate(divide="ignore"):
            for lam in self.nodes:
                out = out + np.log(np.abs(1.0 - z / lam))
            small = np.abs(u) < 1e-3
            us = np.where(small, 1.0, u)
            ls = log_abs_sin(us) - np.log(np.abs(us))
            ls[small] = np.log(np.abs(_sinc(u[small])[0]))
        return out + self.M * ls


def sinc_power_H(lam: PointMultiset, gamma: float) -> SincPowerH:
    return SincPowerH(lam, gamma)


def lk_generating(nodes: PointMultiset, type_bound: float, K: int = 16) -> LKProduct:
    """Canonical product whose cosine factors have total type ``<= type_bound``."""
    cfg = lk_config_for_type(nodes, type_bound, K=K)
    return LKProduct(nodes, epsilon_schedule(cfg, nodes))


# ---------------------------------------------------------------- bundle

@dataclass
class Diagnostics:
    residuals: list = field(default_factory=list)
    max_residual: float = 0.0
    max_f_residual: float = 0.0
    g0: complex = 0j
    band_residual: float | None = None
    c_est: complex | None = None
    removed_zeros: list = field(default_factory=list)
    c: complex = 0j
    upper_winding: int | None = None
    ok: bool = True

    def to_json(self) -> str:
        def cx(z):
            return [float(z.real), float(z.imag)]
        doc = {
            "ok": self.ok,
            "max_residual": self.max_residual,
            "max_f_residual": self.max_f_residual,
            "g0": cx(self.g0),
            "band_residual": self.band_residual,
            "c_est": None if self.c_est is None else cx(self.c_est),
            "c": cx(self.c),
            "upper_winding": self.upper_winding,
            "removed_zeros": [cx(z) for z in self.removed_zeros],
            "residuals": [{"re": float(l.real), "im": float(l.imag), "g": rg, "f": rf}
                          for l, rg, rf in self.residuals],
        }
        return json.dumps(doc, indent=1)


@dataclass
class InterpolantBundle:
    H: AnalyticEvaluator
    partition: object
    g: AnalyticEvaluator
    f: AnalyticEvaluator
    sigma: float
    points: PointMultiset
    shift: complex
    g_shifted: Interpolant
    diagnostics: Diagnostics
    f1: AnalyticEvaluator | None = None


def build_interpolant(lam: PointMultiset, sigma: float, strategy: str = "cluster",
                      H_source: str = "lk", *, H_user: Callable | None = None,
                      A: float = 1.0, d: float = 0.5, h0: float = 2.0, radius: float = 1.0,
                      lk_fraction: float = 0.5, K: int = 16) -> InterpolantBundle:
    """Interpolate ``g(l) = G(l)`` on ``lam`` and ``g(0) = 0``; form ``f``.

    ``H_user`` (for ``H_source="user"``) maps the shifted node multiset to
    an evaluator vanishing on it.
    """
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    lam.require_lower()
    if np.any(lam.multiplicities > 1):
        raise DegenerateError("nodes must be distinct; split multiple points first")
    if strategy not in ("cluster", "strip"):
        raise DomainError(f"unknown strategy {strategy!r}")
    s0 = 2j if strategy == "cluster" else 1j
    nodes = PointMultiset(np.concatenate(([-s0], lam.locations - s0)))

    def targets(mu):
        return G(sigma, np.asarray(mu, dtype=complex) + s0)

    if H_source == "lk":
        H = lk_generating(nodes, lk_fraction * sigma, K=K)
    elif H_source in ("sinc", "sinc_power"):
        H = sinc_power_H(nodes, sigma / 3.0)
    elif H_source == "user":
        if H_user is None:
            raise DomainError("H_source='user' needs H_user")
        H = H_user(nodes)
    else:
        raise DomainError(f"unknown H source {H_source!r}")

    if strategy == "cluster":
        partition = build_clusters(nodes, radius)
    else:
        partition = strip_partition(nodes, A, nodes, d, h0)
    grouping = "parity" if strategy == "strip" else "flat"
    gt = Interpolant(H, partition_blocks(H, partition, targets), targets, grouping)
    g = Shifted(gt, s0)
    f = JostCandidate(g, sigma)
    bundle = InterpolantBundle(H, partition, g, f, sigma, lam, s0, gt, Diagnostics())
    _fill_residuals(bundle)
    return bundle


def _fill_residuals(b: InterpolantBundle):
    diag = b.diagnostics
    rows = []
    for l in b.points.locations:
        gl = b.g_shifted.cauchy_value(l - b.shift)
        Gl = G(b.sigma, l)
        rg = abs(gl - Gl) / (1 + abs(Gl))
        # exp(i sigma l) amplifies any absolute error in g(l) by exp(sigma |Im l|),
        # so f is checked through its own evaluator
        fl = complex(b.f(np.array([l]))[0][0])
        rf = abs(fl) / (1 + abs(Gl) / abs(l))
        rows.append((complex(l), float(rg), float(rf)))
    diag.residuals = rows
    diag.max_residual = max((r[1] for r in rows), default=0.0)
    diag.max_f_residual = max((r[2] for r in rows), default=0.0)
    diag.g0 = b.g_shifted.cauchy_value(-b.shift)
    diag.ok = diag.max_residual <= RESIDUAL_TOL and diag.max_f_residual <= RESIDUAL_TOL


# ------------------------------------------------------- upper-zero removal

class RationalCorrection(AnalyticEvaluator):
    """``f1 = f * prod (z - w_j) / (z - z_j)`` with Cauchy evaluation near ``z_j``."""

    def __init__(self, f, poles: np.ndarray, zeros: np.ndarray):
        self.f = f
        self.poles = np.asarray(poles, dtype=complex)
        self.zeros = np.asarray(zeros, dtype=complex)
        if self.poles.size > 1:
            d = np.abs(self.poles[:, None] - self.poles[None, :])
            np.fill_diagonal(d, np.inf)
            self.rho = np.minimum(0.4 * d.min(axis=1), 1e-2)
        else:
            self.rho = np.full(self.poles.size, 1e-2)

    def raw(self, z):
        z = np.asarray(z, dtype=complex)
        fv, fd = self.f(z)
        # log-derivative of Q/P, summed in fixed order
        r = np.ones(z.shape, dtype=complex)
        dl = np.zeros(z.shape, dtype=complex)
        with np.errstate(all="ignore"):
            for p, q in zip(self.poles, self.zeros):
                r = r * (z - q) / (z - p)
                dl = dl + 1.0 / (z - q) - 1.0 / (z - p)
            return fv * r, fd * r + fv * r * dl

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        val, der = self.raw(z)
        if self.poles.size == 0:
            return val, der
        val, der = np.array(val), np.array(der)
        flat = z.ravel()
        vf, df = val.reshape(-1), der.reshape(-1)
        dist = np.abs(flat[:, None] - self.poles[None, :])
        near = np.argmin(dist, axis=1)
        close = dist[np.arange(flat.size), near] < 0.5 * self.rho[near]
        close |= ~np.isfinite(vf)
        for j in np.flatnonzero(close):
            k = near[j]
            cv, cd = cauchy_eval(lambda w: self.raw(w)[0], self.poles[k], self.rho[k], flat[j])
            vf[j], df[j] = cv, cd
        return vf.reshape(z.shape), df.reshape(z.shape)


def remove_upper_zeros(f: AnalyticEvaluator, search: Rectangle, mirror="conjugate", *,
                       tol: float = 1e-10, workers: int = 1):
    """Divide out the zeros of ``f`` in ``search`` (upper half-plane part).

    Returns ``(f1, c, zeros)`` with ``f1 = f Q/P``, ``P = prod (z - z_j)``,
    ``Q = prod (z - w_j)`` and ``c = sum z_j - sum w_j``, the constant for
    which ``z (Q - P) - c P`` has degree below ``N``.
    """
    if search.im_min < 0:
        raise DomainError("search rectangle must lie in the closed upper half-plane")
    report = locate_zeros(f, search, tol, workers=workers)
    zs = []
    for zero in report.zeros:
        if zero.location.imag <= 0:
            if abs(zero.location.imag) < 1e-8:
                raise BoundaryZeroError(f"f vanishes on the real axis near {zero.location}")
            continue
        zs.extend([zero.location] * zero.multiplicity)
    zs = np.array(zs, dtype=complex)
    if isinstance(mirror, str):
        if mirror != "conjugate":
            raise DomainError(f"unknown mirror {mirror!r}")
        ws = np.conj(zs)
    else:
        ws = np.asarray(mirror, dtype=complex)
        if ws.size != zs.size or np.any(ws.imag >= 0):
            raise DomainError("mirror points must be N points in the open lower half-plane")
    c = complex(math.fsum(zs.real) - math.fsum(ws.real),
                math.fsum(zs.imag) - math.fsum(ws.imag)) if zs.size else 0j
    f1 = RationalCorrection(f, zs, ws) if zs.size else f
    return f1, c, [complex(z) for z in zs]


def finish_bundle(b: InterpolantBundle, search: Rectangle, window: Rectangle,
                  half_width: float = 200.0, samples: int = 1 << 15, workers: int = 1):
    """Remove upper zeros, then fill the winding and band-limit diagnostics."""
    f1, c, removed = remove_upper_zeros(b.f, search, workers=workers)
    b.f1 = f1
    diag = b.diagnostics
    diag.c, diag.removed_zeros = c, removed
    diag.upper_winding = winding_count(f1, window)
    # the constant of z (f1 - 1) is known exactly, so it is not estimated
    diag.c_est, diag.band_residual = band_limit_residual(f1, b.sigma, half_width, samples, c=c)
    return b
