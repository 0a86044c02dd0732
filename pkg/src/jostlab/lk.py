"""Canonical products with cosine convergence factors (LK products).

For a finite multiset ``L`` with counting function ``n`` the construction
uses

    theta(t) = int_0^inf n(u)/u * t^2/(t^2+u^2) du = sum m/2 log(1 + t^2/|l|^2)
    xi(t)    = int_t^inf n(u)/u^2 du = sum_{|l|>=t} m/|l| + n(t)/t
    psi(t)   = C int_a^t w(u)/u du,      gamma(t) = int_t^inf w(u)/u^2 du

with a majorant ``w >= theta + 2 log t`` and the schedule
``psi(1/eps_k) = k``.  The generating function is

    H(z) = prod (1 - z^2/l^2) * prod_{k<=K} cos(eps_k z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from .analytics import PointMultiset, counting_function
from .errors import DivergenceError, DomainError, InfeasibleError
from .evaluator import AnalyticEvaluator, log_abs_cos, product_rule
from .zeros import Rectangle

# magnitude of the root of cos(exp(-C)) = 1/e (the root itself is negative)
C_DEFAULT = abs(math.log(math.acos(1.0 / math.e)))

_T_CAP = 1e200


def theta(s: PointMultiset, t):
    """Closed form of the theta integral; ``t`` scalar or array."""
    rho = s.moduli
    if np.any(rho == 0):
        raise DomainError("theta is undefined for a point at the origin")
    t = np.asarray(t, dtype=float)
    out = 0.5 * np.sum(s.multiplicities * np.log1p((t[..., None] / rho) ** 2), axis=-1)
    return float(out) if out.ndim == 0 else out


def xi(s: PointMultiset, t):
    """``sum_{|l| >= t} m/|l| + n(t)/t`` for ``t > 0``."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("xi needs t > 0")
    rho = s.moduli
    if np.any(rho == 0):
        raise DomainError("xi is undefined for a point at the origin")
    m = s.multiplicities
    far = rho >= t[..., None]
    out = np.sum(np.where(far, m / rho, 0.0), axis=-1) + np.sum(np.where(far, 0, m), axis=-1) / t
    return float(out) if out.ndim == 0 else out


def default_majorant(s: PointMultiset) -> Callable:
    """``w(t) = theta(t) + 2 log(max(t, e))``."""
    def w(t):
        t = np.asarray(t, dtype=float)
        return theta(s, t) + 2.0 * np.log(np.maximum(t, math.e))
    return w


@dataclass(frozen=True)
class LKConfig:
    """Parameters of the schedule.

    ``majorant`` maps a multiset to ``w``; ``None`` means
    :func:`default_majorant`.  ``majorant_slope`` bounds ``dw/dlog t`` for
    the tail estimate of ``gamma``; ``None`` estimates it numerically.
    """

    a: float = 10.0
    C: float = C_DEFAULT
    K: int = 16
    truncation_tol: float = 1e-12
    majorant: Callable | None = None
    majorant_slope: float | None = None

    def __post_init__(self):
        if not self.a > 0 or not self.C > 0:
            raise DomainError("a and C must be positive")
        if self.K < 0:
            raise DomainError("K must be non-negative")

    def w(self, s: PointMultiset) -> Callable:
        return (self.majorant or default_majorant)(s)

    def slope(self, s: PointMultiset, w, T: float) -> float:
        if self.majorant_slope is not None:
            return self.majorant_slope
        if self.majorant is None:
            return float(s.total) + 2.0
        return max(0.0, float(w(2 * T) - w(T)) / math.log(2.0))


def _log_integral(func, lo: float, hi: float) -> float:
    """``int_lo^hi func(e^v) dv`` in the log variable."""
    if hi <= lo:
        return 0.0
    val, _ = integrate.quad(lambda v: float(func(math.exp(v))), math.log(lo), math.log(hi),
                            epsabs=0.0, epsrel=1e-13, limit=400)
    return val


def psi(cfg: LKConfig, s: PointMultiset, t: float) -> float:
    """``C int_a^t w(u)/u du``; zero below ``a``."""
    if t <= cfg.a:
        return 0.0
    w = cfg.w(s)
    return cfg.C * _log_integral(w, cfg.a, t)


def gamma(cfg: LKConfig, s: PointMultiset, t: float) -> float:
    """``int_t^inf w(u)/u^2 du`` truncated where the tail bound drops below tolerance."""
    if not t > 0:
        raise DomainError("gamma needs t > 0")
    w = cfg.w(s)
    T = 2.0 * t
    while True:
        # w(u) <= w(T) + slope log(u/T) beyond T integrates to (w(T) + slope)/T
        tail = (float(w(T)) + cfg.slope(s, w, T)) / T
        if tail < cfg.truncation_tol or T >= _T_CAP:
            break
        T *= 2.0
    body = _log_integral(lambda u: w(u) / u, t, T)
    if tail >= cfg.truncation_tol and tail > 0.1 * abs(body):
        raise DivergenceError(f"gamma({t}) tail estimate {tail:.3g} does not vanish")
    return body


def psi_gamma(cfg: LKConfig, s: PointMultiset, t: float):
    if t < cfg.a:
        raise DomainError(f"psi is defined for t >= a = {cfg.a}")
    return psi(cfg, s, t), gamma(cfg, s, t)


@dataclass(frozen=True)
class EpsilonSchedule:
    eps: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def K(self) -> int:
        return int(self.eps.size)

    @property
    def type_bound(self) -> float:
        """``sum eps_k``: exponential type of the cosine product."""
        return math.fsum(self.eps.tolist())


def epsilon_schedule(cfg: LKConfig, s: PointMultiset) -> EpsilonSchedule:
    """Solve ``psi(1/eps_k) = k`` for ``k = 1..K``."""
    w = cfg.w(s)
    g = lambda v: float(w(math.exp(v)))  # noqa: E731
    ts = []
    lo = math.log(cfg.a)
    for _ in range(cfg.K):
        # psi(t_k) - psi(t_{k-1}) = 1
        step = lambda v, lo=lo: cfg.C * integrate.quad(  # noqa: E731
            g, lo, v, epsabs=0.0, epsrel=1e-13, limit=400)[0] - 1.0
        hi = lo + 1.0
        while step(hi) < 0:
            hi = lo + 2.0 * (hi - lo)
            if hi > math.log(_T_CAP):
                raise InfeasibleError(
                    f"psi stays below {len(ts) + 1} up to t = 1e200; increase C or the majorant")
        v = optimize.brentq(step, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        ts.append(math.exp(v))
        lo = v
    return EpsilonSchedule(1.0 / np.array(ts, dtype=float))


def _ordered(s: PointMultiset):
    order = np.lexsort((np.angle(s.locations), s.moduli))
    return np.repeat(s.locations[order], s.multiplicities[order])


class LKProduct(AnalyticEvaluator):
    """``H(z) = prod (1 - z^2/l^2) prod cos(eps_k z)`` as an evaluator.

    Factor order is fixed (by ``|l|``, then argument, then ``k``) so results
    are reproducible bit for bit.
    """

    def __init__(self, s: PointMultiset, sched: EpsilonSchedule):
        if np.any(s.locations == 0):
            raise DomainError("canonical product needs nonzero points")
        self.points = _ordered(s)
        self.eps = np.asarray(sched.eps, dtype=float)

    def _factors(self, z):
        lam = self.points.reshape((-1,) + (1,) * z.ndim)
        eps = self.eps.reshape((-1,) + (1,) * z.ndim)
        lam2 = lam * lam
        F = np.concatenate(((lam - z) * (lam + z) / lam2, np.cos(eps * z)))
        D = np.concatenate((-2.0 * z / lam2 * np.ones_like(lam), -eps * np.sin(eps * z)))
        return F, D

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return product_rule(*self._factors(z))

    def log_abs(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape)
        with np.errstate(divide="ignore"):
            for lam in self.points:
                out = out + np.log(np.abs((lam - z) * (lam + z))) - 2.0 * np.log(abs(lam))
        for e in self.eps:
            out = out + log_abs_cos(e * z)
        return out

    def cos_log_abs(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape)
        for e in self.eps:
            out = out + log_abs_cos(e * z)
        return out

    def poly_log_abs(self, z):
        return self.log_abs(z) - self.cos_log_abs(z)


def lk_H(s: PointMultiset, sched: EpsilonSchedule, z):
    """``(value, log|value|)``; exact zeros give ``value == 0`` and ``-inf``."""
    H = LKProduct(s, sched)
    z = np.asarray(z, dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        value = H(z)[0]
    return value, H.log_abs(z)


def lk_config_for_type(s: PointMultiset, type_bound: float, K: int = 16, **kw) -> LKConfig:
    """Smallest ``a`` in ``1, 2, 4, ...`` whose schedule has ``sum eps_k <= type_bound``."""
    a = 1.0
    while a < 1e12:
        cfg = LKConfig(a=a, K=K, **kw)
        if epsilon_schedule(cfg, s).type_bound <= type_bound:
            return cfg
        a *= 2.0
    raise InfeasibleError(f"no a <= 1e12 gives type <= {type_bound}")


def cos_lemma_holds(z):
    """``|cos z| >= |Im z| / (2|z|)`` elementwise (``z != 0``)."""
    z = np.asarray(z, dtype=complex)
    return np.abs(np.cos(z)) >= np.abs(z.imag) / (2.0 * np.abs(z))


def cos_lemma_bound(cfg: LKConfig, s: PointMultiset, z) -> np.ndarray:
    """``-|z| gamma(2|z|) - psi(2|z|) log|z|`` (``psi`` is zero below ``a``)."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    r = np.abs(z)
    out = np.empty(z.shape)
    for i, ri in np.ndenumerate(r):
        out[i] = -ri * gamma(cfg, s, 2 * ri) - psi(cfg, s, 2 * ri) * math.log(ri)
    return out


def prod_lemma_bound(s: PointMultiset, z) -> np.ndarray:
    """``-|z| xi(2|z|) - n(2|z|) log|z|``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    r = np.abs(z)
    n2 = np.array([counting_function(s, 2 * ri) for ri in r.ravel()]).reshape(r.shape)
    return -r * xi(s, 2 * r) - n2 * np.log(r)


def admissible(s: PointMultiset, z):
    """``dist(z, L) >= 1``, ``dist(-z, L) >= 1`` and ``|Im z| >= 1``."""
    z = np.asarray(z, dtype=complex)
    if len(s):
        d_plus = np.min(np.abs(z[..., None] - s.locations), axis=-1)
        d_minus = np.min(np.abs(-z[..., None] - s.locations), axis=-1)
    else:
        d_plus = d_minus = np.full(z.shape, np.inf)
    return (d_plus >= 1) & (d_minus >= 1) & (np.abs(z.imag) >= 1)


@dataclass
class LowerBoundReport:
    min_ratio: float
    argmin: complex
    kept: int
    sampled: int


def verify_lower_bound(s: PointMultiset, sched: EpsilonSchedule, alpha: float,
                       region: Rectangle, grid: int) -> LowerBoundReport:
    """Minimum of ``log|H(z)| / (|z|^alpha log|z|)`` over admissible grid points."""
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    xs = np.linspace(region.re_min, region.re_max, grid)
    ys = np.linspace(region.im_min, region.im_max, grid)
    z = (xs[None, :] + 1j * ys[:, None]).ravel()
    keep = admissible(s, z) & (np.abs(z) > 1.0)
    if not np.any(keep):
        raise DomainError("no admissible grid point in the region")
    zk = z[keep]
    la = LKProduct(s, sched).log_abs(zk)
    ratio = la / (np.abs(zk) ** alpha * np.log(np.abs(zk)))
    i = int(np.argmin(ratio))
    return LowerBoundReport(float(ratio[i]), complex(zk[i]), int(keep.sum()), int(z.size))
