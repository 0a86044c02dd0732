"""Jost solutions of ``-psi'' + q psi = k^2 psi`` for step potentials.

The Jost solution equals ``exp(ikx)`` for ``x >= sigma``.  It is carried
back to ``x = 0`` one step at a time with the exact transfer matrix of
``psi'' = -mu psi`` (``mu = k^2 - q``), written in terms of the entire
functions

    c(mu) = cos(l sqrt(mu)),    s(mu) = sin(l sqrt(mu)) / sqrt(mu),

so everything is entire in ``k`` and valid in the lower half-plane.
"""

from __future__ import annotations

import numpy as np

from .evaluator import AnalyticEvaluator
from .potential import Potential

SERIES_SWITCH = 0.25
_SERIES_REL = 1e-18
_MAX_TERMS = 40


def _series(x, ell):
    # c = sum (-x)^n/(2n)!, s = l sum (-x)^n/(2n+1)!, ds/dmu = l^3 sum_{n>=1} n (-x)^(n-1)(-1)/(2n+1)!
    one = np.ones_like(x)
    tc, ts = one.copy(), one.copy()
    sc, ss = one.copy(), one.copy()
    td = -one / 6.0
    sd = td.copy()
    for n in range(1, _MAX_TERMS):
        tc = tc * (-x) / ((2 * n - 1) * (2 * n))
        ts = ts * (-x) / ((2 * n) * (2 * n + 1))
        sc = sc + tc
        ss = ss + ts
        if n >= 2:
            # term n of ds/dmu series: (-1)^n n x^(n-1)/(2n+1)!
            td = td * (-x) * n / ((n - 1) * (2 * n) * (2 * n + 1))
            sd = sd + td
        if np.all(np.abs(tc) <= _SERIES_REL * np.abs(sc)) and \
                np.all(np.abs(ts) <= _SERIES_REL * np.abs(ss)) and \
                (n < 2 or np.all(np.abs(td) <= _SERIES_REL * np.abs(sd))):
            break
    return sc, ell * ss, ell**3 * sd


def trig_pair(mu, ell: float, *, derivative: bool = False, branch: int = 1):
    """Return ``(c, s)`` (and ``dc/dmu, ds/dmu`` if ``derivative``).

    Power series in ``mu l^2`` below ``|mu| l^2 = 1/4``, closed form with a
    fixed square-root branch above.  ``branch=-1`` flips the square root;
    results do not depend on it (both functions are even in ``sqrt(mu)``).
    """
    mu = np.asarray(mu, dtype=complex)
    x = mu * ell * ell
    small = np.abs(x) < SERIES_SWITCH
    c = np.empty_like(mu)
    s = np.empty_like(mu)
    ds = np.empty_like(mu)
    if np.any(small):
        c[small], s[small], ds[small] = _series(x[small], ell)
    big = ~small
    if np.any(big):
        m = mu[big]
        root = branch * np.sqrt(m)
        cb = np.cos(ell * root)
        sb = np.sin(ell * root) / root
        c[big] = cb
        s[big] = sb
        ds[big] = (ell * cb - sb) / (2.0 * m)
    if derivative:
        return c, s, -0.5 * ell * s, ds
    return c, s


def _propagate(p: Potential, k, with_k: bool, branch: int = 1):
    k = np.asarray(k, dtype=complex)
    e = np.exp(1j * k * p.sigma)
    psi = e
    dpsi = 1j * k * e
    if with_k:
        psi_k = 1j * p.sigma * e
        dpsi_k = (1j - k * p.sigma) * e
    for ell, q in reversed(p.segments):
        mu = k * k - q
        if with_k:
            c, s, c_mu, s_mu = trig_pair(mu, ell, derivative=True, branch=branch)
            c_k = 2.0 * k * c_mu
            s_k = 2.0 * k * s_mu
            mus_k = 2.0 * k * (s + mu * s_mu)
            new_psi_k = c_k * psi + c * psi_k - s_k * dpsi - s * dpsi_k
            new_dpsi_k = mus_k * psi + mu * s * psi_k + c_k * dpsi + c * dpsi_k
            psi_k, dpsi_k = new_psi_k, new_dpsi_k
        else:
            c, s = trig_pair(mu, ell, branch=branch)
        psi, dpsi = c * psi - s * dpsi, mu * s * psi + c * dpsi
    if with_k:
        return psi, dpsi, psi_k
    return psi, dpsi


def jost_value(p: Potential, k, *, branch: int = 1):
    """Jost function ``w(k) = psi(k, 0)`` and ``psi'(k, 0)`` (x-derivative)."""
    return _propagate(p, k, with_k=False, branch=branch)


def jost_k_derivative(p: Potential, k):
    """``dw/dk``, propagated exactly alongside the solution."""
    return _propagate(p, k, with_k=True)[2]


class JostFunction(AnalyticEvaluator):
    """``k -> (w(k), dw/dk)`` for a fixed potential."""

    domain = "C"

    def __init__(self, potential: Potential):
        self.potential = potential

    def __call__(self, k):
        psi, _, psi_k = _propagate(self.potential, k, with_k=True)
        return psi, psi_k

    def __repr__(self):
        return f"JostFunction({self.potential!r})"
