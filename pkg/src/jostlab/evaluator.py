"""Uniform calling convention for entire functions.

Every entire function in the package (Jost functions, generating
functions ``H``, interpolants ``g`` and Jost candidates ``f``) is wrapped
as an :class:`AnalyticEvaluator`: calling it on a complex scalar or array
returns ``(value, derivative)`` with the same shape.
"""

from __future__ import annotations

from typing import Callable

import numpy as np


class AnalyticEvaluator:
    """Base class: ``f(z) -> (value, derivative)``, vectorised over ``z``."""

    domain = "C"

    def __call__(self, z):
        raise NotImplementedError

    def value(self, z):
        return self(z)[0]

    def derivative(self, z):
        return self(z)[1]


class FunctionEvaluator(AnalyticEvaluator):
    """Wrap a pair of numpy-aware callables as an evaluator.

    Parameters
    ----------
    func, deriv : callable
        Map complex arrays to complex arrays of the same shape.
    domain : str
        Free-text description of where the pair is valid.
    """

    def __init__(self, func: Callable, deriv: Callable, domain: str = "C"):
        self._func = func
        self._deriv = deriv
        self.domain = domain

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return (np.asarray(self._func(z), dtype=complex) * np.ones_like(z),
                np.asarray(self._deriv(z), dtype=complex) * np.ones_like(z))


def polynomial_evaluator(roots) -> FunctionEvaluator:
    """Monic polynomial ``prod (z - r)`` in factored form (no cancellation)."""
    roots = np.asarray(roots, dtype=complex).ravel()

    def func(z):
        out = np.ones_like(z)
        for r in roots:
            out = out * (z - r)
        return out

    def deriv(z):
        out = np.zeros_like(z)
        for j in range(roots.size):
            term = np.ones_like(z)
            for i, r in enumerate(roots):
                if i != j:
                    term = term * (z - r)
            out = out + term
        return out

    return FunctionEvaluator(func, deriv, domain="C (polynomial)")


def cauchy_eval(func: Callable, center: complex, radius: float, z, nodes: int = 64):
    """Evaluate an entire function and its derivative inside a circle.

    Uses the trapezoidal rule on ``|w - center| = radius`` applied to the
    Cauchy integral formula; exponentially accurate for ``|z - center|``
    well below ``radius``.  ``func`` is only sampled on the circle, which
    is how removable singularities and pole/zero cancellations are
    evaluated without loss of digits.
    """
    z = np.asarray(z, dtype=complex)
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    w = center + radius * np.exp(1j * theta)
    fw = np.asarray(func(w), dtype=complex)
    # dw = i (w - center) dtheta, so (1/2πi)∮ f/(w-z) dw = mean(f (w-c)/(w-z))
    d = w[:, None] - z.ravel()[None, :]
    weight = (w - center)[:, None]
    val = np.mean(fw[:, None] * weight / d, axis=0)
    der = np.mean(fw[:, None] * weight / d**2, axis=0)
    return val.reshape(z.shape), der.reshape(z.shape)


def product_rule(factors, derivs):
    """Value and derivative of ``prod F_i`` from stacked factor arrays.

    ``factors`` and ``derivs`` have the factor index on axis 0.  Prefix and
    suffix products give ``sum_i D_i prod_{j != i} F_j`` without dividing,
    so exact zeros of individual factors are handled.
    """
    F = np.asarray(factors, dtype=complex)
    D = np.asarray(derivs, dtype=complex)
    if F.shape[0] == 0:
        shape = F.shape[1:]
        return np.ones(shape, dtype=complex), np.zeros(shape, dtype=complex)
    ones = np.ones((1,) + F.shape[1:], dtype=complex)
    prefix = np.concatenate((ones, np.cumprod(F, axis=0)[:-1]), axis=0)
    suffix = np.concatenate((np.cumprod(F[::-1], axis=0)[::-1][1:], ones), axis=0)
    value = prefix[-1] * F[-1]
    deriv = np.sum(D * prefix * suffix, axis=0)
    return value, deriv


def log_abs_cos(u):
    """``log|cos u|`` without overflow for large ``|Im u|``."""
    u = np.asarray(u, dtype=complex)
    v = np.where(u.imag > 0, -u, u)
    small = np.abs(u) < 1e-8
    with np.errstate(divide="ignore"):
        out = -v.imag - np.log(2.0) + np.log(np.abs(1.0 + np.exp(-2j * v)))
    return np.where(small, (-0.5 * u * u).real, out)


def log_abs_sin(u):
    """``log|sin u|`` without overflow for large ``|Im u|``."""
    u = np.asarray(u, dtype=complex)
    v = np.where(u.imag > 0, -u, u)
    with np.errstate(divide="ignore"):
        return -v.imag - np.log(2.0) + np.log(np.abs(1.0 - np.exp(-2j * v)))
