"""From prescribed zeros to a Jost-type candidate function.

Builds g with g(l) = l exp(-i sigma l) on a finite set, forms
f = 1 - exp(i sigma z) g(z)/z, removes the zeros of f in the upper
half-plane and prints the certificates.

Run: python demos/interpolation_pipeline.py
"""

from __future__ import annotations

import numpy as np

from jostlab.analytics import PointMultiset
from jostlab.interpolation import build_interpolant, finish_bundle
from jostlab.zeros import Rectangle


def show(title: str, lam: PointMultiset, sigma: float, strategy: str, source: str) -> None:
    b = build_interpolant(lam, sigma, strategy, source)
    finish_bundle(b, Rectangle(-70, 70, 0, 70), Rectangle(-50, 50, 0, 50))
    d = b.diagnostics
    print(f"== {title}")
    print(f"   nodes: {len(lam)}, sigma = {sigma}, strategy = {strategy}, H from {source}")
    print(f"   max |g(l) - G(l)| / (1 + |G(l)|): {d.max_residual:.2e}")
    print(f"   max |f(l)| (scaled):               {d.max_f_residual:.2e}")
    print(f"   |g(0)|:                            {abs(d.g0):.2e}")
    print(f"   upper zeros removed: {len(d.removed_zeros)}, c = {d.c:.6g}")
    print(f"   winding of f1 over the upper window: {d.upper_winding}")
    print(f"   band-limit residual of z(f1 - 1) - c: {d.band_residual:.2e}")
    print(f"   f1 at the nodes: {np.max(np.abs(b.f1(lam.locations)[0])):.2e}")


def main() -> None:
    j = np.arange(8)
    show("clusters around an LK product", PointMultiset(-1j * (2 + 18 * j * j / 49)), 2.0,
         "cluster", "lk")
    show("strips of an angle, sinc-power H",
         PointMultiset([0.5 - 2j, -1 - 3j, -4.5j, 1.5 - 6j, -2 - 8j, 2.5 - 11j]), 3.0,
         "strip", "sinc")


if __name__ == "__main__":
    main()
