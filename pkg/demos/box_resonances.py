"""Resonances of a square well and the statistics built from them.

Run: python demos/box_resonances.py
"""

from __future__ import annotations

import math

from jostlab.analytics import (PointMultiset, blaschke_partial_sum, counting_function,
                               log_strip_clearance)
from jostlab.jost import JostFunction
from jostlab.potential import Potential
from jostlab.zeros import Rectangle, locate_zeros


def main() -> None:
    box = Potential.box(1.0, 4.0)
    report = locate_zeros(JostFunction(box), Rectangle(-200, 200, -200, -0.01), 1e-10)
    res = PointMultiset.from_report(report)
    print(f"{report.total_count} resonances with |Re| <= 200")
    print("first few in the right half-plane:")
    for z in sorted(res.locations, key=abs)[:10]:
        if z.real > 0:
            print(f"  {z.real:12.8f} {z.imag:+12.8f}i")

    # zeros fill a logarithmic curve; their count grows like (2/pi) * width * R
    for R in (25.0, 50.0, 100.0, 200.0):
        n = counting_function(res, R)
        print(f"N({R:5.0f}) = {n:4d}   ratio to (2/pi) R: {n / (2 * R / math.pi):.4f}")

    for R in (50.0, 100.0, 200.0):
        print(f"Blaschke partial sum up to {R:5.0f}: {blaschke_partial_sum(res, R):.6f}")
    print(f"log-strip clearance: {log_strip_clearance(res):.4f}")


if __name__ == "__main__":
    main()
