"""A point set with sparse counting function whose phase sum is unbounded.

Run: python demos/sharpness_obstruction.py
"""

from __future__ import annotations

from jostlab.analytics import counting_function
from jostlab.sharpness import build_counterexample, obstruction_profile, parse_rate


def main() -> None:
    tau, rho = parse_rate("log1p"), parse_rate("pow:0.5")
    cs = build_counterexample(tau, rho, 8)
    print(" k      n          r      p(t_k)   kappa/tau")
    for row, r in zip(obstruction_profile(cs), cs.radii):
        print(f"{row.k:2d} {row.n:6d} {r:10.1f} {row.p:11.4f} {row.lower_bound:11.4f}")
    # the counting function stays below rho although the phase sum keeps growing
    for r in cs.radii[1:]:
        print(f"n({r:10.1f}) = {counting_function(cs.points, r):5d} <= rho = {rho(r):8.2f}")


if __name__ == "__main__":
    main()
