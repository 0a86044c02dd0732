"""Command-line front end: ``jostlab resonances | interpolate | sharpness``.

Exit status is 0 on success, 1 for bad input and 2 when a quality
threshold is missed (diagnostics are still written).  Every file written
with ``--out`` gets a ``<out>.manifest.json`` sibling recording the
command, parameters, version, wall time and input hashes; the data files
themselves contain no timestamps and are byte-reproducible.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import (PointMultiset, blaschke_sum, counting_function, log_strip_clearance)
from .errors import (BoundaryZeroError, ConsistencyError, DivergenceError, DomainError,
                     InfeasibleError, JostLabError, ParseError, PreconditionError)
from .interpolation import build_interpolant, finish_bundle
from .jost import JostFunction
from .potential import parse_potential, support_diameter
from .sharpness import build_counterexample, obstruction_profile, parse_rate, profile_csv
from .zeros import Rectangle, locate_zeros

EXIT_OK, EXIT_INPUT, EXIT_QUALITY = 0, 1, 2
MAX_NODES = 64
OVERFLOW_CAP = 700.0
SPLIT_SPACING = 1e-4

_INPUT_ERRORS = (ParseError, DomainError, PreconditionError, OSError, ValueError)
_QUALITY_ERRORS = (InfeasibleError, BoundaryZeroError, ConsistencyError, DivergenceError)


class InputError(Exception):
    """Command-line input rejected before any computation."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_bytes(text.encode("utf-8"))


def _manifest(out: str | None, command: str, params: dict, inputs: dict, t0: float):
    if out is None:
        return
    doc = {"command": command, "params": params, "version": __version__,
           "wall_time": time.perf_counter() - t0,
           "input_hashes": {k: _sha256(Path(v)) for k, v in sorted(inputs.items())}}
    Path(out + ".manifest.json").write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n",
                                            encoding="utf-8")


def _info(args, text: str):
    # keep stdout for the table when no --out is given
    print(text, file=sys.stdout if args.out else sys.stderr)


# ------------------------------------------------------------ resonances

def cmd_resonances(args) -> int:
    t0 = time.perf_counter()
    pot = parse_potential(Path(args.potential).read_bytes())
    region = Rectangle.parse(args.region)
    if not args.tol > 0:
        raise InputError("--tol must be positive")
    reach = max(abs(region.im_min), abs(region.im_max)) * pot.sigma
    if reach > OVERFLOW_CAP:
        raise InputError(f"|Im k| * sigma = {reach:g} exceeds {OVERFLOW_CAP:g}; shrink the region")
    report = locate_zeros(JostFunction(pot), region, args.tol, workers=args.threads)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re", "im", "multiplicity", "abs_w"])
    for z in report.zeros:
        w.writerow([_fmt(z.location.real), _fmt(z.location.imag), z.multiplicity, _fmt(z.residual)])
    _emit(buf.getvalue(), args.out)

    res = PointMultiset.from_report(report)
    lower = res.select(res.locations.imag < 0)
    _info(args, f"zeros: {report.total_count}")
    _info(args, f"blaschke_sum: {_fmt(blaschke_sum(lower))}")
    rmax = max(abs(complex(x, y)) for x in (region.re_min, region.re_max)
               for y in (region.im_min, region.im_max))
    for r in np.linspace(0.0, rmax, 6)[1:]:
        _info(args, f"N({_fmt(r)}): {counting_function(lower, r)}")
    _info(args, f"log_strip_clearance: {_fmt(log_strip_clearance(lower))}")
    status = EXIT_OK
    if args.count_check is not None:
        R = args.count_check
        ell = support_diameter(pot)
        if ell == 0:
            raise InputError("--count-check needs a non-free potential")
        ratio = counting_function(lower, R) / (2.0 / math.pi * ell * R)
        ok = 0.9 <= ratio <= 1.1
        _info(args, f"count_check N({_fmt(R)})/((2/pi) l_q R): {_fmt(ratio)} "
                    f"{'PASS' if ok else 'FAIL'}")
        status = EXIT_OK if ok else EXIT_QUALITY
    _manifest(args.out, "resonances",
              {"potential": args.potential, "region": args.region, "tol": args.tol,
               "threads": args.threads, "count_check": args.count_check},
              {"potential": args.potential}, t0)
    return status


# ----------------------------------------------------------- interpolate

def read_points(path: str) -> PointMultiset:
    """Points file: ``re,im,mult`` rows; an optional header row is skipped."""
    locs, mults = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise ParseError(f"line {i + 1}: expected re,im,mult")
            try:
                re_, im_, m = float(row[0]), float(row[1]), float(row[2])
            except ValueError:
                if i == 0:
                    continue
                raise ParseError(f"line {i + 1}: not numeric") from None
            if m != int(m) or m < 1:
                raise ParseError(f"line {i + 1}: multiplicity must be a positive integer")
            locs.append(complex(re_, im_))
            mults.append(int(m))
    return PointMultiset(locs, mults)


def cmd_interpolate(args) -> int:
    t0 = time.perf_counter()
    pts = read_points(args.points)
    if len(pts) == 0:
        raise InputError("no points")
    if np.any(pts.locations.imag >= 0):
        raise InputError("points must lie in the open lower half-plane")
    if pts.total > MAX_NODES:
        raise InputError(f"{pts.total} nodes exceed the cap of {MAX_NODES}")
    if not args.sigma > 0:
        raise InputError("--sigma must be positive")
    # multiple points become simple nodes on a short horizontal segment
    nodes = pts.split_multiple(SPLIT_SPACING)
    source = "sinc" if args.h_source == "sinc" else "lk"
    bundle = build_interpolant(nodes, args.sigma, args.strategy, source)
    half_width = max(200.0, 40.0 * math.pi / args.sigma)
    finish_bundle(bundle, Rectangle.parse(args.search), Rectangle.parse(args.window),
                  half_width=half_width, workers=args.threads)
    d = bundle.diagnostics
    ok = (d.max_residual <= 1e-8 and d.max_f_residual <= 1e-8 and abs(d.g0) <= 1e-12
          and d.upper_winding == 0 and d.band_residual <= args.band_tol)
    d.ok = bool(ok)
    _emit(d.to_json() + "\n", args.out)
    _info(args, f"max_residual: {_fmt(d.max_residual)}")
    _info(args, f"band_residual: {_fmt(d.band_residual)}")
    _info(args, f"upper_zeros_removed: {len(d.removed_zeros)}")
    _manifest(args.out, "interpolate",
              {"points": args.points, "sigma": args.sigma, "strategy": args.strategy,
               "h_source": args.h_source, "threads": args.threads, "search": args.search,
               "window": args.window, "band_tol": args.band_tol},
              {"points": args.points}, t0)
    return EXIT_OK if ok else EXIT_QUALITY


# ------------------------------------------------------------- sharpness

def cmd_sharpness(args) -> int:
    t0 = time.perf_counter()
    tau, rho = parse_rate(args.tau), parse_rate(args.rho)
    if args.K < 1:
        raise InputError("--K must be at least 1")
    cs = build_counterexample(tau, rho, args.K)
    rows = obstruction_profile(cs)
    _emit(profile_csv(rows), args.out)
    if args.set_json:
        Path(args.set_json).write_text(cs.to_json() + "\n", encoding="utf-8")
    _info(args, f"final_lower_bound: {_fmt(rows[-1].lower_bound)}")
    _manifest(args.out, "sharpness", {"tau": args.tau, "rho": args.rho, "K": args.K,
                                      "set_json": args.set_json}, {}, t0)
    return EXIT_OK


# ------------------------------------------------------------------ main

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jostlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("resonances", help="zeros of the Jost function in a rectangle")
    r.add_argument("--potential", required=True, help="JSON potential file")
    r.add_argument("--region", required=True, help="re0,re1,im0,im1")
    r.add_argument("--tol", type=float, default=1e-10)
    r.add_argument("--threads", type=int, default=1)
    r.add_argument("--out", help="CSV output path (default: stdout)")
    r.add_argument("--count-check", type=float, metavar="R",
                   help="check N(R) against (2/pi) l_q R")
    r.set_defaults(func=cmd_resonances)

    i = sub.add_parser("interpolate", help="build the interpolant and Jost candidate")
    i.add_argument("--points", required=True, help="CSV file of re,im,mult")
    i.add_argument("--sigma", type=float, required=True)
    i.add_argument("--strategy", choices=("cluster", "strip"), default="cluster")
    i.add_argument("--h-source", choices=("lk", "sinc"), default="lk")
    i.add_argument("--threads", type=int, default=1)
    i.add_argument("--search", default="-70,70,0,70", help="upper zero search rectangle")
    i.add_argument("--window", default="-50,50,0,50", help="winding certificate rectangle")
    i.add_argument("--band-tol", type=float, default=0.05)
    i.add_argument("--out", help="JSON diagnostics path (default: stdout)")
    i.set_defaults(func=cmd_interpolate)

    s = sub.add_parser("sharpness", help="counterexample set and obstruction profile")
    s.add_argument("--tau", required=True, help="rate: log1p | pow:a | scaled(c,f) | sum(f,g)")
    s.add_argument("--rho", required=True)
    s.add_argument("--K", type=int, required=True, help="number of points")
    s.add_argument("--out", help="CSV profile path (default: stdout)")
    s.add_argument("--set-json", help="also write the point set as JSON")
    s.set_defaults(func=cmd_sharpness)
    return p


_RECT_FLAGS = ("--region", "--search", "--window")


def _glue_rectangles(argv):
    """``--region -1,1,-2,0`` would read ``-1,...`` as an option; glue with ``=``."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _RECT_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_rectangles(argv))
    if getattr(args, "threads", 1) < 1:
        print("jostlab: error: --threads must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"jostlab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _QUALITY_ERRORS as exc:
        print(f"jostlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_QUALITY
    except _INPUT_ERRORS as exc:
        print(f"jostlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except JostLabError as exc:
        print(f"jostlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_QUALITY


if __name__ == "__main__":
    sys.exit(main())
