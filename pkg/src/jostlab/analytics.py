"""Necessary-condition functionals on finite point multisets.

Blaschke sums, counting functions, the sector excess, logarithmic-strip
clearance, the phase sum ``p(t)`` and a numerical band-limit certificate
for ``z (f(z) - 1) in const + exp(i sigma z) PW_sigma``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResolutionError


@dataclass(frozen=True, eq=False)
class PointMultiset:
    """Finite multiset of complex points.

    Exact duplicates are merged on construction (multiplicities add);
    first-occurrence order is kept.
    """

    locations: np.ndarray
    multiplicities: np.ndarray

    def __init__(self, locations=(), multiplicities=None):
        loc = np.atleast_1d(np.asarray(locations, dtype=complex)).ravel()
        if multiplicities is None:
            mult = np.ones(loc.size, dtype=int)
        else:
            mult = np.atleast_1d(np.asarray(multiplicities)).ravel()
            if mult.size != loc.size:
                raise ValueError("locations and multiplicities differ in length")
            if np.any(mult != np.round(mult)) or np.any(mult < 1):
                raise DomainError("multiplicities must be integers >= 1")
            mult = mult.astype(int)
        index: dict[complex, int] = {}
        keep_loc, keep_mult = [], []
        for z, m in zip(loc.tolist(), mult.tolist()):
            if z in index:
                keep_mult[index[z]] += m
            else:
                index[z] = len(keep_loc)
                keep_loc.append(z)
                keep_mult.append(m)
        object.__setattr__(self, "locations", np.array(keep_loc, dtype=complex))
        object.__setattr__(self, "multiplicities", np.array(keep_mult, dtype=int))
        self.locations.setflags(write=False)
        self.multiplicities.setflags(write=False)

    @classmethod
    def from_report(cls, report) -> "PointMultiset":
        return cls([z.location for z in report.zeros], [z.multiplicity for z in report.zeros])

    def __len__(self):
        return self.locations.size

    def __eq__(self, other):
        if not isinstance(other, PointMultiset):
            return NotImplemented
        return (np.array_equal(self.locations, other.locations)
                and np.array_equal(self.multiplicities, other.multiplicities))

    def __repr__(self):
        pts = ", ".join(f"{z}x{m}" if m > 1 else f"{z}"
                        for z, m in zip(self.locations, self.multiplicities))
        return f"PointMultiset([{pts}])"

    @property
    def total(self) -> int:
        return int(self.multiplicities.sum())

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.locations)

    def expanded(self) -> np.ndarray:
        """Locations repeated by multiplicity."""
        return np.repeat(self.locations, self.multiplicities)

    def select(self, mask) -> "PointMultiset":
        mask = np.asarray(mask, dtype=bool)
        return PointMultiset(self.locations[mask], self.multiplicities[mask])

    def union(self, other: "PointMultiset") -> "PointMultiset":
        return PointMultiset(np.concatenate((self.locations, other.locations)),
                             np.concatenate((self.multiplicities, other.multiplicities)))

    def shifted(self, dz: complex) -> "PointMultiset":
        return PointMultiset(self.locations + dz, self.multiplicities)

    def split_multiple(self, spacing: float) -> "PointMultiset":
        """Replace each point of multiplicity ``m`` by ``m`` simple points.

        The copies sit on a horizontal segment centred on the original point,
        ``spacing`` apart, so they stay in the same half-plane.
        """
        pts = []
        for z, m in zip(self.locations, self.multiplicities):
            offsets = (np.arange(m) - 0.5 * (m - 1)) * spacing
            pts.extend((z + offsets).tolist())
        return PointMultiset(pts)

    def require_lower(self):
        if np.any(self.locations.imag >= 0):
            raise DomainError("points must lie in the open lower half-plane")
        return self


def blaschke_sum(s: PointMultiset) -> float:
    """``sum m |Im l| / (1 + |l|^2)``."""
    if not len(s):
        return 0.0
    z = s.locations
    terms = s.multiplicities * np.abs(z.imag) / (1.0 + np.abs(z) ** 2)
    return math.fsum(terms.tolist())


def blaschke_partial_sum(s: PointMultiset, r: float) -> float:
    return blaschke_sum(s.select(s.moduli < r))


def counting_function(s: PointMultiset, r: float) -> int:
    """Number of points with ``|l| < r``, with multiplicity."""
    return int(s.multiplicities[s.moduli < r].sum())


def sector_excess(s: PointMultiset, delta: float, r: float) -> int:
    """Points with ``|l| < r`` and ``Arg l`` outside ``[-pi + delta, -delta]``."""
    if not 0 < delta < math.pi / 2:
        raise DomainError("delta must lie in (0, pi/2)")
    arg = np.angle(s.locations)
    outside = (arg < -math.pi + delta) | (arg > -delta)
    return int(s.multiplicities[(s.moduli < r) & outside].sum())


def log_strip_clearance(s: PointMultiset) -> float:
    """Largest ``C`` with no point in ``{-log(1 + |Re z|) <= C Im z}``."""
    if not len(s):
        return math.inf
    z = s.locations
    if np.any(z.imag == 0):
        raise DomainError("log-strip clearance needs Im l != 0 for every point")
    return float(np.min(np.log1p(np.abs(z.real)) / np.abs(z.imag)))


def phase_sum(s: PointMultiset, t):
    """``p(t) = sum m |Im l| / |t - l|^2`` (scalar or array ``t``)."""
    t = np.asarray(t, dtype=float)
    if not len(s):
        return np.zeros_like(t) if t.ndim else 0.0
    z = s.locations
    w = s.multiplicities * np.abs(z.imag)
    d = (t[..., None] - z.real) ** 2 + z.imag ** 2
    out = np.sum(w / d, axis=-1)
    return float(out) if out.ndim == 0 else out


def band_limit_residual(f, sigma: float, half_width: float, samples: int = 1 << 14,
                        tail_fraction: float = 0.05, c: complex | None = None):
    """Spectral energy of ``x (f(x) - 1) - c`` outside ``[0, 2 sigma]``.

    Samples ``h(x) = x (f(x) - 1)`` at the midpoints of a uniform grid on
    ``[-half_width, half_width]``,
    estimates the constant ``c`` as the mean of ``h`` over the
    ``tail_fraction`` of samples with the largest ``|x|``, applies a Hann
    window to ``h - c`` and returns ``(c_est, fraction)`` where
    ``fraction`` is the share of spectral energy at angular frequencies
    outside ``[0, 2 sigma]`` (``exp(i u x)`` has frequency ``u``).

    A known constant ``c`` skips the estimate.  The tail mean is only
    meaningful when the band-limited part is square integrable; for
    functions growing along the real axis it must be supplied.
    """
    if samples < 4096 or samples & (samples - 1):
        raise ValueError("samples must be a power of two >= 4096")
    if half_width * sigma < 32 * math.pi:
        raise ResolutionError(
            f"half_width*sigma = {half_width * sigma:.3g} < 32 pi: grid cannot resolve the band")
    n = samples
    dx = 2.0 * half_width / n
    # midpoint grid: symmetric and never samples x = 0
    x = -half_width + dx * (np.arange(n) + 0.5)
    fx = np.asarray(f(x.astype(complex))[0], dtype=complex)
    h = x * (fx - 1.0)
    k = max(1, int(round(tail_fraction * n)))
    tail = np.argsort(-np.abs(x), kind="stable")[:k]
    c_est = complex(np.mean(h[tail])) if c is None else complex(c)
    y = (h - c_est) * np.hanning(n)
    spec = np.abs(np.fft.fft(y)) ** 2
    omega = 2.0 * math.pi * np.fft.fftfreq(n, d=dx)
    total = float(spec.sum())
    if total == 0.0:
        return c_est, 0.0
    outside = (omega < 0) | (omega > 2.0 * sigma)
    return c_est, float(spec[outside].sum() / total)


def write_counting_csv(s: PointMultiset, radii, fh=None) -> str:
    """``r,N(r)`` table; returns the text and writes it to ``fh`` if given."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "N"])
    for r in radii:
        w.writerow([format(float(r), ".17g"), counting_function(s, r)])
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text


def write_phase_csv(s: PointMultiset, ts, fh=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "p"])
    ts = np.asarray(ts, dtype=float)
    for t, p in zip(ts, np.atleast_1d(phase_sum(s, ts))):
        w.writerow([format(float(t), ".17g"), format(float(p), ".17g")])
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text
