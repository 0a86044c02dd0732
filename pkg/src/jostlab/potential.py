"""Piecewise-constant compactly supported potentials.

A potential is a finite list of steps ``(length, q)`` laid out from
``x = 0``; it vanishes beyond ``sigma = sum(lengths)``.  The JSON form is::

    {"segments": [{"length": 0.5, "q": 2.0}, {"length": 0.5, "q": -1.0}]}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import DomainError, ParseError


@dataclass(frozen=True)
class Potential:
    """Step potential on ``[0, sigma]``; the empty list is ``q == 0``."""

    segments: tuple[tuple[float, float], ...] = ()
    sigma: float = field(init=False)

    def __post_init__(self):
        segs = tuple((float(length), float(q)) for length, q in self.segments)
        for length, q in segs:
            if not length > 0 or not math.isfinite(length):
                raise DomainError(f"segment length must be positive, got {length!r}")
            if not math.isfinite(q):
                raise DomainError(f"segment value must be finite, got {q!r}")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "sigma", math.fsum(length for length, _ in segs))

    @classmethod
    def box(cls, a: float, q0: float) -> "Potential":
        return cls(((a, q0),))

    @property
    def is_free(self) -> bool:
        return all(q == 0.0 for _, q in self.segments)

    def split(self, index: int) -> "Potential":
        """Same potential with segment ``index`` cut into two equal halves."""
        segs = list(self.segments)
        length, q = segs[index]
        segs[index:index + 1] = [(length / 2, q), (length / 2, q)]
        return Potential(tuple(segs))


def parse_potential(text: bytes | str) -> Potential:
    """Parse the JSON document ``{"segments": [{"length": L, "q": Q}, ...]}``."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"potential file is not UTF-8: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "segments" not in doc:
        raise ParseError("missing field 'segments'")
    raw = doc["segments"]
    if not isinstance(raw, list):
        raise ParseError("field 'segments' must be a list")
    segs = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise ParseError(f"segments[{i}] must be an object")
        for key in ("length", "q"):
            if key not in item:
                raise ParseError(f"segments[{i}].{key} is missing")
            v = item[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ParseError(f"segments[{i}].{key} must be a number")
        if not item["length"] > 0:
            raise DomainError(f"segments[{i}].length must be positive")
        segs.append((float(item["length"]), float(item["q"])))
    return Potential(tuple(segs))


def serialize_potential(p: Potential) -> str:
    # .17g round-trips every binary64 value
    items = ", ".join(
        '{"length": %s, "q": %s}' % (format(length, ".17g"), format(q, ".17g"))
        for length, q in p.segments)
    return '{"segments": [%s]}' % items


def support_diameter(p: Potential) -> float:
    """Length of the smallest interval containing all steps with ``q != 0``.

    A step counts as zero only when its value is exactly ``0.0``.
    """
    nz = [i for i, (_, q) in enumerate(p.segments) if q != 0.0]
    if not nz:
        return 0.0
    return math.fsum(length for length, _ in p.segments[nz[0]:nz[-1] + 1])
