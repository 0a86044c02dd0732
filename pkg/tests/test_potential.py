import math

import pytest
from hypothesis import given, strategies as st

from jostlab.errors import DomainError, ParseError
from jostlab.potential import Potential, parse_potential, serialize_potential, support_diameter


def test_parse_free():
    p = parse_potential(b'{"segments":[]}')
    assert p.sigma == 0 and p.is_free


def test_parse_box():
    p = parse_potential(b'{"segments":[{"length":1.0,"q":4.0}]}')
    assert p.segments == ((1.0, 4.0),) and p.sigma == 1.0


def test_parse_two_steps():
    p = parse_potential('{"segments":[{"length":0.5,"q":2.0},{"length":0.5,"q":-1.0}]}')
    assert p.sigma == 1.0 and len(p.segments) == 2


@pytest.mark.parametrize("text, field", [
    ('{"segs": []}', "segments"),
    ('{"segments": [{"length": 1}]}', "segments[0].q"),
    ('{"segments": [{"length": "x", "q": 1}]}', "segments[0].length"),
    ('[1, 2]', "segments"),
    ('not json', "JSON"),
])
def test_parse_errors_name_the_field(text, field):
    with pytest.raises(ParseError, match=field.replace("[", r"\[").replace("]", r"\]")):
        parse_potential(text)


@pytest.mark.parametrize("length", [0.0, -1.0])
def test_nonpositive_length(length):
    with pytest.raises(DomainError):
        parse_potential('{"segments": [{"length": %r, "q": 1}]}' % length)


@pytest.mark.parametrize("segs, expected", [
    ((), 0.0),
    (((1.0, 4.0),), 1.0),
    (((1.0, 0.0), (1.0, 3.0), (1.0, 0.0)), 1.0),
    (((0.5, 1.0), (2.0, 0.0), (0.25, -1.0)), 2.75),
])
def test_support_diameter(segs, expected):
    assert support_diameter(Potential(segs)) == expected


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
segments = st.lists(st.tuples(st.floats(min_value=1e-6, max_value=1e6), finite), max_size=8)


@given(segments)
def test_round_trip_is_exact(segs):
    p = Potential(tuple(segs))
    q = parse_potential(serialize_potential(p).encode())
    assert q.segments == p.segments and q.sigma == p.sigma


@given(segments)
def test_diameter_bounded_by_sigma(segs):
    p = Potential(tuple(segs))
    assert support_diameter(p) <= p.sigma * (1 + 1e-15)


@given(segments)
def test_sigma_is_sum_of_lengths(segs):
    p = Potential(tuple(segs))
    assert abs(p.sigma - math.fsum(l for l, _ in segs)) <= math.ulp(max(p.sigma, 1e-300))
