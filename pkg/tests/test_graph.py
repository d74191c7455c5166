import json
import math

import pytest
from hypothesis import given, strategies as st

from dressedgraphs.errors import UnsupportedTopologyError, ValidationError
from dressedgraphs.graph import (DeltaSpec, EdgeSpec, GraphSpec, Topology, asymmetry, build_skeleton,
                                 make_spec, normalize_scale, straight_wire, wrap_angle)


def test_straight_wire_basic():
    spec = straight_wire([0.3], [-2.0])
    assert spec.topology is Topology.WIRE1
    assert spec.total_length == 1.0
    assert spec.positions == (0.3,)
    assert spec.strengths == (-2.0,)


@pytest.mark.parametrize("positions", [[0.0], [1.0], [0.5, 0.5], [0.6, 0.3], [0.5, 0.5 + 1e-12]])
def test_degenerate_placement_rejected(positions):
    with pytest.raises(ValidationError):
        straight_wire(positions, [1.0] * len(positions))


@pytest.mark.parametrize("bad", [
    dict(topology="StarDelta", edges=[{"length": 1}], deltas=[{"g": 1}]),
    dict(topology="Wire1Delta", edges=[{"length": 1}], deltas=[]),
    dict(topology="Wire1Delta", edges=[{"length": -1}], deltas=[{"g": 1, "position": 0.5}]),
    dict(topology="Nope", edges=[{"length": 1}], deltas=[{"g": 1}]),
    dict(edges=[{"length": 1}]),
])
def test_bad_dicts(bad):
    with pytest.raises(ValidationError):
        GraphSpec.from_dict(bad)


def test_loop_sides_triangle_inequality():
    with pytest.raises(ValidationError):
        make_spec("LollipopDelta", dict(a=0.4, g=1.0, l1=0.1, l2=0.1, l3=0.8))
    spec = make_spec("LollipopDelta", dict(a=0.4, g=1.0, l1=1, l2=1, l3=1))
    assert spec.loop_sides == pytest.approx((1 / 3,) * 3)


@pytest.mark.parametrize("omega,expected", [(-0.44, -0.44), (0.0, 0.0), (0.7, 0.7)])
def test_asymmetry_single(omega, expected):
    assert asymmetry(make_spec("Wire1Delta", dict(g=1.0, omega=omega))) == pytest.approx(expected)


def test_asymmetry_two_delta_subwires():
    spec = make_spec("Wire2Delta", dict(x1=0.2, x2=0.7, g1=1, g2=1))
    # a=0.2, c=0.5, b=0.3: omega1 = 2a/(a+c) - 1, omega2 = 2b/(b+c) - 1
    assert asymmetry(spec, 0) == pytest.approx(2 * 0.2 / 0.7 - 1)
    assert asymmetry(spec, 1) == pytest.approx(2 * 0.3 / 0.8 - 1)


def test_asymmetry_star_unsupported():
    with pytest.raises(UnsupportedTopologyError):
        asymmetry(make_spec("StarDelta", dict(a=0.2, b=0.3, c=0.5, g=1.0)))


def test_normalize_scale():
    spec = straight_wire([1.2], [3.0], length=4.0)
    n = normalize_scale(spec)
    assert n.total_length == pytest.approx(1.0)
    assert n.positions[0] == pytest.approx(0.3)


@given(st.floats(-50, 50, allow_nan=False))
def test_wrap_angle_range(theta):
    w = wrap_angle(theta)
    assert -math.pi <= w < math.pi
    assert math.isclose(math.cos(w), math.cos(theta), abs_tol=1e-9)


@given(st.floats(0.05, 0.95), st.floats(-12, 12), st.floats(-3, 3), st.floats(0.1, 10))
def test_json_round_trip(pos, g, bend, length):
    spec = make_spec("Wire1Delta", dict(g=g, position=pos, bend=bend, length=length))
    again = GraphSpec.from_json(json.dumps(spec.to_dict()))
    assert again == spec


@pytest.mark.parametrize("topology,params", [
    ("Wire1Delta", dict(g=1.0, omega=0.2, bend=0.7)),
    ("Wire3Delta", dict(x1=0.1, x2=0.5, x3=0.9, g1=1, g2=2, g3=3)),
    ("StarDelta", dict(a=0.2, b=0.3, c=0.5, g=1.0)),
    ("LollipopDelta", dict(a=0.4, g=1.0)),
])
def test_skeleton_lengths_add_up(topology, params):
    spec = make_spec(topology, params)
    sk = build_skeleton(spec)
    assert sum(p.length for p in sk.pieces) == pytest.approx(spec.total_length)


def test_lollipop_loop_closes():
    spec = make_spec("LollipopDelta", dict(a=0.4, g=1.0, l1=0.5, l2=0.3, l3=0.4))
    sk = build_skeleton(spec)
    loop = [p for p in sk.pieces if p.u == p.v][0]
    x0, y0 = loop.coords(0.0 * loop.length)
    x1, y1 = loop.coords(1.0 * loop.length)
    assert x0 == pytest.approx(x1, abs=1e-12) and y0 == pytest.approx(y1, abs=1e-12)


def test_bent_wire_coordinates():
    spec = make_spec("Wire1Delta", dict(g=1.0, position=0.5, bend=math.pi / 2))
    sk = build_skeleton(spec)
    end = sk.pieces[-1]
    x, y = end.coords(end.length)
    assert (float(x), float(y)) == pytest.approx((0.5, 0.5))
    assert not sk.collinear_x


def test_rotated_and_scaled():
    spec = make_spec("StarDelta", dict(a=0.2, b=0.3, c=0.5, g=1.0))
    assert spec.rotated(0.3).edges[0].angle == pytest.approx(0.3)
    assert spec.scaled(2.0).total_length == pytest.approx(2.0)
    with pytest.raises(ValidationError):
        spec.scaled(0.0)


def test_edge_validation():
    with pytest.raises(ValidationError):
        EdgeSpec(0.0)
    with pytest.raises(ValidationError):
        EdgeSpec(float("nan"))
    with pytest.raises(ValidationError):
        DeltaSpec(float("inf"), 0.5)
