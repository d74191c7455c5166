import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dressedgraphs.errors import DomainError
from tests.oracles import transfer_end_value
from dressedgraphs.secular import (coeffs_2delta_neg, critical_strength_pop, critical_strength_star,
                                   critical_strength_wire, f_2delta, f_2delta_neg, f_2delta_product,
                                   f_3delta, f_3delta_neg, f_3delta_product, f_delta, f_delta_neg,
                                   f_pop, f_star, f_star_bare_printed, threshold_2delta_g1,
                                   wire_leading_coefficient)


@pytest.mark.parametrize("omega,expected", [(-0.44, -2.48), (0.02, -2.00)])
def test_critical_strength_wire_captions(omega, expected):
    assert round(critical_strength_wire(omega), 2) == expected


def test_critical_strength_domain():
    with pytest.raises(DomainError):
        critical_strength_wire(1.0)


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_nonpositive_argument(x):
    with pytest.raises(DomainError):
        f_delta(1.0, 0.0, x)


@given(st.floats(-12, 12), st.floats(-0.95, 0.95), st.floats(0.1, 60))
def test_f_delta_proportional_to_transfer(g, omega, x):
    a = 0.5 * (omega + 1)
    psi = transfer_end_value(x, [a], [g])
    # psi(L) = sin(x)/k + (2g/L) sin(k a) sin(k(L-a))/k^2 = f_delta / k
    assert f_delta(g, omega, x) == pytest.approx(x * psi, rel=1e-9, abs=1e-9)


@given(st.floats(-12, 12), st.floats(-0.95, 0.95), st.floats(0.1, 20))
def test_f_delta_neg_proportional_to_transfer(g, omega, x):
    a = 0.5 * (omega + 1)
    psi = transfer_end_value(x, [a], [g], bound=True)
    assert f_delta_neg(g, omega, x) == pytest.approx(x * psi, rel=1e-9, abs=1e-9)


@settings(max_examples=50)
@given(st.floats(-12, 12), st.floats(-12, 12), st.floats(0.05, 0.9), st.floats(0.05, 0.9), st.floats(0.1, 40))
def test_f_2delta_matches_transfer(g1, g2, p, q, x):
    a, right = sorted([p, q])
    if right - a < 0.02:
        right = a + 0.02
    b, c = 1.0 - right, right - a
    psi = transfer_end_value(x, [a, right], [g1, g2])
    assert f_2delta(g1, g2, a, b, c, x) == pytest.approx(x * psi, rel=1e-8, abs=1e-8)
    psin = transfer_end_value(min(x, 15), [a, right], [g1, g2], bound=True)
    assert f_2delta_neg(g1, g2, a, b, c, min(x, 15)) == pytest.approx(min(x, 15) * psin, rel=1e-8, abs=1e-8)


@given(st.floats(-12, 12), st.floats(-12, 12), st.floats(0.1, 40))
def test_2delta_product_identity(g1, g2, x):
    a, b, c = 0.23, 0.31, 0.46
    k = x
    assert f_2delta_product(g1, g2, a, b, c, x) == pytest.approx(
        np.sin(k * c) * f_2delta(g1, g2, a, b, c, x), abs=1e-9)


@settings(max_examples=50)
@given(st.floats(-12, 12), st.floats(-12, 12), st.floats(-12, 12), st.floats(0.1, 40))
def test_f_3delta_matches_transfer_and_product(g1, g2, g3, x):
    a, b, c, d = 0.17, 0.29, 0.21, 0.33
    pos = [a, a + b, a + b + c]
    psi = transfer_end_value(x, pos, [g1, g2, g3])
    f = f_3delta(g1, g2, g3, a, b, c, d, x)
    assert f == pytest.approx(x * psi, rel=1e-8, abs=1e-8)
    assert f_3delta_product(g1, g2, g3, a, b, c, d, x) == pytest.approx(
        np.sin(x * b) * np.sin(x * c) * f, abs=1e-8)
    xn = min(x, 12)
    assert f_3delta_neg(g1, g2, g3, a, b, c, d, xn) == pytest.approx(
        xn * transfer_end_value(xn, pos, [g1, g2, g3], bound=True), rel=1e-8, abs=1e-8)


@given(st.floats(-12, 12), st.floats(0.1, 50))
def test_star_against_cotangent_condition(g, x):
    a, b, c = 0.21, 0.33, 0.46
    ka, kb, kc = x * a, x * b, x * c
    expected = (np.cos(ka) * np.sin(kb) * np.sin(kc) + np.sin(ka) * np.cos(kb) * np.sin(kc)
                + np.sin(ka) * np.sin(kb) * np.cos(kc) + 2 * g / x * np.sin(ka) * np.sin(kb) * np.sin(kc))
    assert f_star(g, a, b, c, x) == pytest.approx(expected, abs=1e-10)
    assert f_star_bare_printed(a, b, c, x) == pytest.approx(f_star(0.0, a, b, c, x), abs=1e-10)


@given(st.floats(-12, 12), st.floats(0.1, 50))
def test_pop_against_vertex_condition(g, x):
    a, loop = 0.37, 0.63
    ka, kh = x * a, x * loop / 2
    expected = np.cos(ka) * np.cos(kh) - 2 * np.sin(ka) * np.sin(kh) + 2 * g / x * np.sin(ka) * np.cos(kh)
    assert f_pop(g, a, loop, x) == pytest.approx(expected, abs=1e-10)


def test_star_and_pop_critical_strengths_bind():
    a, b, c = 0.21, 0.33, 0.46
    gc = critical_strength_star(a, b, c)
    assert f_star(gc, a, b, c, 1e-3) / 1e-6 == pytest.approx(0.0, abs=1e-3)
    gp = critical_strength_pop(0.37, 0.63)
    assert f_pop(gp, 0.37, 0.63, 1e-4) == pytest.approx(0.0, abs=1e-6)


def test_2delta_series_coefficients():
    g1, g2, a, b, c = -3.0, 2.0, 0.2, 0.3, 0.5
    C1, C3, C5 = coeffs_2delta_neg(g1, g2, a, b, c)
    for x in (1e-2, 5e-2):
        series = C1 * x + C3 * x**3 / 6 + C5 * x**5 / 120
        assert f_2delta_neg(g1, g2, a, b, c, x) == pytest.approx(series, rel=1e-6)


def test_2delta_threshold():
    # symmetric thirds with g2 = 0 binds for g1 < -9/4
    assert threshold_2delta_g1(0.0, 1 / 3, 1 / 3, 1 / 3) == pytest.approx(-9 / 4)
    g2, a, b, c = 1.5, 0.25, 0.35, 0.4
    g1 = threshold_2delta_g1(g2, a, b, c)
    assert coeffs_2delta_neg(g1, g2, a, b, c)[0] == pytest.approx(0.0, abs=1e-12)


def test_wire_leading_coefficient_consistent():
    gs, ts = [-3.0, 2.0, -1.0], [0.2, 0.5, 0.8]
    x = 1e-4
    pos = ts
    lead = wire_leading_coefficient(gs, ts)
    assert transfer_end_value(x, pos, gs) == pytest.approx(lead, rel=1e-6)
    # one delta: 1 + 2 g a (1 - a)
    assert wire_leading_coefficient([-2.0], [0.3]) == pytest.approx(1 - 4 * 0.3 * 0.7)
