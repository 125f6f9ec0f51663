from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from dolbeault.coeff_ring import GaussRational, PolySeries, RingMismatch
from dolbeault.expr import poly
from dolbeault.randomgen import random_poly

from oracles import from_sympy, to_sympy, truncate, zbs, zs


def test_gauss_arithmetic():
    a = GaussRational(Fraction(1, 2), 3)
    b = GaussRational(2, -1)
    assert a * b == GaussRational(Fraction(1, 2) * 2 + 3, Fraction(-1, 2) + 6)
    assert a * a.inverse() == 1
    assert (a - a).re == 0 and not (a - a)
    assert str(GaussRational(0, 1)) == "i"
    assert str(GaussRational(0, -1)) == "-i"
    assert str(GaussRational(Fraction(1, 2), 3)) == "(1/2+3*i)"


def test_zero_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        GaussRational(0).inverse()


def test_truncation_drops_high_t():
    t = PolySeries.t(1, 2)
    assert (t * t * t).is_zero()
    assert (t * t).t_degree() == 2


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        PolySeries.z(1, 2, 1) + PolySeries.z(2, 2, 1)
    with pytest.raises(RingMismatch):
        PolySeries.z(1, 2, 1) * PolySeries.z(1, 3, 1)


def test_axis_check():
    with pytest.raises(IndexError):
        PolySeries.z(2, 1, 3)
    with pytest.raises(IndexError):
        PolySeries.z(2, 1, 1).d_zbar(0)


def test_derivatives_are_independent():
    f = poly("z1^2*zb1 + 3*zb1^2*t", 1, 2)
    assert f.d_z(1) == poly("2*z1*zb1", 1, 2)
    assert f.d_zbar(1) == poly("z1^2 + 6*zb1*t", 1, 2)


def test_t_structure():
    f = poly("z1 + t*zb1 - 2*t^2*z1*zb1", 1, 2)
    assert f.t_coefficient(1) == poly("zb1", 1, 2)
    assert f.t_coefficient(2) == poly("-2*z1*zb1", 1, 2)
    assert f.t_coefficient(0).times_t(1) == poly("t*z1", 1, 2)
    assert f.retruncate(1) == poly("z1 + t*zb1", 1, 1)


def test_printing_round_trips():
    f = poly("2*z1^2*zb1*t - 1/2*t^2 + (1-i)*z1 - i*zb2", 2, 3)
    assert poly(str(f), 2, 3) == f


@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(0, 3))
def test_product_matches_sympy(seed, n, N):
    import random
    rng = random.Random(seed)
    f = random_poly(rng, n, N, 2, 3)
    g = random_poly(rng, n, N, 2, 3)
    expected = truncate(to_sympy(f) * to_sympy(g), N)
    assert f * g == from_sympy(expected, n, N)
    assert f + g == from_sympy(to_sympy(f) + to_sympy(g), n, N)


@given(st.integers(0, 10_000), st.integers(1, 3))
def test_derivatives_match_sympy(seed, n):
    import random
    rng = random.Random(seed)
    f = random_poly(rng, n, 2, 3, 4)
    for i in range(1, n + 1):
        assert f.d_z(i) == from_sympy(sp.diff(to_sympy(f), zs(n)[i - 1]), n, 2)
        assert f.d_zbar(i) == from_sympy(sp.diff(to_sympy(f), zbs(n)[i - 1]), n, 2)


@given(st.integers(0, 10_000))
def test_power_matches_repeated_product(seed):
    import random
    rng = random.Random(seed)
    f = random_poly(rng, 2, 3, 1, 2)
    assert f ** 3 == f * f * f
    assert f ** 0 == PolySeries.one(2, 3)


def test_hash_and_equality():
    a = poly("z1 + t", 1, 2)
    b = poly("t + z1", 1, 2)
    assert a == b and hash(a) == hash(b)
