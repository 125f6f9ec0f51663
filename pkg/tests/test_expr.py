from fractions import Fraction

import pytest

from dolbeault.coeff_ring import GaussRational, PolySeries
from dolbeault.expr import ExprError, gauss, parse_poly, poly


def test_precedence_and_unary():
    assert poly("-2*z1^2 + 3", 1, 0) == PolySeries.z(1, 0, 1) ** 2 * -2 + 3
    assert poly("(z1 + zb1)^2", 1, 0) == poly("z1^2 + 2*z1*zb1 + zb1^2", 1, 0)
    assert poly("--z1", 1, 0) == PolySeries.z(1, 0, 1)


def test_rational_and_imaginary_constants():
    assert gauss("1/2 + 3*i") == GaussRational(Fraction(1, 2), 3)
    assert gauss("(1+i)/(1-i)") == GaussRational(0, 1)
    assert gauss("i^2") == -1


def test_division_by_nonconstant_rejected():
    with pytest.raises(ExprError) as err:
        poly("1/z1", 1, 0)
    assert err.value.token == "/"


def test_axis_out_of_range_located():
    with pytest.raises(ExprError) as err:
        poly("t*zb3", 2, 2)
    assert err.value.pos == 2 and err.value.token == "zb3"


def test_antiholomorphic_parameter_rejected():
    with pytest.raises(ExprError):
        poly("tb*z1", 1, 1)


def test_truncation_is_reported():
    value, truncated = parse_poly("t + t^3", 1, 2)
    assert truncated and value == PolySeries.t(1, 2)
    value, truncated = parse_poly("(t^3 - t^3) + t", 1, 2)
    assert not truncated and value == PolySeries.t(1, 2)


@pytest.mark.parametrize("src", ["", "z1 +", "(z1", "z1 $ 2", "z1^z1", "foo", "z0"])
def test_malformed(src):
    with pytest.raises(ExprError):
        poly(src, 1, 1)
