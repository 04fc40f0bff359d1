from fractions import Fraction

import pytest

from families import (
    DEG7_Y0, Family, ParamOutOfRange, chebyshev_polynomial, deg7_x0, exponent_gap, make_map,
    outer_polynomial, polynomial_schwarzian,
)
from numerics import BigReal, PrecisionContext, Sign, certified_sign

# Тестовые константы
TIGHT = 1e-30
BITS = 256


def close(x: BigReal, expected: float, tol: float = TIGHT) -> bool:
    return abs(float(x) - expected) < tol and float(x.err) < tol


class TestCubicFamily:
    """Кубическое семейство при gamma = 0: g(x) = ((4x-2)^3 - 3(4x-2) + 2) / 4"""

    def test_endpoint_derivatives(self, cubic0, ctx):
        assert close(cubic0.deriv(0, ctx), 9.0)
        assert close(cubic0.deriv(1, ctx), 9.0)

    def test_fixed_point_and_its_multiplier(self, cubic0, ctx):
        assert cubic0.eval(Fraction(1, 2), ctx).exact == Fraction(1, 2)
        assert close(abs(cubic0.deriv(Fraction(1, 2), ctx)), 3.0)

    def test_critical_points_and_values(self, cubic0, ctx):
        c1, c2 = cubic0.critical_points(ctx)
        assert c1.exact == Fraction(1, 4)
        assert c2.exact == Fraction(3, 4)
        assert cubic0.eval(c1, ctx).exact == 1
        assert cubic0.eval(c2, ctx).exact == 0

    def test_endpoints_fixed(self, cubic_top, ctx):
        assert abs(float(cubic_top.eval(0, ctx))) < TIGHT
        assert abs(float(cubic_top.eval(1, ctx)) - 1.0) < TIGHT

    def test_monotonicity_type(self, cubic_top, ctx):
        c1, c2 = cubic_top.critical_points(ctx)
        mid = (c1 + c2) * Fraction(1, 2)
        assert certified_sign(cubic_top.deriv(0, ctx)) is Sign.POSITIVE
        assert certified_sign(cubic_top.deriv(mid, ctx)) is Sign.NEGATIVE
        assert certified_sign(cubic_top.deriv(1, ctx)) is Sign.POSITIVE

    def test_negative_schwarzian(self, cubic_top, ctx):
        assert certified_sign(cubic_top.schwarzian(Fraction(1, 10), ctx)) is Sign.NEGATIVE
        assert certified_sign(cubic_top.schwarzian(Fraction(1, 2), ctx)) is Sign.NEGATIVE

    def test_parameter_range(self):
        with pytest.raises(ParamOutOfRange):
            make_map(Family.CUBIC, Fraction(1, 32))
        with pytest.raises(ParamOutOfRange):
            make_map("cubic", -1)


class TestDegreeSevenFamily:
    """Семейство степени 7 при gamma' = 0"""

    def test_y0_is_rational(self):
        assert DEG7_Y0 == Fraction(16, 35)

    def test_x0_solves_outer_equation(self):
        x0 = deg7_x0(BITS)
        assert 1.5 < float(x0) < 2.0
        value = outer_polynomial(BITS)(x0) - DEG7_Y0
        assert abs(float(value)) < TIGHT

    def test_fixed_point_multiplier(self, deg7_0, ctx):
        x0 = deg7_x0(ctx.bits)
        half = BigReal.from_fraction(Fraction(1, 2), ctx.bits)
        multiplier = abs(deg7_0.deriv(half, ctx))
        assert abs(float(multiplier) - float(x0) / float(DEG7_Y0)) < 1e-12

    def test_critical_value_at_zero(self, deg7_0, ctx):
        c2 = deg7_0.critical_points(ctx)[1]
        assert abs(float(deg7_0.eval(c2, ctx))) < TIGHT


class TestExponentGap:
    """Левая граница щели при gamma = 0 равна 1/2 log 9 / log 3 = 1"""

    def test_left_side_is_one(self):
        left, right = exponent_gap(PrecisionContext(bits=BITS))
        assert close(left, 1.0)
        assert float(right) > float(left)

    def test_expansion_bound(self, cubic0, ctx):
        assert close(cubic0.expansion_bound(ctx), 9.0)
        assert cubic0.log2_expansion(ctx) > 3.0


class TestOuterPolynomials:
    """Внешние полиномы без аффинных замен"""

    def test_chebyshev_schwarzian_at_zero(self):
        zero = BigReal.from_fraction(0, BITS)
        assert polynomial_schwarzian(chebyshev_polynomial(BITS), zero).exact == -2

    def test_outer_polynomial_is_odd(self):
        t = outer_polynomial(BITS)
        for x in (Fraction(1, 2), Fraction(3, 2), Fraction(7, 5)):
            plus = t(BigReal.from_fraction(x, BITS))
            minus = t(BigReal.from_fraction(-x, BITS))
            assert (plus + minus).exact == 0

    def test_outer_value_at_minus_one(self):
        assert outer_polynomial(BITS)(BigReal.from_fraction(-1, BITS)).exact == DEG7_Y0
