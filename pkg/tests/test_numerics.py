from fractions import Fraction

import mpmath
import pytest

from numerics import (
    BigReal, Bracket, CodecError, NoSignChange, PrecisionContext, PrecisionExhausted, Sign,
    UncertainDivisor, bisect, certified_sign, fraction_text, fraction_to_decimal, mpf_to_fraction,
    newton_bisect, parse_real,
)

# Тестовые константы
BITS = 256
SQRT2_DIGITS = "1.41421356237309504880168872420969807856967187537694"


def _square_minus_two(x: Fraction, c: PrecisionContext) -> BigReal:
    v = BigReal.from_fraction(x, c.bits)
    return v * v - 2


def _double(x: Fraction, c: PrecisionContext) -> BigReal:
    return BigReal.from_fraction(x, c.bits) * 2


class TestBigReal:
    """Арифметика с погрешностью и точный рациональный путь"""

    def test_exact_arithmetic_stays_exact(self):
        a = BigReal.from_fraction(Fraction(1, 4), BITS)
        b = BigReal.from_fraction(Fraction(3, 4), BITS)
        assert (a + b).exact == 1
        assert (a * b).exact == Fraction(3, 16)
        assert (b / a).exact == 3
        assert (a - b).exact == Fraction(-1, 2)

    def test_power_and_abs(self):
        x = BigReal.from_fraction(-3, BITS)
        assert (x ** 4).exact == 81
        assert abs(x).exact == 3

    def test_inexact_value_encloses_truth(self):
        third = BigReal.from_fraction(1, BITS) / 3
        product = third * 3
        assert product.contains(1)
        assert certified_sign(product - 1) in (Sign.UNDECIDABLE, Sign.ZERO)

    def test_log_of_nine_over_log_of_three(self):
        ratio = BigReal.from_fraction(9, BITS).log() / BigReal.from_fraction(3, BITS).log()
        assert abs(float(ratio) - 2.0) < 1e-30
        assert ratio.err < mpmath.mpf(2) ** -200

    def test_log_requires_positive_argument(self):
        with pytest.raises(UncertainDivisor):
            BigReal.from_fraction(0, BITS).log()

    def test_at_prec_recomputes_exact_values(self):
        x = BigReal.from_fraction(Fraction(1, 3), 64)
        y = x.at_prec(512)
        assert y.prec == 512
        assert y.to_fraction() == Fraction(1, 3)


class TestCertifiedSign:
    """Знак решается только при отделении от нуля"""

    def test_exact_signs(self):
        assert certified_sign(BigReal.from_fraction(Fraction(1, 10), BITS)) is Sign.POSITIVE
        assert certified_sign(BigReal.from_fraction(-2, BITS)) is Sign.NEGATIVE
        assert certified_sign(BigReal.from_fraction(0, BITS)) is Sign.ZERO

    def test_undecidable_inside_error(self):
        x = BigReal.from_mpf(mpmath.mpf(0), mpmath.mpf("1e-10"), BITS)
        assert certified_sign(x) is Sign.UNDECIDABLE
        assert not certified_sign(x).is_decided

    def test_undecidable_has_no_factor(self):
        with pytest.raises(ValueError):
            Sign.UNDECIDABLE.factor


class TestPrecisionContext:
    """Эскалация и оценка точности по глубине"""

    def test_escalation_multiplies_bits(self):
        ctx = PrecisionContext(bits=128, escalation_factor=2, max_escalations=2)
        up = ctx.escalate()
        assert up.bits == 256
        assert up.escalations == 1
        assert ctx.bits == 128

    def test_escalation_limit(self):
        ctx = PrecisionContext(bits=128, max_escalations=0)
        with pytest.raises(PrecisionExhausted):
            ctx.escalate()

    def test_for_depth_rounds_to_quantum(self):
        ctx = PrecisionContext(bits=64).for_depth(100, 3.17)
        assert ctx.bits % 64 == 0
        assert ctx.bits >= 100 * 3.17 + 64
        assert ctx.escalations == 0

    def test_for_depth_never_lowers_precision(self):
        assert PrecisionContext(bits=1024).for_depth(1, 1.0).bits == 1024


class TestBisection:
    """Сертифицированный поиск смены знака"""

    def test_bisect_brackets_sqrt2(self):
        ctx = PrecisionContext(bits=BITS)
        tol = Fraction(1, 2 ** 100)
        bracket = bisect(_square_minus_two, 1, 2, tol, ctx)
        assert bracket.width <= tol
        root = mpmath.mpf(SQRT2_DIGITS)
        assert bracket.lo <= mpf_to_fraction(root) + tol
        assert bracket.hi >= mpf_to_fraction(root) - tol

    def test_newton_bisect_matches_bisect(self):
        ctx = PrecisionContext(bits=BITS)
        tol = Fraction(1, 2 ** 120)
        slow = bisect(_square_minus_two, 1, 2, tol, ctx)
        fast = newton_bisect(_square_minus_two, _double, 1, 2, tol, ctx)
        assert fast.width <= tol
        assert abs(fast.midpoint - slow.midpoint) <= 2 * tol

    def test_exact_root_at_probe(self):
        ctx = PrecisionContext(bits=BITS)

        def f(x: Fraction, c: PrecisionContext) -> BigReal:
            return BigReal.from_fraction(x, c.bits) - Fraction(1, 2)

        bracket = bisect(f, 0, 1, Fraction(1, 2 ** 40), ctx)
        assert bracket.is_point
        assert bracket.lo == Fraction(1, 2)

    def test_no_sign_change(self):
        ctx = PrecisionContext(bits=BITS)
        with pytest.raises(NoSignChange):
            bisect(_square_minus_two, 2, 3, Fraction(1, 2 ** 20), ctx)

    def test_bracket_midpoint_and_width(self):
        b = Bracket(lo=Fraction(1, 4), hi=Fraction(3, 4))
        assert b.width == Fraction(1, 2)
        assert b.midpoint == Fraction(1, 2)
        assert b.contains(Fraction(1, 3))
        assert b.as_bigreal(BITS).contains(Fraction(1, 2))


class TestCodec:
    """Точная десятичная запись двоично-рациональных чисел"""

    @pytest.mark.parametrize("text, expected", [
        ("0.5", Fraction(1, 2)),
        ("1/64", Fraction(1, 64)),
        ("1e-3", Fraction(1, 1000)),
        ("-0.25", Fraction(-1, 4)),
    ])
    def test_parse_real(self, text, expected):
        assert parse_real(text) == expected

    def test_parse_real_rejects_garbage(self):
        with pytest.raises(CodecError):
            parse_real("one half")

    def test_dyadic_decimal_is_exact(self):
        fr = Fraction(3, 2 ** 70)
        assert parse_real(fraction_to_decimal(fr)) == fr

    def test_fraction_text_without_finite_decimal(self):
        with pytest.raises(CodecError):
            fraction_to_decimal(Fraction(1, 768))
        assert fraction_text(Fraction(1, 768)) == "1/768"
        assert fraction_text(Fraction(-2, 3)) == "-2/3"
        assert parse_real(fraction_text(Fraction(1, 768))) == Fraction(1, 768)

    def test_fraction_text_prefers_decimal(self):
        assert fraction_text(Fraction(1, 8)) == "0.125"
        assert fraction_text(Fraction(3, 5)) == "0.6"
        assert fraction_text(0) == "0"

    def test_mpf_to_fraction_is_exact(self):
        v = mpmath.mpf(1) / 3
        fr = mpf_to_fraction(v)
        assert fr.denominator & (fr.denominator - 1) == 0
