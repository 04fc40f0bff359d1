from fractions import Fraction

import pytest
from pydantic import ValidationError

from families import Family, make_map
from orbits import kneading2
from paramsearch import (
    NotMinimal, OrderViolation, ParamInterval, ParityViolation, certify_prefix, choose_parity,
    compare_kneading, conv_pair, find_param, find_param_bracket,
)
from symbolic import ItinerarySeq, Ordering, Symbol, parse_word

# Тестовые константы
H = Fraction(1, 64)
LEADING_TARGETS = ["1A", "11A", "111A"]


def full_window() -> ParamInterval:
    return ParamInterval.full(Family.CUBIC)


class TestParamInterval:
    """Окно параметров"""

    def test_rejects_empty_and_out_of_range(self):
        with pytest.raises(ValidationError):
            ParamInterval(family=Family.CUBIC, lo=Fraction(1, 100), hi=Fraction(1, 100))
        with pytest.raises(ValidationError):
            ParamInterval(family=Family.CUBIC, lo=0, hi=Fraction(1, 32))

    def test_geometry(self):
        w = ParamInterval(family=Family.CUBIC, lo="1/128", hi="1/64", samples=3)
        assert w.width == Fraction(1, 128)
        assert w.midpoint == Fraction(3, 256)
        assert w.contains(Fraction(1, 100))
        assert w.strictly_inside(full_window())
        assert not full_window().strictly_inside(full_window())

    def test_sample_points_include_ends(self):
        w = ParamInterval(family=Family.CUBIC, lo=0, hi=H, samples=3)
        points = w.sample_points()
        assert points[0] == 0 and points[-1] == H
        assert len(points) == 5
        assert list(points) == sorted(points)

    @pytest.mark.parametrize("samples", [0, 1, 2, 3, 4, 5, 7, 9, 10])
    def test_sample_points_are_dyadic(self, samples):
        w = ParamInterval(family=Family.CUBIC, lo="1/256", hi="1/128")
        points = w.sample_points(samples)
        assert len(points) == samples + 2
        assert all(a < b for a, b in zip(points, points[1:]))
        for gamma in points:
            assert gamma.denominator & (gamma.denominator - 1) == 0

    def test_sample_points_near_even_spacing(self):
        w = ParamInterval(family=Family.CUBIC, lo=0, hi=H)
        points = w.sample_points(2)
        assert points == (0, H / 4, 3 * H / 4, H)

    def test_dict_with_non_dyadic_end(self):
        w = ParamInterval(family=Family.CUBIC, lo="1/300", hi="1/128")
        data = w.to_dict()
        assert data["lo"] == "1/300"
        assert ParamInterval.from_dict(data) == w

    def test_dict_round_trip(self):
        w = ParamInterval(family=Family.DEG7, lo="1/256", hi="1/128",
                          certified_prefix="1112", samples=4)
        data = w.to_dict()
        assert data["prefix"] == "1112"
        assert ParamInterval.from_dict(data) == w


class TestCompareKneading:
    """Компаратор нидинга по параметру"""

    def test_below_and_above(self, ctx):
        target = ItinerarySeq.parse("1A")
        assert compare_kneading(Family.CUBIC, 0, target, ctx) == (Ordering.LESS, 1)
        assert compare_kneading(Family.CUBIC, H, target, ctx) == (Ordering.GREATER, 1)

    def test_full_agreement(self, ctx):
        target = ItinerarySeq.parse("1^inf")
        assert compare_kneading(Family.CUBIC, 0, target, ctx, depth=10) == (Ordering.EQUAL, 10)

    def test_infinite_target_needs_depth(self, ctx):
        with pytest.raises(ValueError):
            compare_kneading(Family.CUBIC, 0, ItinerarySeq.parse("1^inf"), ctx)


class TestFindParam:
    """Параметры с kneading = I1^k c1"""

    def test_parameters_decrease_with_leading_block(self, ctx):
        gammas = [
            find_param(Family.CUBIC, ItinerarySeq.parse(text), full_window(), ctx)
            for text in LEADING_TARGETS
        ]
        values = [float(g) for g in gammas]
        assert all(0 < v < float(H) for v in values)
        assert values[0] > values[1] > values[2]

    @pytest.mark.parametrize("text", LEADING_TARGETS)
    def test_found_parameter_lands_on_critical_point(self, ctx, text):
        target = ItinerarySeq.parse(text)
        bracket = find_param_bracket(Family.CUBIC, target, full_window(), ctx)
        for gamma in (bracket.lo, bracket.hi):
            k = kneading2(make_map(Family.CUBIC, gamma), len(target.head) - 1, ctx)
            assert k.has_prefix(target.head[:-1])

    def test_rejects_non_minimal_target(self, ctx):
        with pytest.raises(NotMinimal):
            find_param(Family.CUBIC, ItinerarySeq.parse("21A"), full_window(), ctx)

    def test_rejects_open_target(self, ctx):
        with pytest.raises(ValueError):
            find_param(Family.CUBIC, ItinerarySeq.parse("1111"), full_window(), ctx)

    def test_target_outside_window(self, ctx):
        # весь интервал [0, h] даёт нидинг 11... или 12..., что меньше 13A
        with pytest.raises(OrderViolation):
            find_param(Family.CUBIC, ItinerarySeq.parse("13A"), full_window(), ctx)


class TestConvPair:
    """Пары параметров для шагов конструкции"""

    def test_choose_parity(self):
        assert choose_parity(parse_word("1"), 0) == 1
        assert choose_parity(parse_word("1"), 1) == 1
        assert choose_parity(parse_word("12"), 0) == 0

    def test_parity_violation(self, ctx):
        with pytest.raises(ParityViolation):
            conv_pair(Family.CUBIC, parse_word("1"), 0, full_window(), ctx)

    def test_certify_prefix_on_small_window(self, ctx):
        w = ParamInterval(family=Family.CUBIC, lo=0, hi=Fraction(1, 2 ** 20),
                          certified_prefix=(Symbol.I1,) * 3, samples=2)
        assert certify_prefix(w, ctx=ctx)
        assert not certify_prefix(w, prefix=parse_word("12"), ctx=ctx)

    @pytest.mark.slow
    def test_pair_brackets_interval(self, ctx):
        g1, g2, interval = conv_pair(Family.CUBIC, parse_word("11"), 1, full_window(), ctx,
                                     samples=2)
        assert float(g1) < float(g2)
        assert interval.prefix_text == "11222"
        assert interval.strictly_inside(full_window())
