import random

import pytest

from symbolic import (
    ItinerarySeq, Ordering, SequenceParseError, ShiftOfCritical, Symbol, cmp, compare_prefixes,
    concat_power, is_admissible, is_minimal, lap_word_sign, leading_count, parse_word, shift,
    word_text,
)

# Тестовые константы
RANDOM_TRIPLES = 500
RANDOM_SEED = 20240611
LAP_CHOICES = (Symbol.I1, Symbol.I2, Symbol.I3)


def seq(text: str) -> ItinerarySeq:
    return ItinerarySeq.parse(text)


def _random_sequence(rng: random.Random) -> ItinerarySeq:
    head = [rng.choice(LAP_CHOICES) for _ in range(rng.randint(0, 6))]
    if rng.random() < 0.5:
        return ItinerarySeq.finite(head + [rng.choice((Symbol.C1, Symbol.C2))])
    return ItinerarySeq.infinite(head, rng.choice(LAP_CHOICES))


class TestParsing:
    """Три формы последовательностей и их текст"""

    def test_infinite_tail(self):
        s = seq("122^inf")
        assert s.is_infinite
        assert s.head == (Symbol.I1,)
        assert s.tail is Symbol.I2
        assert str(s) == "12^inf"

    def test_finite_ends_with_critical(self):
        s = seq("11A")
        assert s.is_finite
        assert s.size == 3

    def test_open_prefix(self):
        s = seq("1111111111")
        assert s.open
        assert str(s) == "1111111111"
        assert s.symbols(20) == (Symbol.I1,) * 10

    @pytest.mark.parametrize("text", ["1A2B", "12x", "^inf", "A^inf"])
    def test_rejects_malformed(self, text):
        with pytest.raises(SequenceParseError):
            seq(text)

    def test_word_round_trip(self):
        assert word_text(parse_word("1322")) == "1322"
        with pytest.raises(SequenceParseError):
            parse_word("12A")


class TestOrder:
    """Знаковый лексикографический порядок"""

    def test_first_symbol_decides(self):
        assert cmp(seq("1^inf"), seq("2^inf")) is Ordering.LESS
        assert cmp(seq("3^inf"), seq("B")) is Ordering.GREATER
        assert cmp(seq("A"), seq("1^inf")) is Ordering.GREATER

    def test_sign_flips_after_decreasing_lap(self):
        # после I2 порядок меняется на обратный
        assert cmp(seq("21^inf"), seq("23^inf")) is Ordering.GREATER
        assert cmp(seq("11^inf"), seq("13^inf")) is Ordering.LESS
        assert cmp(seq("31^inf"), seq("33^inf")) is Ordering.LESS

    def test_equal_sequences(self):
        assert cmp(seq("122^inf"), seq("12^inf")) is Ordering.EQUAL
        assert cmp(seq("12B"), seq("12B")) is Ordering.EQUAL

    def test_open_prefixes_require_compare_prefixes(self):
        with pytest.raises(ValueError):
            cmp(seq("111"), seq("1^inf"))
        assert compare_prefixes(seq("111"), seq("1^inf")) is None
        assert compare_prefixes(seq("112"), seq("1^inf")) is Ordering.GREATER

    def test_total_order_axioms(self):
        rng = random.Random(RANDOM_SEED)
        for _ in range(RANDOM_TRIPLES):
            a, b, c = (_random_sequence(rng) for _ in range(3))
            ab, ba = cmp(a, b), cmp(b, a)
            assert ab == -ba
            if ab is Ordering.EQUAL:
                assert str(a) == str(b)
            if ab is not Ordering.GREATER and cmp(b, c) is not Ordering.GREATER:
                assert cmp(a, c) is not Ordering.GREATER


class TestShiftAndMinimality:
    """Сдвиг, минимальность и допустимость"""

    def test_shift_forms(self):
        assert str(shift(seq("12^inf"))) == "2^inf"
        assert str(shift(seq("2^inf"))) == "2^inf"
        assert str(shift(seq("12B"))) == "2B"
        with pytest.raises(ShiftOfCritical):
            shift(seq("B"))

    def test_minimal_sequences(self):
        assert is_minimal(seq("1^inf"))
        assert is_minimal(seq("12^inf"))
        assert is_minimal(seq("1112^inf"))
        assert not is_minimal(seq("212^inf"))

    def test_leading_count(self):
        assert leading_count(seq("1112^inf")) == 3
        assert leading_count(seq("1^inf")) is None
        assert leading_count(seq("2B")) == 0

    def test_admissibility_against_constant_kneading(self):
        kneading = seq("1^inf")
        assert is_admissible(seq("2^inf"), kneading)
        assert is_admissible(seq("13A"), kneading)

    def test_lap_word_sign(self):
        assert lap_word_sign(parse_word("2")) == -1
        assert lap_word_sign(parse_word("22")) == 1
        assert lap_word_sign(parse_word("1322")) == 1

    def test_concat_power(self):
        s = concat_power(parse_word("12"), 2, seq("3^inf"))
        assert str(s) == "12123^inf"
        with pytest.raises(ValueError):
            concat_power((), 1, seq("A"))
