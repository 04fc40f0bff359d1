"""
Знаковый лексикографический порядок, сдвиг, минимальность и допустимость.
"""

from enum import IntEnum
from typing import Iterable, Optional, Sequence

from symbolic.sequences import ItinerarySeq
from symbolic.symbols import Symbol, ShiftOfCritical


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _order(x: Symbol, y: Symbol, sign: int) -> Ordering:
    diff = (x.rank - y.rank) * sign
    if diff < 0:
        return Ordering.LESS
    if diff > 0:
        return Ordering.GREATER
    return Ordering.EQUAL


def compare_from(a: ItinerarySeq, i: int, b: ItinerarySeq, j: int) -> Ordering:
    """Сравнение sigma^i a и sigma^j b без построения сдвигов"""
    sign = 1
    k = 0
    while True:
        x = a.symbol_at(i + k)
        y = b.symbol_at(j + k)
        if x is None or y is None:
            raise ValueError("Comparison ran past the end of a sequence outside the space")
        if x is not y:
            return _order(x, y, sign)
        if x.is_critical:
            return Ordering.EQUAL
        past_a = i + k >= len(a.head)
        past_b = j + k >= len(b.head)
        if past_a and past_b:
            # обе последовательности уже в одинаковом постоянном хвосте
            return Ordering.EQUAL
        sign *= x.sign
        k += 1


def cmp(a: ItinerarySeq, b: ItinerarySeq) -> Ordering:
    """a < b в знаковом лексикографическом порядке"""
    if a.open or b.open:
        raise ValueError("cmp requires complete sequences; use compare_prefixes")
    return compare_from(a, 0, b, 0)


def compare_prefixes(a: ItinerarySeq, b: ItinerarySeq) -> Optional[Ordering]:
    """
    Порядок по известным частям; None, если общая известная часть совпадает
    и порядок из нее не определяется.
    """
    sign = 1
    k = 0
    while True:
        x = a.symbol_at(k)
        y = b.symbol_at(k)
        if x is None or y is None:
            return None
        if x is not y:
            return _order(x, y, sign)
        if x.is_critical:
            return Ordering.EQUAL
        if a.tail is not None and b.tail is not None and k >= len(a.head) and k >= len(b.head):
            return Ordering.EQUAL
        sign *= x.sign
        k += 1


def lap_word_sign(word: Iterable[Symbol]) -> int:
    """eps(S): произведение знаков символов слова"""
    sign = 1
    for s in word:
        sign *= s.sign
    return sign


def shift(a: ItinerarySeq) -> ItinerarySeq:
    """sigma: отбрасывает первый символ"""
    if a.tail is not None:
        if not a.head:
            return a
        return ItinerarySeq.infinite(a.head[1:], a.tail)
    if not a.head:
        raise ValueError("Cannot shift an empty prefix")
    if a.is_finite and len(a.head) == 1:
        raise ShiftOfCritical(a.head[0])
    if a.open:
        return ItinerarySeq.prefix(a.head[1:])
    return ItinerarySeq.finite(a.head[1:])


def distinct_shift_count(a: ItinerarySeq) -> int:
    """Сколько различных сдвигов sigma^k a, k >= 0, нужно перебрать"""
    if a.tail is not None:
        return len(a.head) + 1
    return len(a.head)


def is_minimal(m: ItinerarySeq) -> bool:
    """m <= sigma^k m для всех k"""
    for k in range(1, distinct_shift_count(m)):
        if compare_from(m, 0, m, k) is Ordering.GREATER:
            return False
    return True


def leading_count(a: ItinerarySeq, symbol: Symbol = Symbol.I1) -> Optional[int]:
    """Длина начального блока из symbol; None, если вся последовательность из него"""
    if a.tail is symbol and all(s is symbol for s in a.head):
        return None
    n = 0
    while a.symbol_at(n) is symbol:
        n += 1
    return n


def is_admissible(itinerary: ItinerarySeq, kneading: ItinerarySeq) -> bool:
    """
    itinerary = I1^j a ..., a != I1, и каждый сдвиг начиная с j не меньше kneading.
    """
    j = leading_count(itinerary)
    if j is None:
        return cmp(itinerary, kneading) is not Ordering.LESS
    for p in range(j, distinct_shift_count(itinerary)):
        if compare_from(itinerary, p, kneading, 0) is Ordering.LESS:
            return False
    return True


def concat_power(word: Sequence[Symbol], n: int, tail: ItinerarySeq) -> ItinerarySeq:
    """S^n, затем tail"""
    if not word:
        raise ValueError("concat_power requires a nonempty word")
    if any(s.is_critical for s in word):
        raise ValueError("concat_power word must consist of lap symbols")
    head = tuple(word) * n + tail.head
    if tail.tail is not None:
        return ItinerarySeq.infinite(head, tail.tail)
    if tail.open:
        return ItinerarySeq.prefix(head)
    return ItinerarySeq.finite(head)
