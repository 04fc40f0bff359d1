from enum import Enum

from numerics.bigreal import BigReal, mpf_abs


class Sign(Enum):
    """Сертифицированный знак; UNDECIDABLE — результат, а не ошибка"""
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1
    UNDECIDABLE = None

    @property
    def is_decided(self) -> bool:
        return self is not Sign.UNDECIDABLE

    @property
    def factor(self) -> int:
        if self is Sign.UNDECIDABLE:
            raise ValueError("Undecidable sign has no numeric factor")
        return self.value

    def flipped(self) -> 'Sign':
        if self is Sign.NEGATIVE:
            return Sign.POSITIVE
        if self is Sign.POSITIVE:
            return Sign.NEGATIVE
        return self


def certified_sign(x: BigReal) -> Sign:
    """
    -1 iff value+err < 0, +1 iff value-err > 0, 0 только для точного нуля.
    Точные рациональные значения решаются по самой дроби.
    """
    if x.exact is not None:
        if x.exact > 0:
            return Sign.POSITIVE
        if x.exact < 0:
            return Sign.NEGATIVE
        return Sign.ZERO
    v, e = x.value, x.err
    if v > e:
        return Sign.POSITIVE
    if v < 0 and mpf_abs(v) > e:
        return Sign.NEGATIVE
    if v == 0 and e == 0:
        return Sign.ZERO
    return Sign.UNDECIDABLE
