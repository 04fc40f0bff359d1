"""
BigReal: вещественное число произвольной точности с оценкой абсолютной погрешности.

Истинное значение лежит в [value - err, value + err]. Погрешность переносится
по первому порядку с запасом и суммируется с округлением вверх. Если оба операнда
точные рациональные числа, результат остается точным, пока дробь помещается
в EXACT_ARITHMETIC_MAX_BITS.
"""

from fractions import Fraction
from typing import Optional, Union

import mpmath

from config.settings import EXACT_ARITHMETIC_MAX_BITS
from numerics.errors import UncertainDivisor

# Точность, с которой хранятся и складываются сами оценки погрешности
ERR_PREC = 64

ZERO = mpmath.mpf(0)

Number = Union[int, Fraction]


def exact_int(n: int) -> mpmath.mpf:
    """Точное mpf для целого любой длины"""
    return mpmath.fadd(n, 0, exact=True)


def mpf_abs(v: mpmath.mpf) -> mpmath.mpf:
    return v if v >= 0 else mpmath.fneg(v, exact=True)


def up_add(*terms) -> mpmath.mpf:
    total = ZERO
    for t in terms:
        total = mpmath.fadd(total, t, prec=ERR_PREC, rounding='u')
    return total


def up_mul(*factors) -> mpmath.mpf:
    total = mpmath.mpf(1)
    for f in factors:
        total = mpmath.fmul(total, f, prec=ERR_PREC, rounding='u')
    return total


def up_div(a, b) -> mpmath.mpf:
    return mpmath.fdiv(a, b, prec=ERR_PREC, rounding='u')


def rounding_bound(v: mpmath.mpf, prec: int) -> mpmath.mpf:
    """Граница ошибки округления к ближайшему на точности prec"""
    return up_mul(mpf_abs(v), mpmath.ldexp(1, 1 - prec))


def fits_exact(fr: Fraction) -> bool:
    return fr.numerator.bit_length() + fr.denominator.bit_length() <= EXACT_ARITHMETIC_MAX_BITS


def fraction_value(fr: Fraction, prec: int):
    """Значение дроби на точности prec и граница ошибки представления"""
    num, den = fr.numerator, fr.denominator
    v = mpmath.fdiv(num, den, prec=prec)
    if num == 0:
        return v, ZERO
    dyadic = den & (den - 1) == 0
    if dyadic and abs(num).bit_length() <= prec:
        return v, ZERO
    return v, rounding_bound(v, prec)


class BigReal:
    """Число с погрешностью; неизменяемое"""

    __slots__ = ("value", "err", "exact", "prec")

    def __init__(self, value: mpmath.mpf, err: mpmath.mpf = ZERO,
                 exact: Optional[Fraction] = None, prec: int = 256):
        self.value = value
        self.err = err
        self.exact = exact
        self.prec = prec

    # ------------------------------------------------------------------
    # Конструкторы
    # ------------------------------------------------------------------

    @classmethod
    def from_fraction(cls, fr: Number, prec: int) -> 'BigReal':
        fr = Fraction(fr)
        v, e = fraction_value(fr, prec)
        return cls(v, e, fr if fits_exact(fr) else None, prec)

    @classmethod
    def from_mpf(cls, value: mpmath.mpf, err: mpmath.mpf, prec: int) -> 'BigReal':
        return cls(value, mpf_abs(err), None, prec)

    def widen(self, extra: Union[Number, mpmath.mpf]) -> 'BigReal':
        """Та же середина, погрешность увеличена на extra"""
        if isinstance(extra, mpmath.mpf):
            extra = mpf_abs(extra)
        else:
            extra = Fraction(abs(Fraction(extra)))
            extra = mpmath.fdiv(extra.numerator, extra.denominator, prec=ERR_PREC, rounding='u')
        if extra == 0:
            return self
        return BigReal(self.value, up_add(self.err, extra), None, self.prec)

    def at_prec(self, prec: int) -> 'BigReal':
        """Пересчитать точное значение на другой точности; неточные копируются"""
        if self.exact is not None:
            return BigReal.from_fraction(self.exact, prec)
        return BigReal(self.value, self.err, None, prec)

    def _coerce(self, other) -> 'BigReal':
        if isinstance(other, BigReal):
            return other
        if isinstance(other, (int, Fraction)):
            return BigReal.from_fraction(other, self.prec)
        raise TypeError(f"Cannot combine BigReal with {type(other).__name__}")

    # ------------------------------------------------------------------
    # Арифметика
    # ------------------------------------------------------------------

    def __add__(self, other) -> 'BigReal':
        o = self._coerce(other)
        prec = max(self.prec, o.prec)
        if self.exact is not None and o.exact is not None:
            r = self.exact + o.exact
            if fits_exact(r):
                return BigReal.from_fraction(r, prec)
        v = mpmath.fadd(self.value, o.value, prec=prec)
        return BigReal(v, up_add(self.err, o.err, rounding_bound(v, prec)), None, prec)

    __radd__ = __add__

    def __neg__(self) -> 'BigReal':
        exact = -self.exact if self.exact is not None else None
        return BigReal(mpmath.fneg(self.value, exact=True), self.err, exact, self.prec)

    def __sub__(self, other) -> 'BigReal':
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> 'BigReal':
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> 'BigReal':
        o = self._coerce(other)
        prec = max(self.prec, o.prec)
        if self.exact is not None and o.exact is not None:
            r = self.exact * o.exact
            if fits_exact(r):
                return BigReal.from_fraction(r, prec)
        v = mpmath.fmul(self.value, o.value, prec=prec)
        err = up_add(
            up_mul(mpf_abs(self.value), o.err),
            up_mul(mpf_abs(o.value), self.err),
            up_mul(self.err, o.err),
            rounding_bound(v, prec),
        )
        return BigReal(v, err, None, prec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'BigReal':
        o = self._coerce(other)
        prec = max(self.prec, o.prec)
        b = mpf_abs(o.value)
        if o.exact is not None:
            if o.exact == 0:
                raise ZeroDivisionError("BigReal division by exact zero")
        elif not b > o.err:
            raise UncertainDivisor(mpmath.nstr(o.value, 10), mpmath.nstr(o.err, 3))
        if self.exact is not None and o.exact is not None:
            r = self.exact / o.exact
            if fits_exact(r):
                return BigReal.from_fraction(r, prec)
        v = mpmath.fdiv(self.value, o.value, prec=prec)
        num = up_add(up_mul(mpf_abs(self.value), o.err), up_mul(b, self.err))
        gap = mpmath.fsub(b, o.err, prec=ERR_PREC, rounding='d')
        den = mpmath.fmul(b, gap, prec=ERR_PREC, rounding='d')
        err = up_add(up_div(num, den), rounding_bound(v, prec))
        return BigReal(v, err, None, prec)

    def __rtruediv__(self, other) -> 'BigReal':
        return self._coerce(other) / self

    def __pow__(self, n: int) -> 'BigReal':
        if not isinstance(n, int) or n < 0:
            raise ValueError("BigReal power supports non-negative integers only")
        result = BigReal.from_fraction(1, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __abs__(self) -> 'BigReal':
        if self.exact is not None:
            return BigReal(mpf_abs(self.value), self.err, abs(self.exact), self.prec)
        return BigReal(mpf_abs(self.value), self.err, None, self.prec)

    def log(self) -> 'BigReal':
        """Натуральный логарифм; аргумент должен быть сертифицированно положителен"""
        if not self.value > self.err:
            raise UncertainDivisor(mpmath.nstr(self.value, 10), mpmath.nstr(self.err, 3))
        v = mpmath.ln(self.value, prec=self.prec)
        gap = mpmath.fsub(self.value, self.err, prec=ERR_PREC, rounding='d')
        err = up_add(
            up_div(self.err, gap),
            up_mul(rounding_bound(v, self.prec), 2),
            mpmath.ldexp(1, -self.prec),
        )
        return BigReal(v, err, None, self.prec)

    # ------------------------------------------------------------------
    # Доступ
    # ------------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def lower(self) -> mpmath.mpf:
        return mpmath.fsub(self.value, self.err, prec=self.prec, rounding='d')

    def upper(self) -> mpmath.mpf:
        return mpmath.fadd(self.value, self.err, prec=self.prec, rounding='u')

    def contains(self, x: Number) -> bool:
        """Лежит ли точное рациональное x в [value - err, value + err]"""
        from numerics.codec import mpf_to_fraction
        x = Fraction(x)
        v = mpf_to_fraction(self.value)
        return abs(x - v) <= mpf_to_fraction(self.err)

    def to_fraction(self) -> Fraction:
        """Точное рациональное значение середины"""
        if self.exact is not None:
            return self.exact
        from numerics.codec import mpf_to_fraction
        return mpf_to_fraction(self.value)

    def __float__(self) -> float:
        if self.exact is not None:
            return float(self.exact)
        return float(self.value)

    def __repr__(self) -> str:
        if self.exact is not None:
            return f"BigReal({self.exact})"
        return f"BigReal({mpmath.nstr(self.value, 20)} +/- {mpmath.nstr(self.err, 3)})"
