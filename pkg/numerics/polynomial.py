from fractions import Fraction
from typing import List, Optional, Sequence

import mpmath

from numerics.bigreal import (
    BigReal, ZERO, fits_exact, mpf_abs, up_add, up_mul,
)


def _horner_value(coeffs: Sequence[mpmath.mpf], x: mpmath.mpf, prec: int) -> mpmath.mpf:
    acc = coeffs[-1]
    for a in reversed(coeffs[:-1]):
        acc = mpmath.fadd(mpmath.fmul(acc, x, prec=prec), a, prec=prec)
    return acc


def _abs_sum(coeffs: Sequence[mpmath.mpf], ax: mpmath.mpf, weights=None) -> mpmath.mpf:
    """Сумма w_k |a_k| ax^k с округлением вверх"""
    total = ZERO
    power = mpmath.mpf(1)
    for k, a in enumerate(coeffs):
        w = weights[k] if weights is not None else 1
        if w and a != 0:
            total = up_add(total, up_mul(w, mpf_abs(a), power))
        power = up_mul(power, ax)
    return total


class RealPolynomial:
    """
    Многочлен с коэффициентами BigReal (от младшего к старшему).
    Вычисление по схеме Горнера с оценкой ошибки округления, ошибки аргумента
    и ошибок коэффициентов.
    """

    __slots__ = ("coefficients", "_derivative")

    def __init__(self, coefficients: Sequence[BigReal]):
        coeffs = list(coefficients)
        while len(coeffs) > 1 and coeffs[-1].exact == 0:
            coeffs.pop()
        if not coeffs:
            raise ValueError("Polynomial needs at least one coefficient")
        self.coefficients: List[BigReal] = coeffs
        self._derivative: Optional['RealPolynomial'] = None

    @classmethod
    def from_fractions(cls, coeffs: Sequence, prec: int) -> 'RealPolynomial':
        return cls([BigReal.from_fraction(Fraction(c), prec) for c in coeffs])

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_exact(self) -> bool:
        return all(c.exact is not None for c in self.coefficients)

    def derivative(self) -> 'RealPolynomial':
        if self._derivative is None:
            if self.degree == 0:
                prec = self.coefficients[0].prec
                self._derivative = RealPolynomial([BigReal.from_fraction(0, prec)])
            else:
                self._derivative = RealPolynomial(
                    [c * k for k, c in enumerate(self.coefficients) if k > 0]
                )
        return self._derivative

    def _exact_eval(self, x: Fraction) -> Optional[Fraction]:
        acc = self.coefficients[-1].exact
        for c in reversed(self.coefficients[:-1]):
            acc = acc * x + c.exact
        return acc if fits_exact(acc) else None

    def __call__(self, x: BigReal) -> BigReal:
        prec = x.prec
        if x.exact is not None and self.is_exact:
            r = self._exact_eval(x.exact)
            if r is not None:
                return BigReal.from_fraction(r, prec)

        values = [c.value for c in self.coefficients]
        n = self.degree
        xv, e = x.value, x.err
        ax = mpf_abs(xv)
        result = _horner_value(values, xv, prec)

        # Округление Горнера: (2n+1) 2^(1-prec) sum |a_k| |x|^k
        unit = mpmath.ldexp(1, 1 - prec)
        err = up_mul(2 * n + 1, unit, _abs_sum(values, ax))

        # Погрешности коэффициентов: sum e_k (|x| + e)^k
        wide = up_add(ax, e)
        coeff_errs = [c.err for c in self.coefficients]
        if any(ce != 0 for ce in coeff_errs):
            err = up_add(err, _abs_sum(coeff_errs, wide))

        # Погрешность аргумента: e |p'(x)| + e^2 sum C(k,2) |a_k| (|x| + e)^(k-2)
        if e != 0 and n >= 1:
            dvalues = [mpmath.fmul(k, a, exact=True) for k, a in enumerate(values) if k > 0]
            dp = mpf_abs(_horner_value(dvalues, xv, prec))
            dp_round = up_mul(2 * n - 1, unit, _abs_sum(dvalues, ax))
            err = up_add(err, up_mul(e, up_add(dp, dp_round)))
            if n >= 2:
                weights = [k * (k - 1) // 2 for k in range(2, n + 1)]
                second = _abs_sum(values[2:], wide, weights)
                err = up_add(err, up_mul(e, e, second))

        return BigReal(result, err, None, prec)

    def __repr__(self) -> str:
        return f"RealPolynomial({self.coefficients!r})"
