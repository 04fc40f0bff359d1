"""
Бимодальные отображения двух семейств: кубическое g = Q o T2 o P
и семейство степени 7 h = S o T o R.
"""

import math
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple, Union

import mpmath
from pydantic import BaseModel, ConfigDict, PrivateAttr, field_validator

from config.logging import get_logger
from config.settings import (
    CUBIC_GAMMA_MAX, DEG7_GAMMA_MAX, DEG7_X0_BRACKET, PRECISION_GUARD_BITS,
)
from families.expansions import (
    MapExpansion, Monomials, cubic_expansion, deg7_expansion,
    T2_COEFFICIENTS, T7_COEFFICIENTS, DEG7_Y0,
)
from numerics import (
    BigReal, PrecisionContext, RealPolynomial, Sign, certified_sign, newton_bisect,
    UncertainDivisor,
)

logger = get_logger(__name__)

Point = Union[BigReal, Fraction, int]


class FamilyError(Exception):
    """Базовое исключение пакета families"""


class ParamOutOfRange(FamilyError):
    """Параметр вне допустимого диапазона семейства"""

    def __init__(self, family: str, gamma: Fraction, gamma_max: Fraction):
        self.family = family
        self.gamma = gamma
        self.gamma_max = gamma_max
        super().__init__(
            f"Parameter {gamma} outside [0, {gamma_max}] for family {family}"
        )


class NearCritical(FamilyError):
    """Точка слишком близка к критической для вычисления производной Шварца"""

    def __init__(self, x: str, critical: int):
        self.x = x
        self.critical = critical
        super().__init__(f"Point {x} is within tolerance of critical point c{critical}")


class Family(str, Enum):
    CUBIC = "cubic"
    DEG7 = "deg7"

    @property
    def gamma_max(self) -> Fraction:
        return Fraction(CUBIC_GAMMA_MAX if self is Family.CUBIC else DEG7_GAMMA_MAX)

    @property
    def expansion(self) -> MapExpansion:
        return cubic_expansion() if self is Family.CUBIC else deg7_expansion()


def _point(x: Point, prec: int) -> BigReal:
    if isinstance(x, BigReal):
        return x
    return BigReal.from_fraction(Fraction(x), prec)


# ----------------------------------------------------------------------
# Сырые внешние многочлены
# ----------------------------------------------------------------------

def chebyshev_polynomial(prec: int) -> RealPolynomial:
    """T2(x) = x^3 - 3x"""
    return RealPolynomial.from_fractions(T2_COEFFICIENTS, prec)


def outer_polynomial(prec: int) -> RealPolynomial:
    """T(x) = x^7/7 - 3x^5/5 + x^3 - x"""
    return RealPolynomial.from_fractions(T7_COEFFICIENTS, prec)


def polynomial_schwarzian(poly: RealPolynomial, x: BigReal) -> BigReal:
    """S f = f'''/f' - 3/2 (f''/f')^2"""
    d1 = poly.derivative()
    d2 = d1.derivative()
    d3 = d2.derivative()
    f1 = d1(x)
    if certified_sign(f1) not in (Sign.NEGATIVE, Sign.POSITIVE):
        raise UncertainDivisor(str(x), "derivative")
    ratio = d2(x) / f1
    return d3(x) / f1 - ratio * ratio * Fraction(3, 2)


@lru_cache(maxsize=32)
def deg7_x0(bits: int) -> BigReal:
    """Корень T(x) = 16/35 на (3/2, 2); вычисляется один раз на каждую точность"""
    ctx = PrecisionContext(bits=bits + PRECISION_GUARD_BITS)

    def f(x: Fraction, c: PrecisionContext) -> BigReal:
        return outer_polynomial(c.bits)(BigReal.from_fraction(x, c.bits)) - DEG7_Y0

    def df(x: Fraction, c: PrecisionContext) -> BigReal:
        return outer_polynomial(c.bits).derivative()(BigReal.from_fraction(x, c.bits))

    lo, hi = (Fraction(v) for v in DEG7_X0_BRACKET)
    bracket = newton_bisect(f, df, lo, hi, Fraction(1, 2 ** (bits + 32)), ctx, what="deg7 x0")
    x0 = bracket.as_bigreal(bits)
    logger.debug(f"deg7 x0 computed at {bits} bits: {mpmath.nstr(x0.value, 20)}")
    return x0


def _eval_monomials(table: Monomials, params: Tuple[BigReal, ...], prec: int) -> BigReal:
    total = BigReal.from_fraction(0, prec)
    powers: Dict[Tuple[int, int], BigReal] = {}
    for exponents, coeff in table:
        term = BigReal.from_fraction(coeff, prec)
        for idx, e in enumerate(exponents):
            if e:
                key = (idx, e)
                if key not in powers:
                    powers[key] = params[idx] ** e
                term = term * powers[key]
        total = total + term
    return total


class _Realization:
    """Коэффициенты и критические точки на одной точности"""
    __slots__ = ("poly", "c1", "c2")

    def __init__(self, poly: RealPolynomial, c1: BigReal, c2: BigReal):
        self.poly = poly
        self.c1 = c1
        self.c2 = c2


class BimodalMap(BaseModel):
    """Отображение семейства с параметром gamma; неизменяемое"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: Family
    gamma: Fraction

    _cache: Dict[int, _Realization] = PrivateAttr(default_factory=dict)

    @field_validator('gamma', mode='before')
    @classmethod
    def to_fraction(cls, v) -> Fraction:
        if isinstance(v, BigReal):
            return v.to_fraction()
        return Fraction(v)

    @property
    def label(self) -> str:
        return f"{self.family.value}(gamma={self.gamma})"

    # ------------------------------------------------------------------
    # Коэффициенты
    # ------------------------------------------------------------------

    def _realize(self, bits: int) -> _Realization:
        cached = self._cache.get(bits)
        if cached is not None:
            return cached
        gamma = BigReal.from_fraction(self.gamma, bits)
        expansion = self.family.expansion
        if self.family is Family.CUBIC:
            params = (gamma,)
            c1 = (gamma + 1) / (gamma + 4)
            c2 = (gamma + 3) / (gamma + 4)
        else:
            x0 = deg7_x0(bits)
            params = (gamma, x0)
            scale = x0 * 2 + gamma
            c1 = (x0 + gamma - 1) / scale
            c2 = (x0 + gamma + 1) / scale
        denominator = _eval_monomials(expansion.denominator, params, bits)
        coeffs = [_eval_monomials(t, params, bits) / denominator for t in expansion.numerator]
        realization = _Realization(RealPolynomial(coeffs), c1, c2)
        self._cache[bits] = realization
        return realization

    def polynomial(self, ctx: PrecisionContext) -> RealPolynomial:
        return self._realize(ctx.bits).poly

    # ------------------------------------------------------------------
    # Вычисления
    # ------------------------------------------------------------------

    def eval(self, x: Point, ctx: PrecisionContext) -> BigReal:
        return self.polynomial(ctx)(_point(x, ctx.bits))

    def deriv(self, x: Point, ctx: PrecisionContext, order: int = 1) -> BigReal:
        if order not in (1, 2, 3):
            raise ValueError("Derivative order must be 1, 2 or 3")
        poly = self.polynomial(ctx)
        for _ in range(order):
            poly = poly.derivative()
        return poly(_point(x, ctx.bits))

    def critical_points(self, ctx: PrecisionContext) -> Tuple[BigReal, BigReal]:
        r = self._realize(ctx.bits)
        return r.c1, r.c2

    def schwarzian(self, x: Point, ctx: PrecisionContext,
                   tol: Optional[Fraction] = None) -> BigReal:
        """S g(x); NearCritical ближе tol к c1, c2 или при неотделимой от нуля g'"""
        x = _point(x, ctx.bits)
        tol = Fraction(1, 2 ** (ctx.bits // 4)) if tol is None else Fraction(tol)
        for j, c in enumerate(self.critical_points(ctx), start=1):
            if certified_sign(abs(x - c) - tol) is not Sign.POSITIVE:
                raise NearCritical(str(x), j)
        try:
            return polynomial_schwarzian(self.polynomial(ctx), x)
        except UncertainDivisor:
            raise NearCritical(str(x), 0)

    def outside_domain(self, x: BigReal) -> bool:
        """Сертифицированно вне [0, 1]"""
        return certified_sign(x) is Sign.NEGATIVE or certified_sign(x - 1) is Sign.POSITIVE

    def expansion_bound(self, ctx: PrecisionContext) -> BigReal:
        """max |g'| на [0, 1]; достигается на концах"""
        d0 = abs(self.deriv(0, ctx))
        d1 = abs(self.deriv(1, ctx))
        return d0 if d0.value >= d1.value else d1

    def log2_expansion(self, ctx: PrecisionContext) -> float:
        """log2 оценки роста погрешности за итерацию, для выбора точности"""
        bound = self.expansion_bound(ctx)
        return math.log2(float(bound.upper()) + 1.0)


def make_map(family: Union[Family, str], gamma, gamma_max: Optional[Fraction] = None) -> BimodalMap:
    """Отображение семейства; ParamOutOfRange вне [0, h]"""
    family = Family(family)
    gamma = gamma.to_fraction() if isinstance(gamma, BigReal) else Fraction(gamma)
    limit = family.gamma_max if gamma_max is None else Fraction(gamma_max)
    if gamma < 0 or gamma > limit:
        raise ParamOutOfRange(family.value, gamma, limit)
    return BimodalMap(family=family, gamma=gamma)


def exponent_gap_sides(cubic: BimodalMap, deg7: BimodalMap, r_cubic: BigReal,
                       r_deg7: BigReal, ctx: PrecisionContext) -> Tuple[BigReal, BigReal]:
    """
    Левая и правая границы щели для eta:
    1/2 log|g'(1)| / log|g'(r)|  <  theta1 < theta2  <  3/4 log|h'(1)| / log|h'(r~)|
    """
    left = abs(cubic.deriv(1, ctx)).log() / abs(cubic.deriv(r_cubic, ctx)).log() * Fraction(1, 2)
    right = abs(deg7.deriv(1, ctx)).log() / abs(deg7.deriv(r_deg7, ctx)).log() * Fraction(3, 4)
    return left, right


def exponent_gap(ctx: PrecisionContext) -> Tuple[BigReal, BigReal]:
    """Щель при gamma = gamma' = 0, где обе неподвижные точки равны 1/2"""
    half = BigReal.from_fraction(Fraction(1, 2), ctx.bits)
    return exponent_gap_sides(make_map(Family.CUBIC, 0), make_map(Family.DEG7, 0),
                              half, half, ctx)
