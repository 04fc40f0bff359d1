"""
Символьное разложение коэффициентов обоих семейств.

g(x) = N(x) / D, где коэффициенты N при степенях x и знаменатель D —
многочлены от параметра gamma (и от x0 для семейства степени 7)
с рациональными коэффициентами. Разложение делается один раз через sympy.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Tuple

import sympy as sp
from pydantic import BaseModel, ConfigDict

from config.logging import get_logger

logger = get_logger(__name__)

# Таблица многочлена от параметров: ((степени параметров), коэффициент)
Monomials = Tuple[Tuple[Tuple[int, ...], Fraction], ...]

GAMMA, X0, X = sp.symbols('gamma x0 x', real=True)


class MapExpansion(BaseModel):
    """Разложенные коэффициенты семейства"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    parameters: Tuple[str, ...]
    numerator: Tuple[Monomials, ...]   # от младшей степени x к старшей
    denominator: Monomials


def chebyshev_t2(y):
    return y ** 3 - 3 * y


def outer_t7(y):
    """T(0) = 0, T'(y) = (y^2 - 1)^3"""
    return y ** 7 / 7 - sp.Rational(3, 5) * y ** 5 + y ** 3 - y


T2_COEFFICIENTS = (0, -3, 0, 1)
T7_COEFFICIENTS = (0, -1, 0, 1, 0, Fraction(-3, 5), 0, Fraction(1, 7))
DEG7_Y0 = Fraction(16, 35)


def _to_fraction(value) -> Fraction:
    value = sp.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _monomials(expr, params) -> Monomials:
    poly = sp.Poly(sp.expand(expr), *params)
    return tuple(
        (tuple(int(e) for e in monom), _to_fraction(coeff))
        for monom, coeff in poly.terms()
        if coeff != 0
    )


def _expand(numerator_expr, denominator_expr, params) -> MapExpansion:
    poly_x = sp.Poly(sp.expand(numerator_expr), X)
    coeffs = list(reversed(poly_x.all_coeffs()))
    return MapExpansion(
        parameters=tuple(str(p) for p in params),
        numerator=tuple(_monomials(c, params) for c in coeffs),
        denominator=_monomials(denominator_expr, params),
    )


@lru_cache(maxsize=None)
def cubic_expansion() -> MapExpansion:
    """g = Q o T2 o P, P(x) = x(4+gamma) - 2 - gamma"""
    p = X * (4 + GAMMA) - 2 - GAMMA
    low = chebyshev_t2(-2 - GAMMA)
    numerator = chebyshev_t2(p) - low
    denominator = 2 - low
    assert sp.expand(denominator - (GAMMA + 1) ** 2 * (GAMMA + 4)) == 0
    expansion = _expand(numerator, denominator, (GAMMA,))
    logger.debug(f"Cubic family expanded: degree {len(expansion.numerator) - 1}")
    return expansion


@lru_cache(maxsize=None)
def deg7_expansion() -> MapExpansion:
    """h = S o T o R, R(x) = x(2 x0 + gamma) - x0 - gamma"""
    r = X * (2 * X0 + GAMMA) - X0 - GAMMA
    low = outer_t7(-X0 - GAMMA)
    y0 = sp.Rational(DEG7_Y0.numerator, DEG7_Y0.denominator)
    assert outer_t7(sp.Integer(-1)) == y0
    numerator = outer_t7(r) - low
    denominator = y0 - low
    expansion = _expand(numerator, denominator, (GAMMA, X0))
    logger.debug(f"Degree-7 family expanded: degree {len(expansion.numerator) - 1}")
    return expansion
