"""
Неподвижная точка r в средней лапе, орбиты периода 2 и мультипликаторы лап.
"""

from fractions import Fraction
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict

from config.logging import get_logger
from families import BimodalMap
from numerics import (
    BigReal, Bracket, NoSignChange, PrecisionContext, newton_bisect,
)
from orbits.branches import default_tolerance, inverse_branch, lap_bounds
from orbits.errors import NoPreimage, NotFound
from symbolic import Symbol, word_text

logger = get_logger(__name__)

PERIOD2_WORDS = ((Symbol.I1, Symbol.I2), (Symbol.I1, Symbol.I3), (Symbol.I2, Symbol.I3))


class PeriodicOrbit(BaseModel):
    """Орбита периода 2 с маршрутом (ab)^inf"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    word: Tuple[Symbol, Symbol]
    points: Tuple[BigReal, BigReal]
    multiplier: BigReal

    @property
    def label(self) -> str:
        return f"({word_text(self.word)})^inf"


def fixed_point_r(m: BimodalMap, ctx: PrecisionContext) -> BigReal:
    """Единственная неподвижная точка r в (c1, c2)"""
    a, b = lap_bounds(m, Symbol.I2, ctx)

    def f(x: Fraction, c: PrecisionContext) -> BigReal:
        return m.eval(x, c) - x

    def df(x: Fraction, c: PrecisionContext) -> BigReal:
        return m.deriv(x, c) - 1

    try:
        bracket = newton_bisect(f, df, a, b, default_tolerance(ctx), ctx, what="fixed point r")
    except NoSignChange as e:
        raise NotFound("fixed point r", str(e)) from e
    return bracket.as_bigreal(ctx.bits)


def lap_multiplier(m: BimodalMap, j: int, ctx: PrecisionContext) -> BigReal:
    """|g'(s_j)| для неподвижной точки s_j лапы j: s1 = 0, s2 = r, s3 = 1"""
    if j == 1:
        point = BigReal.from_fraction(0, ctx.bits)
    elif j == 2:
        point = fixed_point_r(m, ctx)
    elif j == 3:
        point = BigReal.from_fraction(1, ctx.bits)
    else:
        raise ValueError(f"Lap index must be 1, 2 or 3, got {j}")
    return abs(m.deriv(point, ctx))


def _period2_point(m: BimodalMap, a: Symbol, b: Symbol, ctx: PrecisionContext) -> Bracket:
    """
    Неподвижная точка композиции обратных ветвей: B <- g_a^-1(g_b^-1(B)),
    начиная с лапы a; отрезки вложены и стягиваются к точке орбиты.
    """
    tol = default_tolerance(ctx)
    fine = tol / 8
    lo, hi = lap_bounds(m, a, ctx)
    current = Bracket(lo=lo, hi=hi)
    for _ in range(ctx.bits):
        if current.width <= tol:
            return current
        try:
            inner = inverse_branch(m, b, current, ctx, fine)
            nxt = inverse_branch(m, a, inner, ctx, fine)
        except NoPreimage as e:
            raise NotFound(f"period-2 orbit ({a.value}{b.value})^inf", str(e)) from e
        if nxt.width >= current.width:
            break
        current = nxt
    raise NotFound(f"period-2 orbit ({a.value}{b.value})^inf",
                   f"bracket stalled at width {float(current.width):.3g}")


def period2_orbits(m: BimodalMap, ctx: PrecisionContext) -> List[PeriodicOrbit]:
    """Три отталкивающие орбиты периода 2: (I1I2)^inf, (I1I3)^inf, (I2I3)^inf"""
    orbits = []
    for a, b in PERIOD2_WORDS:
        p = _period2_point(m, a, b, ctx).as_bigreal(ctx.bits)
        q = _period2_point(m, b, a, ctx).as_bigreal(ctx.bits)
        multiplier = abs(m.deriv(p, ctx) * m.deriv(q, ctx))
        orbit = PeriodicOrbit(word=(a, b), points=(p, q), multiplier=multiplier)
        logger.debug(f"{orbit.label} on {m.label}: multiplier {float(multiplier):.6g}")
        orbits.append(orbit)
    return orbits
