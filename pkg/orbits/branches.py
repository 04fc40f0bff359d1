"""
Обратные ветви отображения на лапах и реализация конечных маршрутов.

Точка с маршрутом i0 i1 ... i_{n-1} c_j строится с конца: отрезок вокруг c_j
последовательно поднимается монотонными обратными ветвями лап i_{n-1}, ..., i0.
На каждом шаге отрезок сертифицированно содержит искомую точку.
"""

from fractions import Fraction
from typing import Optional, Tuple

from config.logging import get_logger
from config.settings import REALIZE_TOLERANCE_FRACTION
from families import BimodalMap
from numerics import (
    BigReal, Bracket, NoSignChange, PrecisionContext, SignUndecidable,
    bisect, mpf_to_fraction, newton_bisect,
)
from orbits.errors import NoPreimage, NotAdmissible, NotRealizable
from orbits.itinerary import critical_value, kneading2
from symbolic import ItinerarySeq, Symbol, is_admissible

logger = get_logger(__name__)


def default_tolerance(ctx: PrecisionContext) -> Fraction:
    return Fraction(1, 2 ** (ctx.bits // REALIZE_TOLERANCE_FRACTION))


def bracket_of(x: BigReal) -> Bracket:
    """Отрезок [value - err, value + err] с точными концами"""
    if x.exact is not None:
        return Bracket(lo=x.exact, hi=x.exact)
    return Bracket(lo=mpf_to_fraction(x.lower()), hi=mpf_to_fraction(x.upper()))


def lap_bounds(m: BimodalMap, lap: Symbol, ctx: PrecisionContext) -> Tuple[Fraction, Fraction]:
    """Концы лапы; приближенные c_j берутся двоично-рациональными серединами"""
    c1, c2 = (c.to_fraction() for c in m.critical_points(ctx))
    if lap is Symbol.I1:
        return Fraction(0), c1
    if lap is Symbol.I2:
        return c1, c2
    if lap is Symbol.I3:
        return c2, Fraction(1)
    raise ValueError(f"Not a lap symbol: {lap}")


def lap_image(m: BimodalMap, lap: Symbol, ctx: PrecisionContext) -> Tuple[Fraction, Fraction]:
    """g(I1) = [0, 1], g(I2) = g(I3) = [v, 1]"""
    if lap is Symbol.I1:
        return Fraction(0), Fraction(1)
    return critical_value(m, ctx).to_fraction(), Fraction(1)


def _end_preimage(m: BimodalMap, lap: Symbol, upper: bool, ctx: PrecisionContext) -> Fraction:
    """Конец лапы, переходящий в нижний или верхний конец образа"""
    a, b = lap_bounds(m, lap, ctx)
    if lap is Symbol.I2:
        return a if upper else b
    return b if upper else a


def inverse_point(m: BimodalMap, lap: Symbol, y: Fraction, ctx: PrecisionContext,
                  tol: Optional[Fraction] = None) -> Bracket:
    """Прообраз точки y в лапе lap"""
    tol = default_tolerance(ctx) if tol is None else Fraction(tol)
    a, b = lap_bounds(m, lap, ctx)

    def f(x: Fraction, c: PrecisionContext) -> BigReal:
        return m.eval(x, c) - y

    def df(x: Fraction, c: PrecisionContext) -> BigReal:
        return m.deriv(x, c)

    try:
        return newton_bisect(f, df, a, b, tol, ctx, what=f"preimage in I{lap.index}")
    except NoSignChange as e:
        raise NoPreimage(lap.value, f"{float(y):.6g}") from e


def inverse_branch(m: BimodalMap, lap: Symbol, target: Bracket, ctx: PrecisionContext,
                   tol: Optional[Fraction] = None) -> Bracket:
    """
    Прообраз отрезка target при ветви лапы lap (после пересечения с образом лапы).
    NoPreimage, если target не пересекает образ.
    """
    image_lo, image_hi = lap_image(m, lap, ctx)
    lo, hi = max(target.lo, image_lo), min(target.hi, image_hi)
    if lo > hi:
        raise NoPreimage(lap.value, f"[{float(target.lo):.6g}, {float(target.hi):.6g}]")
    ends = []
    for y in ((lo,) if lo == hi else (lo, hi)):
        if y == image_lo or y == image_hi:
            x = _end_preimage(m, lap, y == image_hi, ctx)
            ends.append(Bracket(lo=x, hi=x))
        else:
            ends.append(inverse_point(m, lap, y, ctx, tol))
    return Bracket(lo=min(e.lo for e in ends), hi=max(e.hi for e in ends))


def _iterate(m: BimodalMap, x: BigReal, n: int, ctx: PrecisionContext) -> BigReal:
    for _ in range(n):
        x = m.eval(x, ctx)
    return x


def realize_bracket(m: BimodalMap, itin: ItinerarySeq, ctx: PrecisionContext,
                    kneading: Optional[ItinerarySeq] = None,
                    tol: Optional[Fraction] = None) -> Bracket:
    """Отрезок ширины <= tol, содержащий точку с конечным маршрутом itin"""
    if not itin.is_finite:
        raise ValueError("Only finite itineraries ending in a critical symbol can be realized")
    n = len(itin.head) - 1
    work = ctx.for_depth(n + 1, m.log2_expansion(ctx))
    tol = default_tolerance(ctx) if tol is None else Fraction(tol)
    if kneading is None:
        kneading = kneading2(m, n + 2, work)
    if not is_admissible(itin, kneading):
        raise NotAdmissible(str(itin), str(kneading))

    crit = itin.head[-1]
    target = bracket_of(m.critical_points(work)[crit.index - 1])
    try:
        for lap in reversed(itin.head[:-1]):
            target = inverse_branch(m, lap, target, work, tol)
    except (NoPreimage, SignUndecidable) as e:
        raise NotRealizable(str(itin), str(e)) from e

    if target.width > tol:
        j = crit.index - 1

        def f(x: Fraction, c: PrecisionContext) -> BigReal:
            return _iterate(m, BigReal.from_fraction(x, c.bits), n, c) - m.critical_points(c)[j]

        try:
            target = bisect(f, target.lo, target.hi, tol, work, what=f"realize {itin}")
        except (NoSignChange, SignUndecidable) as e:
            raise NotRealizable(str(itin), str(e)) from e
    logger.debug(f"Realized {itin} on {m.label}: width {float(target.width):.3g}")
    return target


def realize_point(m: BimodalMap, itin: ItinerarySeq, ctx: PrecisionContext,
                  kneading: Optional[ItinerarySeq] = None) -> BigReal:
    """x(itin): середина реализующего отрезка с погрешностью в полширины"""
    return realize_bracket(m, itin, ctx, kneading).as_bigreal(ctx.bits)
