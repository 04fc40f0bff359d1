"""
Маршруты точек и нидинг-последовательность второй критической точки.

Символ никогда не округляется до критического: неразрешимое сравнение
с c_j дает AmbiguousSymbol, и вычисление повторяется на большей точности.
Исключение — режим landing для отрезка (см. itinerary).
"""

from fractions import Fraction
from typing import Callable, List, Optional, Union

from config.logging import get_logger
from families import BimodalMap
from numerics import (
    BigReal, Bracket, PrecisionContext, Sign, certified_sign, mpf_to_fraction,
)
from orbits.errors import AmbiguousSymbol
from symbolic import ItinerarySeq, Symbol
from utils.escalation import run_with_escalation

logger = get_logger(__name__)

PointLike = Union[Fraction, int, BigReal, Bracket]


def symbol_of(m: BimodalMap, x: BigReal, ctx: PrecisionContext, step: int = 0) -> Symbol:
    """Символ точки x по сертифицированным знакам x - c1 и x - c2"""
    c1, c2 = m.critical_points(ctx)
    s1 = certified_sign(x - c1)
    if s1 is Sign.UNDECIDABLE:
        raise AmbiguousSymbol(step, 1)
    if s1 is Sign.NEGATIVE:
        return Symbol.I1
    if s1 is Sign.ZERO:
        return Symbol.C1
    s2 = certified_sign(x - c2)
    if s2 is Sign.UNDECIDABLE:
        raise AmbiguousSymbol(step, 2)
    if s2 is Sign.NEGATIVE:
        return Symbol.I2
    if s2 is Sign.ZERO:
        return Symbol.C2
    return Symbol.I3


def _walk(m: BimodalMap, x: BigReal, depth: int, ctx: PrecisionContext) -> ItinerarySeq:
    head: List[Symbol] = []
    for n in range(depth):
        s = symbol_of(m, x, ctx, n)
        head.append(s)
        if s.is_critical:
            return ItinerarySeq.finite(head)
        y = m.eval(x, ctx)
        if x.exact is not None and y.exact == x.exact:
            # точная неподвижная точка в лапе s
            return ItinerarySeq.infinite(head, s)
        x = y
    return ItinerarySeq.prefix(head)


def _landing(a: Symbol, b: Symbol) -> Optional[Symbol]:
    """Критический символ между символами концов отрезка, если он единственный"""
    pair = {a, b}
    for crit, neighbours in ((Symbol.C1, {Symbol.I1, Symbol.I2}),
                             (Symbol.C2, {Symbol.I2, Symbol.I3})):
        if crit in pair and pair <= neighbours | {crit}:
            return crit
        if pair == neighbours:
            return crit
    return None


def _walk_bracket(m: BimodalMap, lo: Fraction, hi: Fraction, depth: int,
                  ctx: PrecisionContext, landing: bool) -> ItinerarySeq:
    if lo == hi:
        return _walk(m, BigReal.from_fraction(lo, ctx.bits), depth, ctx)
    a = BigReal.from_fraction(lo, ctx.bits)
    b = BigReal.from_fraction(hi, ctx.bits)
    head: List[Symbol] = []
    for n in range(depth):
        sa = symbol_of(m, a, ctx, n)
        sb = symbol_of(m, b, ctx, n)
        if sa is sb and not sa.is_critical:
            head.append(sa)
            a, b = m.eval(a, ctx), m.eval(b, ctx)
            continue
        crit = _landing(sa, sb) if landing else None
        if crit is None:
            raise AmbiguousSymbol(n, 1 if Symbol.I1 in (sa, sb) else 2)
        head.append(crit)
        return ItinerarySeq.finite(head)
    return ItinerarySeq.prefix(head)


def _as_bracket(x: PointLike) -> Optional[Bracket]:
    if isinstance(x, Bracket):
        return x
    if isinstance(x, BigReal):
        if x.exact is not None:
            return Bracket(lo=x.exact, hi=x.exact)
        return Bracket(lo=mpf_to_fraction(x.lower()), hi=mpf_to_fraction(x.upper()))
    return None


def _run(m: BimodalMap, compute: Callable[[PrecisionContext], ItinerarySeq], depth: int,
         ctx: PrecisionContext, what: str) -> ItinerarySeq:
    base = ctx.for_depth(depth, m.log2_expansion(ctx))
    result, used = run_with_escalation(compute, base, AmbiguousSymbol, what)
    if used.escalations:
        logger.debug(f"{what}: resolved at {used.bits} bits")
    return result


def itinerary(m: BimodalMap, x: PointLike, depth: int, ctx: PrecisionContext,
              landing: bool = False) -> ItinerarySeq:
    """
    Маршрут точки x длины depth.

    Точное попадание в c_j дает конечную последовательность, точная неподвижная
    точка — хвост s^inf, иначе открытый префикс длины depth.
    landing=True для отрезка (или BigReal с погрешностью): неразрешимое сравнение
    с c_j на шаге n считается попаданием в c_j, если образы концов отрезка
    имеют общий префикс лап и лежат по разные стороны от c_j.
    """
    if depth < 0:
        raise ValueError("Itinerary depth must be non-negative")
    bracket = _as_bracket(x) if (landing or isinstance(x, Bracket)) else None
    if bracket is not None:
        return _run(m, lambda c: _walk_bracket(m, bracket.lo, bracket.hi, depth, c, landing),
                    depth, ctx, f"itinerary of [{float(bracket.lo):.6g}, {float(bracket.hi):.6g}]")
    if isinstance(x, BigReal):
        return _run(m, lambda c: _walk(m, x.at_prec(c.bits), depth, c), depth, ctx,
                    f"itinerary of {x!r}")
    point = Fraction(x)
    return _run(m, lambda c: _walk(m, BigReal.from_fraction(point, c.bits), depth, c),
                depth, ctx, f"itinerary of {float(point):.6g}")


def critical_value(m: BimodalMap, ctx: PrecisionContext) -> BigReal:
    """v = g(c2)"""
    return m.eval(m.critical_points(ctx)[1], ctx)


def kneading2(m: BimodalMap, depth: int, ctx: PrecisionContext) -> ItinerarySeq:
    """k2 = маршрут g(c2); k1 = I3^inf, так как g(c1) = 1 неподвижна"""
    return _run(m, lambda c: _walk(m, critical_value(m, c), depth, c), depth, ctx,
                f"kneading of {m.label}")
