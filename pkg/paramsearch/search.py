"""
Поиск параметров с заданной нидинг-последовательностью.

find_param работает в две фазы: сначала бисекция по gamma с компаратором
нидинга сужает окно, пока на обоих концах не стабилизируется префикс лап цели,
затем сертифицированная бисекция находит ноль g^|m|(c2) - c_j на этом подокне.
"""

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from config.logging import get_logger
from config.settings import (
    PARAM_BISECT_GUARD_BITS, PARAM_PROBE_OFFSETS, REALIZE_TOLERANCE_FRACTION,
)
from families import BimodalMap, Family, make_map
from numerics import (
    BigReal, Bracket, NoSignChange, PrecisionContext, Sign, SignUndecidable,
    bisect, certified_sign, fraction_text,
)
from orbits import AmbiguousSymbol, critical_value, kneading2
from paramsearch.errors import (
    BracketLost, NotMinimal, OrderViolation, ParityViolation, PrefixNotCertified,
)
from paramsearch.interval import ParamInterval
from symbolic import (
    ItinerarySeq, Ordering, Symbol, is_minimal, lap_word_sign, parse_word, word_text,
)
from utils.escalation import run_with_escalation
from utils.monitoring import measure_latency
from utils.parallel import map_parameters

logger = get_logger(__name__)

Comparison = Tuple[Ordering, int]

_BY_SIGN = {
    Sign.NEGATIVE: Ordering.LESS,
    Sign.ZERO: Ordering.EQUAL,
    Sign.POSITIVE: Ordering.GREATER,
}


def _side(x: BigReal, c: BigReal, step: int, j: int) -> Sign:
    s = certified_sign(x - c)
    if not s.is_decided:
        raise AmbiguousSymbol(step, j)
    return s


def _symbol_order(m: BimodalMap, x: BigReal, target: Symbol, ctx: PrecisionContext,
                  step: int) -> Ordering:
    """
    Порядок символа точки x относительно символа цели.
    Сравнивается только то c_j, от которого зависит ответ.
    """
    c1, c2 = m.critical_points(ctx)
    if target is Symbol.I1:
        return Ordering.EQUAL if _side(x, c1, step, 1) is Sign.NEGATIVE else Ordering.GREATER
    if target is Symbol.C1:
        return _BY_SIGN[_side(x, c1, step, 1)]
    if target is Symbol.I2:
        if _side(x, c1, step, 1) is not Sign.POSITIVE:
            return Ordering.LESS
        return Ordering.EQUAL if _side(x, c2, step, 2) is Sign.NEGATIVE else Ordering.GREATER
    if target is Symbol.C2:
        return _BY_SIGN[_side(x, c2, step, 2)]
    return Ordering.EQUAL if _side(x, c2, step, 2) is Sign.POSITIVE else Ordering.LESS


def _compare_walk(m: BimodalMap, target: ItinerarySeq, depth: int,
                  ctx: PrecisionContext) -> Comparison:
    x = critical_value(m, ctx)
    sign = 1
    for i in range(depth):
        t = target.symbol_at(i)
        if t is None:
            return Ordering.EQUAL, i
        raw = _symbol_order(m, x, t, ctx, i)
        if raw is not Ordering.EQUAL:
            return Ordering(raw.value * sign), i
        if t.is_critical:
            return Ordering.EQUAL, i
        sign *= t.sign
        x = m.eval(x, ctx)
    return Ordering.EQUAL, depth


def compare_kneading(family: Union[Family, str], gamma, target: ItinerarySeq,
                     ctx: PrecisionContext, depth: Optional[int] = None) -> Comparison:
    """
    Порядок k2(gamma) относительно target и номер первого различающегося символа.
    EQUAL с номером depth: совпадение на всей проверенной глубине.
    """
    m = make_map(family, gamma)
    if depth is None:
        if target.is_infinite:
            raise ValueError("Comparison with an infinite target requires an explicit depth")
        depth = len(target.head)
    base = ctx.for_depth(depth + 1, m.log2_expansion(ctx))
    result, _ = run_with_escalation(
        lambda c: _compare_walk(m, target, depth, c), base, AmbiguousSymbol,
        f"kneading comparison at gamma={float(m.gamma):.6g}",
    )
    return result


def _probe_compare(family: Family, lo: Fraction, hi: Fraction, target: ItinerarySeq,
                   ctx: PrecisionContext) -> Tuple[Fraction, Ordering, int]:
    """Компаратор в середине; при неразрешимом символе — в сдвинутых точках"""
    mid = (lo + hi) / 2
    candidates = [mid]
    for k in PARAM_PROBE_OFFSETS:
        shift = (hi - lo) / 2 ** k
        candidates.extend([mid - shift, mid + shift])
    last_error: Optional[AmbiguousSymbol] = None
    for gamma in candidates:
        try:
            order, index = compare_kneading(family, gamma, target, ctx)
            return gamma, order, index
        except AmbiguousSymbol as e:
            last_error = e
    raise last_error


def _search_tolerance(window: ParamInterval, ctx: PrecisionContext) -> Fraction:
    return min(window.width / 2 ** PARAM_BISECT_GUARD_BITS,
               Fraction(1, 2 ** (ctx.bits // REALIZE_TOLERANCE_FRACTION)))


def _landing_function(family: Family, n: int, j: int):
    """F(gamma) = g^(n+1)(c2) - c_j(gamma)"""

    def f(gamma: Fraction, c: PrecisionContext) -> BigReal:
        m = BimodalMap(family=family, gamma=gamma)
        x = critical_value(m, c)
        for _ in range(n):
            x = m.eval(x, c)
        return x - m.critical_points(c)[j]

    return f


def find_param_bracket(family: Union[Family, str], target: ItinerarySeq,
                       window: ParamInterval, ctx: PrecisionContext) -> Bracket:
    """Отрезок параметров, содержащий gamma с k2(gamma) = target"""
    family = Family(family)
    if not target.is_finite:
        raise ValueError("find_param requires a finite target sequence")
    if not is_minimal(target):
        raise NotMinimal(str(target))
    n = len(target.head) - 1
    lo, hi = window.lo, window.hi
    o_lo, i_lo = compare_kneading(family, lo, target, ctx)
    o_hi, i_hi = compare_kneading(family, hi, target, ctx)
    if o_lo is not Ordering.LESS or o_hi is not Ordering.GREATER:
        raise OrderViolation(str(target), o_lo.name.lower(), o_hi.name.lower())

    tol = _search_tolerance(window, ctx)
    steps = 0
    while i_lo < n or i_hi < n:
        if hi - lo <= tol:
            raise BracketLost(str(target), f"{float(hi - lo):.3g}",
                              f"lap prefix unstable (first differences at {i_lo}, {i_hi})")
        gamma, order, index = _probe_compare(family, lo, hi, target, ctx)
        steps += 1
        if order is Ordering.EQUAL:
            logger.debug(f"find_param {target}: exact hit at gamma={gamma}")
            return Bracket(lo=gamma, hi=gamma)
        if order is Ordering.LESS:
            lo, i_lo = gamma, index
        else:
            hi, i_hi = gamma, index
    logger.debug(
        f"find_param {target}: prefix-stable window after {steps} comparator steps, "
        f"width {float(hi - lo):.3g}"
    )

    j = target.head[-1].index - 1
    work = ctx.for_depth(n + 1, make_map(family, hi).log2_expansion(ctx))
    try:
        bracket = bisect(_landing_function(family, n, j), lo, hi, tol, work,
                         what=f"parameter for {target}")
    except (NoSignChange, SignUndecidable) as e:
        raise BracketLost(str(target), f"{float(hi - lo):.3g}", str(e)) from e

    if not bracket.is_point:
        ends = (compare_kneading(family, bracket.lo, target, ctx),
                compare_kneading(family, bracket.hi, target, ctx))
        if ends[0][1] < n or ends[1][1] < n or ends[0][0] is ends[1][0]:
            raise BracketLost(str(target), f"{float(bracket.width):.3g}",
                              "lap prefix changed inside the landing bracket")
    return bracket


@measure_latency
def find_param(family: Union[Family, str], target: ItinerarySeq, window: ParamInterval,
               ctx: PrecisionContext) -> BigReal:
    """gamma с k2(gamma) = target; погрешность — полширины найденного отрезка"""
    return find_param_bracket(family, target, window, ctx).as_bigreal(ctx.bits)


def choose_parity(S: Sequence[Symbol], k: int) -> int:
    """k или k+1 так, чтобы eps(S I2^(k+1)) = +1"""
    if lap_word_sign(tuple(S) + (Symbol.I2,) * (k + 1)) == 1:
        return k
    return k + 1


def _sample_has_prefix(job: Tuple[str, Fraction, str, int, int, int]) -> bool:
    """Рабочая функция выборки: отдельный процесс, аргументы сериализуются pickle"""
    family, gamma, prefix_text, bits, factor, max_escalations = job
    prefix = parse_word(prefix_text)
    if not prefix:
        return True
    ctx = PrecisionContext(bits=bits, escalation_factor=factor, max_escalations=max_escalations)
    m = BimodalMap(family=Family(family), gamma=gamma)
    return kneading2(m, len(prefix), ctx).has_prefix(prefix)


def certify_prefix(interval: ParamInterval, prefix: Optional[Iterable[Symbol]] = None,
                   samples: Optional[int] = None, ctx: Optional[PrecisionContext] = None,
                   jobs: int = 1) -> bool:
    """k2 на концах и в samples внутренних точках начинается с prefix"""
    ctx = ctx or PrecisionContext()
    prefix = tuple(interval.certified_prefix if prefix is None else prefix)
    points = interval.sample_points(samples)
    jobs_args = [
        (interval.family.value, gamma, word_text(prefix), ctx.bits,
         ctx.escalation_factor, ctx.max_escalations)
        for gamma in points
    ]
    results: List[bool] = map_parameters(_sample_has_prefix, jobs_args, jobs)
    for gamma, ok in zip(points, results):
        if not ok:
            logger.warning(
                f"Prefix {word_text(prefix)} fails at gamma={float(gamma):.6g} on {interval}"
            )
            return False
    return True


@measure_latency
def conv_pair(family: Union[Family, str], S: Sequence[Symbol], k: int, window: ParamInterval,
              ctx: PrecisionContext, samples: Optional[int] = None,
              jobs: int = 1) -> Tuple[BigReal, BigReal, ParamInterval]:
    """
    gamma1 < gamma2 с k2 = S'c1 и S'c2, S' = S I2^(k+1), и интервал [gamma1, gamma2]
    с выборочно сертифицированным префиксом S'I2.
    Концы интервала — внутренние концы отрезков бисекции.
    """
    family = Family(family)
    S = tuple(S)
    s_prime = S + (Symbol.I2,) * (k + 1)
    eps = lap_word_sign(s_prime)
    if eps != 1:
        raise ParityViolation(word_text(s_prime), eps)
    iota1 = ItinerarySeq.finite(s_prime + (Symbol.C1,))
    iota2 = ItinerarySeq.finite(s_prime + (Symbol.C2,))
    if k < len(S):
        logger.warning(f"k={k} < |S|={len(S)}: minimality of {iota1}, {iota2} checked directly")
    for target in (iota1, iota2):
        if not is_minimal(target):
            raise NotMinimal(str(target))

    samples = window.samples if samples is None else samples
    first = find_param_bracket(family, iota1, window, ctx)
    if not first.hi < window.hi:
        raise BracketLost(str(iota1), f"{float(window.width):.3g}", "no room left for gamma2")
    upper = ParamInterval(family=family, lo=first.hi, hi=window.hi, samples=samples)
    second = find_param_bracket(family, iota2, upper, ctx)
    if not first.hi < second.lo:
        raise BracketLost(str(iota2), f"{float(second.width):.3g}",
                          "gamma2 bracket overlaps gamma1 bracket")

    interval = ParamInterval(family=family, lo=first.hi, hi=second.lo,
                             certified_prefix=s_prime + (Symbol.I2,), samples=samples)
    if not certify_prefix(interval, ctx=ctx, jobs=jobs):
        raise PrefixNotCertified(interval.prefix_text, fraction_text(interval.lo),
                                 fraction_text(interval.hi))
    logger.info(
        f"conv_pair S'={word_text(s_prime)} on {family.value}: "
        f"interval width {float(interval.width):.3g}"
    )
    return first.as_bigreal(ctx.bits), second.as_bigreal(ctx.bits), interval
