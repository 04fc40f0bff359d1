"""
Первый этап конструкции: S1 = I1^(k0+1) I2^(k+1).

k0 растет, пока на окне [0, gamma(I1^k0 c1)] выполнено условие на скорости
lambda' < |g'| в неподвижных точках; затем k растет (с нужной четностью),
пока интервал conv_pair не пройдет выборочную проверку d_m > lambda^m.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import mpmath

from config.logging import get_logger
from config.typed_settings import KneadlabSettings, RateOrderError
from construct.checks import (
    bootstrap_checks, digits, evaluate_samples, first_failure, rate, rate_checks, summarize,
)
from construct.context import StepContext
from construct.errors import BootstrapFailed
from construct.state import (
    ConstructionState, Mode, StepRecord, StepType, empty_state, families_of, family_rate_key,
)
from families import Family, exponent_gap_sides, make_map
from numerics import PrecisionContext
from orbits import OrbitError, fixed_point_r, lap_multiplier
from paramsearch import ParamInterval, ParamSearchError, choose_parity, conv_pair, find_param_bracket
from symbolic import ItinerarySeq, Symbol
from utils.monitoring import measure_latency

logger = get_logger(__name__)

RATE_NAMES = ("lam", "lam_prime", "a_lam1", "a_lam2")
DUAL_RATE_NAMES = ("dual_lam1", "dual_lam2", "deg7_lam", "deg7_lam_prime")


def initial_rates(settings: KneadlabSettings, mode: Mode) -> Dict[str, str]:
    """Скорости из настроек в виде десятичных строк"""
    r = settings.rates
    names = RATE_NAMES + (DUAL_RATE_NAMES if Mode(mode) is Mode.DUAL else ())
    rates = {name: str(getattr(r, name)) for name in names}
    if Mode(mode) is Mode.DUAL:
        for name in ("theta1", "theta2", "eta"):
            value = getattr(r, name)
            if value is not None:
                rates[name] = str(value)
    return rates


def check_rates_at_zero(mode: Mode, rates: Dict[str, str], ctx: PrecisionContext) -> None:
    """lambda' < |g_0'| в 0, r, 1; иначе RateOrderError до любого поиска"""
    for family in families_of(mode):
        m = make_map(family, 0)
        lam_prime = rates[family_rate_key(family, "lam_prime")]
        failed = first_failure(rate_checks(m, None, ctx, {"lam_prime": lam_prime}))
        if failed is not None:
            raise RateOrderError(
                f"lambda' < |g'| at fixed points of {family.value}(gamma=0)",
                f"{failed.name}: {failed.left} vs {failed.right}",
            )


def bootstrap_window(family: Family, k0: int, sctx: StepContext) -> ParamInterval:
    """[0, gamma(I1^k0 c1)]"""
    target = ItinerarySeq.finite((Symbol.I1,) * k0 + (Symbol.C1,))
    full = ParamInterval.full(family, sctx.samples)
    bracket = find_param_bracket(family, target, full, sctx.precision)
    return ParamInterval(family=family, lo=Fraction(0), hi=bracket.hi, samples=sctx.samples)


def exponent_rates(intervals: Tuple[ParamInterval, ParamInterval], rates: Dict[str, str],
                   ctx: PrecisionContext) -> Dict[str, str]:
    """
    theta1, theta2 и eta по умолчанию: 1/3 и 2/3 щели, вычисленной в серединах
    интервалов первого этапа, и середина между ними.
    """
    cubic = make_map(Family.CUBIC, intervals[0].midpoint)
    deg7 = make_map(Family.DEG7, intervals[1].midpoint)
    left, right = exponent_gap_sides(cubic, deg7, fixed_point_r(cubic, ctx),
                                     fixed_point_r(deg7, ctx), ctx)
    lo, hi = left.to_fraction(), right.to_fraction()
    if not lo < hi:
        raise RateOrderError("exponent gap is nonempty", f"left={digits(left)}, right={digits(right)}")

    def text(x: Fraction) -> str:
        return mpmath.nstr(mpmath.fdiv(x.numerator, x.denominator, prec=96), 20)

    theta1 = Fraction(rates["theta1"]) if "theta1" in rates else Fraction(text(lo + (hi - lo) / 3))
    theta2 = Fraction(rates["theta2"]) if "theta2" in rates else Fraction(text(lo + 2 * (hi - lo) / 3))
    eta = Fraction(rates["eta"]) if "eta" in rates else (theta1 + theta2) / 2
    if not lo < theta1 < eta < theta2 < hi:
        raise RateOrderError(
            "gap left < theta1 < eta < theta2 < gap right",
            f"left={digits(left)}, theta1={float(theta1):.6g}, eta={float(eta):.6g}, "
            f"theta2={float(theta2):.6g}, right={digits(right)}",
        )
    return {
        "theta1": rates.get("theta1", text(theta1)),
        "theta2": rates.get("theta2", text(theta2)),
        "eta": rates.get("eta", text(eta)),
        "gap_left": digits(left),
        "gap_right": digits(right),
    }


def _windows(mode: Mode, k0: int, rates: Dict[str, str],
             sctx: StepContext) -> Optional[Tuple[ParamInterval, ...]]:
    """Окна всех семейств для k0 или None, если выборочная проверка скоростей не прошла"""
    windows = []
    for family in families_of(mode):
        try:
            window = bootstrap_window(family, k0, sctx)
        except (ParamSearchError, OrbitError) as e:
            logger.warning(f"Bootstrap window for k0={k0} on {family.value} not found: {e}")
            return None
        records = evaluate_samples(window, 1, rate_checks,
                                   {"lam_prime": rates[family_rate_key(family, "lam_prime")]},
                                   sctx.precision, sctx.jobs, sctx.samples)
        failed = first_failure(records)
        if failed is not None:
            logger.info(f"k0={k0}: rate condition fails on {window}: {failed.name} "
                        f"at gamma={failed.witness.get('gamma')}")
            return None
        windows.append(window)
    return tuple(windows)


def _constants(intervals: Tuple[ParamInterval, ...], rates: Dict[str, str], t1: int,
               ctx: PrecisionContext) -> Dict[str, str]:
    """Вспомогательные постоянные первого этапа, вычисленные в серединах интервалов"""
    constants: Dict[str, str] = {}
    for interval in intervals:
        m = make_map(interval.family, interval.midpoint)
        tag = interval.family.value
        constants[f"{tag}.lambda0"] = digits(lap_multiplier(m, 2, ctx))
        constants[f"{tag}.lambda3"] = digits(lap_multiplier(m, 3, ctx))
        lam = rate(rates[family_rate_key(interval.family, "lam")], ctx)
        constants[f"{tag}.lambda^(t1-1)"] = digits(lam ** (t1 - 1))
    return constants


@measure_latency
def bootstrap(mode: Mode, settings: KneadlabSettings,
              sctx: Optional[StepContext] = None) -> ConstructionState:
    """Состояние с одним этапом: S1, интервал(ы) и записанные скорости"""
    mode = Mode(mode)
    sctx = sctx or StepContext.from_settings(settings)
    ctx = sctx.precision
    rates = initial_rates(settings, mode)
    check_rates_at_zero(mode, rates, ctx)
    logger.info(f"Bootstrap ({mode.value}): k0 from {sctx.bootstrap_k0_start} "
                f"to {sctx.bootstrap_k0_limit}, k up to {sctx.bootstrap_k_limit}")

    last_reason = ""
    for k0 in range(sctx.bootstrap_k0_start, sctx.bootstrap_k0_limit + 1):
        windows = _windows(mode, k0, rates, sctx)
        if windows is None:
            last_reason = f"rate condition on window k0={k0}"
            continue
        s0 = (Symbol.I1,) * (k0 + 1)
        for k in range(choose_parity(s0, 1), sctx.bootstrap_k_limit + 1, 2):
            result = _attempt(s0, k, windows, rates, sctx)
            if isinstance(result, str):
                last_reason = f"k0={k0}, k={k}: {result}"
                logger.debug(f"Bootstrap rejected {last_reason}")
                continue
            intervals, records = result
            t1 = len(intervals[0].certified_prefix) - 1
            prefix = intervals[0].certified_prefix[:t1]
            state_rates = dict(rates)
            constants = _constants(intervals, rates, t1, ctx)
            if mode is Mode.DUAL:
                gap = exponent_rates((intervals[0], intervals[1]), rates, ctx)
                state_rates.update({name: gap[name] for name in ("theta1", "theta2", "eta")})
                constants.update(gap)
            record = StepRecord.create(
                stage=1, step_type=StepType.BOOTSTRAP, t=t1, k={"k0": k0, "k": k},
                constants=constants,
                checks={family: summarize(recs) for family, recs in records.items()},
            )
            state = empty_state(mode, ctx.bits, state_rates).extend(
                prefix, intervals[0], record,
                dual_interval=intervals[1] if mode is Mode.DUAL else None,
            )
            logger.info(f"Bootstrap accepted k0={k0}, k={k}: S1={state.prefix_text}, t1={t1}, "
                        f"interval {intervals[0]}")
            return state
    raise BootstrapFailed(sctx.bootstrap_k0_limit, sctx.bootstrap_k_limit, last_reason)


def _attempt(s0: Tuple[Symbol, ...], k: int, windows: Tuple[ParamInterval, ...],
             rates: Dict[str, str], sctx: StepContext):
    """(интервалы, записи проверок) или причина отказа"""
    intervals: List[ParamInterval] = []
    records = {}
    for window in windows:
        family = window.family
        try:
            _, _, interval = conv_pair(family, s0, k, window, sctx.precision,
                                       sctx.samples, sctx.jobs)
        except (ParamSearchError, OrbitError) as e:
            return f"conv_pair on {family.value}: {e}"
        if not interval.width < Fraction(1, 2):
            return f"width {float(interval.width):.3g} on {family.value}"
        t1 = len(interval.certified_prefix) - 1
        recs = evaluate_samples(interval, t1 + 1, bootstrap_checks,
                                {"t": t1, "lam": rates[family_rate_key(family, "lam")]},
                                sctx.precision, sctx.jobs, sctx.samples)
        failed = first_failure(recs)
        if failed is not None:
            return f"{failed.name} on {family.value} at gamma={failed.witness.get('gamma')}"
        intervals.append(interval)
        records[family.value] = recs
    return tuple(intervals), records
