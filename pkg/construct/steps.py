"""
Шаги конструкции.

A: S_{n+1} = S_n I2^(k1+1) I3^k2 I2^k3, отмеченное время p = t_n + k1 + 1,
   в котором производная провалилась ниже lambda2^p.
B: S_{n+1} = S_n I2^k1 S_n I2^(k2+1) I3 I2^k3, p = t_n + k1,
   в котором орбита c2 вернулась в Delta-окрестность c2.

Двойные варианты строят один и тот же префикс в обоих семействах.
Поиск: k1 растет, для каждого k1 растет k3; провал головной части проверок
переводит к следующему k1, провал хвоста или ширины — к следующему k3.
"""

from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from config.logging import get_logger
from construct.checks import (
    HEAD, TAIL, Params, SampleCheck, a_step_checks, b_step_checks, digits, dual_a_checks,
    evaluate_samples, first_failure, rate, summarize,
)
from construct.context import StepContext
from construct.errors import ConstructionError, StepFailed
from construct.state import ConstructionState, Mode, PMark, StepRecord, StepType, family_rate_key
from families import BimodalMap, Family, make_map
from models.reports import CheckRecord
from numerics import BigReal, PrecisionContext, Sign, certified_sign, fraction_to_decimal
from orbits import OrbitError, lap_multiplier, realize_point
from paramsearch import ParamInterval, ParamSearchError, choose_parity, conv_pair
from symbolic import ItinerarySeq, Symbol, word_text
from utils.monitoring import measure_latency

logger = get_logger(__name__)

Word = Tuple[Symbol, ...]


class CandidateRejected(ConstructionError):
    """Кандидат (k1, k3) не прошел; part=head — следующее k1, part=tail — следующее k3"""

    def __init__(self, part: str, reason: str, detail: str = ""):
        self.part = part
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason} ({part}): {detail}")


class StepPlan(BaseModel):
    """Все, что зависит только от k1: голова слова, p, окна и проверки по семействам"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    head: Word
    p: int
    k: Dict[str, int]
    windows: Tuple[ParamInterval, ...]
    checks: Tuple[Tuple[SampleCheck, Params], ...]
    delta: Optional[str] = None
    constants: Dict[str, str] = Field(default_factory=dict)


# ----------------------------------------------------------------------
# Общие части
# ----------------------------------------------------------------------

def width_bound(stage: int) -> Fraction:
    """|beta_n - alpha_n| < 2^-n"""
    return Fraction(1, 2 ** stage)


def eta_bracket(m: BimodalMap, lam1: Fraction, lam2: Fraction,
                ctx: PrecisionContext) -> Tuple[BigReal, BigReal, Dict[str, str]]:
    """
    ((log lambda0 - log lambda2) / log lambda3, (log lambda0 - log lambda1) / log lambda3),
    lambda0 = |g'(r)|, lambda3 = |g'(1)|
    """
    lam0 = lap_multiplier(m, 2, ctx)
    lam3 = lap_multiplier(m, 3, ctx)
    log3 = lam3.log()
    lo = (lam0.log() - rate(lam2, ctx).log()) / log3
    hi = (lam0.log() - rate(lam1, ctx).log()) / log3
    constants = {
        "lambda0": digits(lam0),
        "lambda3": digits(lam3),
        "eta_lo": digits(lo),
        "eta_hi": digits(hi),
    }
    return lo, hi, constants


def _k3_values(head: Word, floor: int, sctx: StepContext) -> Iterator[int]:
    """k3 с eps(head I2^k3) = +1, без повторов"""
    previous = None
    for base in sctx.k_candidates(floor):
        k3 = choose_parity(head, base - 1) + 1
        if k3 != previous and k3 <= sctx.k_cap:
            previous = k3
            yield k3


def _realize(head: Word, k3: int, windows: Tuple[ParamInterval, ...], stage: int,
             sctx: StepContext) -> Tuple[ParamInterval, ...]:
    intervals = []
    bound = width_bound(stage)
    for window in windows:
        try:
            _, _, interval = conv_pair(window.family, head, k3 - 1, window, sctx.precision,
                                       sctx.samples, sctx.jobs)
        except (ParamSearchError, OrbitError) as e:
            raise CandidateRejected(TAIL, "prefix", f"{window.family.value}: {e}") from e
        if not interval.width < bound:
            raise CandidateRejected(TAIL, "width",
                                    f"{interval} width {float(interval.width):.3g} >= 2^-{stage}")
        intervals.append(interval)
    return tuple(intervals)


def _certify(interval: ParamInterval, depth: int, check: SampleCheck, params: Params,
             sctx: StepContext) -> List[CheckRecord]:
    records = evaluate_samples(interval, depth, check, params, sctx.precision,
                               sctx.jobs, sctx.samples)
    failed = first_failure(records)
    if failed is not None:
        witness = failed.witness
        detail = f"{failed.name} on {interval.family.value} at gamma={witness.get('gamma')}"
        if failed.relation:
            detail += f": {failed.left} {failed.relation} {failed.right} is false"
        elif failed.detail:
            detail += f": {failed.detail}"
        raise CandidateRejected(witness.get("part", HEAD), witness.get("reason", "d-lower"), detail)
    return records


def _search(state: ConstructionState, step_type: StepType, sctx: StepContext,
            k1_values: Iterator[int], plan_for: Callable[[int], StepPlan]) -> ConstructionState:
    """Перебор k1 и k3 до первого кандидата, прошедшего все проверки"""
    step = step_type.value
    stage = state.stage + 1
    t_n = state.final_t
    last: Optional[CandidateRejected] = None
    for k1 in k1_values:
        try:
            plan = plan_for(k1)
        except CandidateRejected as e:
            last = e
            logger.debug(f"Step {step}: k1={k1} rejected: {e}")
            continue
        for k3 in _k3_values(plan.head, max(t_n, sctx.k_floor), sctx):
            t_next = len(plan.head) + k3
            try:
                intervals = _realize(plan.head, k3, plan.windows, stage, sctx)
                records = {
                    interval.family.value: _certify(
                        interval, t_next + 1, check, {**params, "t_next": t_next}, sctx)
                    for interval, (check, params) in zip(intervals, plan.checks)
                }
            except CandidateRejected as e:
                last = e
                logger.debug(f"Step {step}: k1={k1}, k3={k3} rejected: {e}")
                if e.part == HEAD:
                    break
                continue
            k = {**plan.k, "k3": k3}
            logger.info(f"Step {step} accepted for stage {stage}: k={k}, p={plan.p}, "
                        f"t={t_next}, interval {intervals[0]}")
            record = StepRecord.create(
                stage=stage, step_type=step_type, t=t_next, k=k, p=plan.p, delta=plan.delta,
                constants=plan.constants,
                checks={family: summarize(recs) for family, recs in records.items()},
            )
            return state.extend(
                plan.head + (Symbol.I2,) * k3, intervals[0], record,
                mark=PMark(n=stage, p=plan.p, type=step_type),
                dual_interval=intervals[1] if state.is_dual else None,
            )
    if last is None:
        raise StepFailed("k-cap", step, f"no k1 candidates below cap {sctx.k_cap}")
    raise StepFailed(last.reason, step, f"k search exhausted at cap {sctx.k_cap}; last: {last.detail}")


def _require(state: ConstructionState, mode: Mode, step_type: StepType) -> None:
    if not state.t:
        raise StepFailed("invariant", step_type.value, "state has no bootstrap stage")
    if state.mode is not mode:
        raise StepFailed("invariant", step_type.value,
                         f"{mode.value} step applied to a {state.mode.value} construction")


def _windows(state: ConstructionState) -> Tuple[ParamInterval, ...]:
    if state.is_dual:
        return state.current, state.dual_current
    return (state.current,)


def _lam(state: ConstructionState, family: Family) -> str:
    return state.rates[family_rate_key(family, "lam")]


# ----------------------------------------------------------------------
# Шаг A
# ----------------------------------------------------------------------

def a_head(prefix: Word, k1: int, k2: int) -> Word:
    """S_n I2^(k1+1) I3^k2"""
    return tuple(prefix) + (Symbol.I2,) * (k1 + 1) + (Symbol.I3,) * k2


def a_step_times(t_n: int, k1: int, eta: Fraction) -> Tuple[int, int]:
    """(p, k2): p = t_n + k1 + 1, k2 = round(2 eta p), не меньше 1"""
    p = t_n + k1 + 1
    return p, max(1, round(2 * Fraction(eta) * p))


def dual_a_k2(k1: int, eta: Fraction) -> int:
    """k2 = round(k1 / eta), не меньше 1"""
    return max(1, round(k1 / Fraction(eta)))


@measure_latency
def step_A(state: ConstructionState, sctx: StepContext) -> ConstructionState:
    """Шаг A одного семейства: lambda1^p < d_p < lambda2^p при p > 2 t_n"""
    _require(state, Mode.SINGLE, StepType.A)
    ctx = sctx.precision
    lam1, lam2 = state.rate("a_lam1"), state.rate("a_lam2")
    reference = make_map(Family.CUBIC, state.current.midpoint)
    lo, hi, constants = eta_bracket(reference, lam1, lam2, ctx)
    eta = ((lo + hi) * Fraction(1, 2)).to_fraction()
    constants["eta"] = digits((lo + hi) * Fraction(1, 2))
    t_n = state.final_t
    logger.info(f"Step A from stage {state.stage} (t_n={t_n}): eta={float(eta):.6g}")

    def plan_for(k1: int) -> StepPlan:
        p, k2 = a_step_times(t_n, k1, eta)
        params = {"t_n": t_n, "p": p, "lam": _lam(state, Family.CUBIC),
                  "lam1": str(lam1), "lam2": str(lam2)}
        return StepPlan(head=a_head(state.prefix, k1, k2), p=p, k={"k1": k1, "k2": k2},
                        windows=_windows(state), checks=((a_step_checks, params),),
                        constants=constants)

    return _search(state, StepType.A, sctx, sctx.k_candidates(max(t_n, sctx.k_floor)), plan_for)


@measure_latency
def dual_step_A(state: ConstructionState, sctx: StepContext) -> ConstructionState:
    """
    Двойной шаг A: один префикс в обоих семействах, в момент p
    d_p > lambda2^p у кубического и d~_p < lambda1^p у семейства степени 7.
    """
    _require(state, Mode.DUAL, StepType.A)
    eta = state.rate("eta")
    lam1, lam2 = state.rate("dual_lam1"), state.rate("dual_lam2")
    t_n = state.final_t
    constants = {name: state.rates[name] for name in ("theta1", "theta2", "eta")}
    logger.info(f"Dual step A from stage {state.stage} (t_n={t_n}): eta={float(eta):.6g}")

    def plan_for(k1: int) -> StepPlan:
        p = t_n + k1 + 1
        k2 = dual_a_k2(k1, eta)
        grow = {"t_n": t_n, "p": p, "direction": "grow", "lam": _lam(state, Family.CUBIC),
                "lam2": str(lam2)}
        decay = {"t_n": t_n, "p": p, "direction": "decay", "lam": _lam(state, Family.DEG7),
                 "lam1": str(lam1)}
        return StepPlan(head=a_head(state.prefix, k1, k2), p=p, k={"k1": k1, "k2": k2},
                        windows=_windows(state),
                        checks=((dual_a_checks, grow), (dual_a_checks, decay)),
                        constants=constants)

    return _search(state, StepType.A, sctx, sctx.k_candidates(max(t_n, sctx.k_floor)), plan_for)


# ----------------------------------------------------------------------
# Шаг B
# ----------------------------------------------------------------------

def return_target(prefix: Word, k2: int) -> ItinerarySeq:
    """I2 S_n I2^(k2+1) I3 c2: маршрут точки, в которую орбита c2 приходит в момент p"""
    return ItinerarySeq.finite((Symbol.I2,) + prefix + (Symbol.I2,) * (k2 + 1)
                               + (Symbol.I3, Symbol.C2))


def b_k1(k1: int) -> int:
    """k1 шага B нечетно; четный кандидат сдвигается на 1"""
    return k1 if k1 % 2 else k1 + 1


def b_head(prefix: Word, k1: int, k2: int) -> Word:
    """S_n I2^k1 S_n I2^(k2+1) I3; с позиции p = t_n + k1 читается return_target"""
    prefix = tuple(prefix)
    return prefix + (Symbol.I2,) * k1 + prefix + (Symbol.I2,) * (k2 + 1) + (Symbol.I3,)


def odd_k2_values(t_n: int, k1: int) -> Iterator[int]:
    """Нечетные k2 из (t_n, k1 - 2] по возрастанию"""
    return iter(range(t_n + 1 if (t_n + 1) % 2 else t_n + 2, k1 - 1, 2))


def _return_distance(m: BimodalMap, prefix: Word, k2: int,
                     ctx: PrecisionContext) -> Optional[BigReal]:
    try:
        x = realize_point(m, return_target(prefix, k2), ctx)
    except OrbitError as e:
        logger.debug(f"Return target for k2={k2} not realized on {m.label}: {e}")
        return None
    return abs(x - m.critical_points(ctx)[1])


def choose_k2(references: Tuple[BimodalMap, ...], prefix: Word, t_n: int, k1: int,
              delta: Fraction, ctx: PrecisionContext) -> Tuple[int, Dict[str, str]]:
    """Наименьшее нечетное k2 > t_n, k2 <= k1 - 2, с |x - c2| < Delta у всех опорных отображений"""
    bound = BigReal.from_fraction(delta, ctx.bits)
    for k2 in odd_k2_values(t_n, k1):
        distances = [_return_distance(m, prefix, k2, ctx) for m in references]
        if all(d is not None and certified_sign(d - bound) is Sign.NEGATIVE for d in distances):
            return k2, {f"{m.family.value}.return_distance": digits(d)
                        for m, d in zip(references, distances)}
    raise CandidateRejected(HEAD, "delta", f"no odd k2 in ({t_n}, {k1 - 2}] within Delta={delta}")


def _b_search(state: ConstructionState, delta: Fraction, sctx: StepContext) -> ConstructionState:
    ctx = sctx.precision
    t_n = state.final_t
    prefix = state.prefix
    delta = Fraction(delta)
    if delta <= 0:
        raise StepFailed("delta", StepType.B.value, f"Delta must be positive, got {delta}")

    def plan_for(k1: int) -> StepPlan:
        k1 = b_k1(k1)
        windows = []
        for window in _windows(state):
            try:
                _, _, first = conv_pair(window.family, prefix, k1 - 2, window, ctx,
                                        sctx.samples, sctx.jobs)
            except (ParamSearchError, OrbitError) as e:
                raise CandidateRejected(HEAD, "prefix",
                                        f"S_n I2^{k1} on {window.family.value}: {e}") from e
            windows.append(first)
        references = tuple(make_map(w.family, w.midpoint) for w in windows)
        k2, constants = choose_k2(references, prefix, t_n, k1, delta, ctx)
        p = t_n + k1
        head = b_head(prefix, k1, k2)
        checks = tuple(
            (b_step_checks, {"t_n": t_n, "p": p, "lam": _lam(state, w.family),
                             "delta": str(delta)})
            for w in windows
        )
        return StepPlan(head=head, p=p, k={"k1": k1, "k2": k2}, windows=tuple(windows),
                        checks=checks, delta=fraction_to_decimal(delta),
                        constants={**constants, "delta": fraction_to_decimal(delta)})

    floor = max(t_n + 3, sctx.k_floor)
    return _search(state, StepType.B, sctx, sctx.k_candidates(floor), plan_for)


@measure_latency
def step_B(state: ConstructionState, delta: Fraction, sctx: StepContext) -> ConstructionState:
    """Шаг B одного семейства: |g^p(c2) - c2| < Delta"""
    _require(state, Mode.SINGLE, StepType.B)
    logger.info(f"Step B from stage {state.stage} (t_n={state.final_t}): Delta={delta}")
    return _b_search(state, delta, sctx)


@measure_latency
def dual_step_B(state: ConstructionState, delta: Fraction, sctx: StepContext) -> ConstructionState:
    """Двойной шаг B: возврат в Delta-окрестность c2 в обоих семействах в один момент p"""
    _require(state, Mode.DUAL, StepType.B)
    logger.info(f"Dual step B from stage {state.stage} (t_n={state.final_t}): Delta={delta}")
    return _b_search(state, delta, sctx)


def describe(state: ConstructionState) -> str:
    """Краткая сводка для журнала"""
    marks = ", ".join(f"{m.type.value}@{m.p}" for m in state.p_marks) or "none"
    return (f"stage {state.stage}, t={list(state.t)}, marks: {marks}, "
            f"S_n={word_text(state.prefix[:24])}{'...' if len(state.prefix) > 24 else ''}")
