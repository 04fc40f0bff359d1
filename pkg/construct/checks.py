"""
Выборочные проверки неравенств для производной вдоль второй критической орбиты.

Каждая проверка — функция верхнего уровня check(m, diag, ctx, params) -> [CheckRecord]:
она сериализуется pickle и выполняется в пуле процессов по точкам выборки.
Неразрешимый знак бросает SignUndecidable, и диагностика пересчитывается
на большей точности.
"""

from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import mpmath

from config.logging import get_logger
from families import BimodalMap, Family
from models.reports import CheckRecord
from numerics import (
    BigReal, PrecisionContext, PrecisionExhausted, Sign, SignUndecidable, UncertainDivisor,
    certified_sign,
)
from orbits import NotFound, OrbitDiagnostics, lap_multiplier, with_diagnostics
from paramsearch import ParamInterval
from utils.parallel import map_parameters

logger = get_logger(__name__)

Params = Dict[str, Any]
SampleCheck = Callable[[BimodalMap, OrbitDiagnostics, PrecisionContext, Params], List[CheckRecord]]

HEAD = "head"
TAIL = "tail"


def rate(value, ctx: PrecisionContext) -> BigReal:
    """Десятичная скорость как точное рациональное число"""
    return BigReal.from_fraction(Fraction(str(value)), ctx.bits)


def digits(x: BigReal, n: int = 20) -> str:
    if x.exact is not None:
        return str(x.exact)
    return mpmath.nstr(x.value, n)


def positive_log(x: BigReal, what: str, ctx: PrecisionContext) -> BigReal:
    if certified_sign(x) is not Sign.POSITIVE:
        raise SignUndecidable(what, ctx.bits)
    return x.log()


def window_check(name: str, diag: OrbitDiagnostics, start: int, length: int, lam: BigReal,
                 ctx: PrecisionContext, part: str) -> CheckRecord:
    """
    d_{start,l} > lam^l для l = 1..length.
    В отчет попадает первое нарушение или самое тесное из выполненных неравенств.
    """
    if length <= 0:
        return CheckRecord.vacuous(name, "empty window")
    power = BigReal.from_fraction(1, ctx.bits)
    worst: Optional[Tuple[int, BigReal, BigReal]] = None
    worst_ratio = None
    for l, d in diag.window(start, length):
        power = power * lam
        s = certified_sign(d - power)
        if not s.is_decided:
            raise SignUndecidable(f"{name} at l={l}", ctx.bits)
        if s is not Sign.POSITIVE:
            return CheckRecord.inequality(name, d, ">", power, detail=f"l={l} of {length}",
                                          n=start, l=l, reason="d-lower", part=part)
        ratio = mpmath.fdiv(d.value, power.value, prec=53)
        if worst_ratio is None or ratio < worst_ratio:
            worst, worst_ratio = (l, d, power), ratio
    l, d, power = worst
    return CheckRecord.inequality(name, d, ">", power, detail=f"binding l={l} of {length}",
                                  n=start, l=l, reason="d-lower", part=part)


# ----------------------------------------------------------------------
# Проверки по шагам
# ----------------------------------------------------------------------

def rate_checks(m: BimodalMap, diag: OrbitDiagnostics, ctx: PrecisionContext,
                params: Params) -> List[CheckRecord]:
    """lambda' < |g'| в неподвижных точках 0, r, 1"""
    lam_prime = rate(params["lam_prime"], ctx)
    records = []
    for j, where in ((1, "0"), (2, "r"), (3, "1")):
        records.append(CheckRecord.inequality(
            f"|g'({where})| > lambda'", lap_multiplier(m, j, ctx), ">", lam_prime,
            reason="rate", part=HEAD,
        ))
    return records


def bootstrap_checks(m: BimodalMap, diag: OrbitDiagnostics, ctx: PrecisionContext,
                     params: Params) -> List[CheckRecord]:
    """d_m > lambda^m для m = 1..t1"""
    return [window_check("d_m > lambda^m, m <= t_1", diag, 0, params["t"],
                         rate(params["lam"], ctx), ctx, HEAD)]


def a_step_checks(m: BimodalMap, diag: OrbitDiagnostics, ctx: PrecisionContext,
                  params: Params) -> List[CheckRecord]:
    """Оценки шага A: провал производной в момент p и рост вне его"""
    t_n, p, t_next = params["t_n"], params["p"], params["t_next"]
    lam = rate(params["lam"], ctx)
    lam1 = rate(params["lam1"], ctx)
    lam2 = rate(params["lam2"], ctx)

    log_lam0 = positive_log(lap_multiplier(m, 2, ctx), "log |g'(r)|", ctx)
    slope = positive_log(diag.derivative(p - 1), "log d_(p-1)", ctx) / (p - 1)
    gap = lam2.log() - lam1.log()
    dp = diag.derivative(p)
    span = t_next - t_n
    return [
        CheckRecord.inequality("|log|g'(r)| - log d_(p-1)/(p-1)| < log lambda2 - log lambda1",
                               abs(log_lam0 - slope), "<", gap, p=p, reason="d-upper", part=HEAD),
        CheckRecord.inequality("d_p > lambda1^p", dp, ">", lam1 ** p,
                               p=p, reason="d-lower", part=HEAD),
        CheckRecord.inequality("d_p < lambda2^p", dp, "<", lam2 ** p,
                               p=p, reason="d-upper", part=HEAD),
        window_check("d_(t_n,l) > lambda^l, l <= p-1-t_n", diag, t_n, p - 1 - t_n, lam, ctx, HEAD),
        window_check("d_(p,l) > lambda^l, l <= t_(n+1)-p", diag, p, t_next - p, lam, ctx, TAIL),
        CheckRecord.inequality("d_(t_n,t_(n+1)-t_n) > lambda^(t_(n+1)-t_n)",
                               diag.d_rel(t_n, span), ">", lam ** span,
                               n=t_n, l=span, reason="d-lower", part=TAIL),
    ]


def dual_a_checks(m: BimodalMap, diag: OrbitDiagnostics, ctx: PrecisionContext,
                  params: Params) -> List[CheckRecord]:
    """
    Двойной шаг A для одного семейства: direction="grow" требует d_p > lambda2^p,
    direction="decay" требует d_p < lambda1^p.
    """
    t_n, p, t_next = params["t_n"], params["p"], params["t_next"]
    lam = rate(params["lam"], ctx)
    dp = diag.derivative(p)
    if params["direction"] == "grow":
        marked = CheckRecord.inequality("d_p > lambda2^p", dp, ">",
                                        rate(params["lam2"], ctx) ** p,
                                        p=p, reason="d-lower", part=HEAD)
    else:
        marked = CheckRecord.inequality("d_p < lambda1^p", dp, "<",
                                        rate(params["lam1"], ctx) ** p,
                                        p=p, reason="d-upper", part=HEAD)
    return [
        marked,
        window_check("d_(t_n,l) > lambda^l, l <= p-1-t_n", diag, t_n, p - 1 - t_n, lam, ctx, HEAD),
        window_check("d_(p,l) > lambda^l, l <= t_(n+1)-p", diag, p, t_next - p, lam, ctx, TAIL),
    ]


def b_step_checks(m: BimodalMap, diag: OrbitDiagnostics, ctx: PrecisionContext,
                  params: Params) -> List[CheckRecord]:
    """Оценки шага B: возврат к c2 в момент p и рост после t_n"""
    t_n, p, t_next = params["t_n"], params["p"], params["t_next"]
    lam = rate(params["lam"], ctx)
    delta = BigReal.from_fraction(Fraction(params["delta"]), ctx.bits)
    c2 = m.critical_points(ctx)[1]
    span = t_next - p + 1
    return [
        CheckRecord.inequality("|g^p(c2) - c2| < Delta", abs(diag.v[p - 1] - c2), "<", delta,
                               p=p, reason="delta", part=HEAD),
        window_check("d_(t_n,l) > lambda^l, l <= t_(n+1)-t_n", diag, t_n, t_next - t_n, lam,
                     ctx, HEAD),
        CheckRecord.inequality("d_(p-1,t_(n+1)-p+1) > lambda^(t_(n+1)-p+1)", diag.d_rel(p - 1, span),
                               ">", lam ** span, n=p - 1, l=span, reason="d-lower", part=TAIL),
    ]


# ----------------------------------------------------------------------
# Выполнение по выборке
# ----------------------------------------------------------------------

def _run_sample(job: Tuple[str, Fraction, int, int, int, int, SampleCheck, Params]) -> List[CheckRecord]:
    """Рабочая функция пула: диагностика и проверки в одной точке параметра"""
    family, gamma, depth, bits, factor, max_escalations, check, params = job
    ctx = PrecisionContext(bits=bits, escalation_factor=factor, max_escalations=max_escalations)
    m = BimodalMap(family=Family(family), gamma=gamma)
    try:
        records = with_diagnostics(m, depth, ctx, lambda d, c: check(m, d, c, params),
                                   what=f"{check.__name__} at {m.label}")
    except (SignUndecidable, PrecisionExhausted, UncertainDivisor, NotFound) as e:
        records = [CheckRecord.flag(check.__name__, False, detail=str(e),
                                    reason="precision", part=HEAD)]
    tag = str(gamma)
    return [r.model_copy(update={"witness": {**r.witness, "gamma": tag}}) for r in records]


def evaluate_samples(interval: ParamInterval, depth: int, check: SampleCheck, params: Params,
                     ctx: PrecisionContext, jobs: int = 1,
                     samples: Optional[int] = None) -> List[CheckRecord]:
    """Проверка check на концах и внутренних точках интервала"""
    jobs_args = [
        (interval.family.value, gamma, depth, ctx.bits, ctx.escalation_factor,
         ctx.max_escalations, check, params)
        for gamma in interval.sample_points(samples)
    ]
    records: List[CheckRecord] = []
    for per_sample in map_parameters(_run_sample, jobs_args, jobs):
        records.extend(per_sample)
    failed = [r for r in records if r.passed is False]
    logger.debug(
        f"{check.__name__} on {interval}: {len(records) - len(failed)}/{len(records)} passed"
    )
    return records


def first_failure(records: List[CheckRecord]) -> Optional[CheckRecord]:
    for r in records:
        if r.passed is False:
            return r
    return None


def summarize(records: List[CheckRecord]) -> Dict[str, int]:
    return {
        "passed": sum(1 for r in records if r.passed is True),
        "failed": sum(1 for r in records if r.passed is False),
        "samples": len({r.witness.get("gamma") for r in records}),
    }
