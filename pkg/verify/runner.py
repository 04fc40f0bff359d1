"""
Набор проверок сохраненной конструкции: выбор отчетов, выборка параметров,
параллельный запуск по параметрам.
"""

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from config.logging import get_logger
from construct.state import ConstructionState
from families import Family
from models.reports import VerificationReport
from numerics import PrecisionContext
from utils.monitoring import measure_latency
from utils.parallel import map_parameters
from verify.checks import (
    interval_for, ce_windows, combinatorial_equiv, dual_rate_contrast, non_ce_witness,
    recurrence,
)

logger = get_logger(__name__)

SINGLE_REPORTS = ("ce_windows", "non_ce_witness", "recurrence")
DUAL_REPORTS = SINGLE_REPORTS + ("combinatorial_equiv", "dual_rate_contrast")
REPORTS = DUAL_REPORTS

Job = Tuple[str, ConstructionState, Fraction, Fraction, Optional[int], int, int, int]


def default_reports(state: ConstructionState) -> Tuple[str, ...]:
    return DUAL_REPORTS if state.is_dual else SINGLE_REPORTS


def select_reports(state: ConstructionState, names: Optional[Iterable[str]]) -> Tuple[str, ...]:
    """Имена отчетов через запятую или список; ValueError на неизвестных"""
    if names is None:
        return default_reports(state)
    if isinstance(names, str):
        names = names.split(",")
    selected = tuple(n.strip() for n in names if n.strip())
    unknown = [n for n in selected if n not in REPORTS]
    if unknown:
        raise ValueError(f"Unknown reports {unknown}, expected any of {REPORTS}")
    return selected or default_reports(state)


def sample_parameters(state: ConstructionState, family: Family,
                      samples: Optional[int] = None) -> Tuple[Fraction, ...]:
    """
    Середина финального интервала при samples <= 1, иначе концы и samples-2
    внутренних точек. Без этапов — gamma = 0.
    """
    if not state.intervals:
        return (Fraction(0),)
    interval = interval_for(state, family)
    if samples is None or samples <= 1:
        return (interval.midpoint,)
    return interval.sample_points(samples - 2)


def _run_report(job: Job) -> VerificationReport:
    name, state, gamma, gamma_prime, depth, bits, factor, max_escalations = job
    ctx = PrecisionContext(bits=bits, escalation_factor=factor, max_escalations=max_escalations)
    if name == "ce_windows":
        return ce_windows(state, gamma, Family.CUBIC, depth=depth, ctx=ctx)
    if name == "non_ce_witness":
        family = Family.DEG7 if state.is_dual else Family.CUBIC
        return non_ce_witness(state, gamma_prime if state.is_dual else gamma, family, ctx=ctx)
    if name == "recurrence":
        return recurrence(state, gamma, Family.CUBIC, ctx=ctx)
    if name == "combinatorial_equiv":
        return combinatorial_equiv(state, gamma, gamma_prime, depth=depth, ctx=ctx)
    if name == "dual_rate_contrast":
        return dual_rate_contrast(state, ctx=ctx)
    raise ValueError(f"Unknown report {name!r}")


@measure_latency
def verify_state(state: ConstructionState, names: Optional[Iterable[str]] = None,
                 samples: Optional[int] = None, ctx: Optional[PrecisionContext] = None,
                 jobs: int = 1, depth: Optional[int] = None,
                 gammas: Optional[Sequence[Fraction]] = None) -> List[VerificationReport]:
    """
    Отчеты в порядке имен, внутри имени — по возрастанию параметра.
    dual_rate_contrast считается один раз (в серединах интервалов).
    """
    ctx = ctx or PrecisionContext(bits=state.precision_bits)
    selected = select_reports(state, names)
    cubic = tuple(Fraction(g) for g in gammas) if gammas else sample_parameters(
        state, Family.CUBIC, samples)
    deg7 = sample_parameters(state, Family.DEG7, samples) if state.is_dual else cubic
    if len(deg7) != len(cubic):
        deg7 = (deg7[len(deg7) // 2],) * len(cubic)

    jobs_args: List[Job] = []
    for name in selected:
        pairs = list(zip(cubic, deg7))
        if name == "dual_rate_contrast":
            pairs = pairs[:1]
        jobs_args.extend((name, state, g, g_prime, depth, ctx.bits, ctx.escalation_factor,
                          ctx.max_escalations) for g, g_prime in pairs)

    logger.info(f"Verifying stage {state.stage} ({state.mode.value}): {', '.join(selected)} "
                f"at {len(cubic)} parameter(s), {ctx.bits} bits")
    reports = map_parameters(_run_report, jobs_args, jobs)
    failed = [r.name for r in reports if not r.passed]
    if failed:
        logger.warning(f"Verification failed: {', '.join(sorted(set(failed)))}")
    else:
        logger.info(f"Verification passed: {len(reports)} report(s)")
    return reports
