"""
Проверки построенных отображений на конечной глубине.

Все проверки возвращают VerificationReport: нарушения записываются, а не бросаются.
Каждая запись хранит проверенное неравенство и значения обеих сторон.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from config.logging import get_logger
from construct.checks import digits, positive_log, rate
from construct.driver import delta_for
from construct.state import ConstructionState, StepType, family_rate_key
from families import BimodalMap, Family, exponent_gap, make_map
from models.reports import CheckRecord, VerificationReport
from numerics import (
    BigReal, PrecisionContext, Sign, SignUndecidable, certified_sign, fraction_text,
)
from orbits import OrbitDiagnostics, OrbitError, kneading2, with_diagnostics

logger = get_logger(__name__)


# ----------------------------------------------------------------------
# Разбиение индексов
# ----------------------------------------------------------------------

class IndexPartition(BaseModel):
    """
    Индексы 1..t_final: CE-окна [t_{n-1}, p_n - 1] и хвосты этапов,
    отмеченные времена шагов A и промежутки (p_n, t_n) после них.
    """
    model_config = ConfigDict(frozen=True)

    upto: int
    windows: Tuple[Tuple[int, int], ...]
    marks: Tuple[int, ...]
    gaps: Tuple[Tuple[int, int], ...]

    def classify(self, n: int) -> str:
        if n in self.marks:
            return "mark"
        if any(p < n < t for p, t in self.gaps):
            return "gap"
        if any(a <= n <= b for a, b in self.windows):
            return "window"
        raise ValueError(f"Index {n} outside 1..{self.upto}")

    def window_indices(self) -> List[int]:
        return [n for a, b in self.windows for n in range(a, b + 1)]


def index_partition(state: ConstructionState, upto: Optional[int] = None) -> IndexPartition:
    """Разбиение 1..upto (по умолчанию t_final); каждый индекс ровно в одной части"""
    upto = state.final_t if upto is None else upto
    marks = tuple(m.p for m in state.marks(StepType.A) if m.p <= upto)
    gaps = tuple((m.p, state.t_at(m.n)) for m in state.marks(StepType.A) if m.p < upto)
    excluded = set(marks)
    for p, t in gaps:
        excluded.update(range(p + 1, min(t, upto + 1)))
    windows: List[Tuple[int, int]] = []
    start = None
    for n in range(1, upto + 2):
        inside = n <= upto and n not in excluded
        if inside and start is None:
            start = n
        elif not inside and start is not None:
            windows.append((start, n - 1))
            start = None
    return IndexPartition(upto=upto, windows=tuple(windows), marks=marks, gaps=gaps)


# ----------------------------------------------------------------------
# Общие части
# ----------------------------------------------------------------------

def interval_for(state: ConstructionState, family: Family):
    return state.dual_current if (state.is_dual and family is Family.DEG7) else state.current


def _parameters(family: Family, gamma: Fraction, depth: int, ctx: PrecisionContext,
                **extra) -> Dict[str, object]:
    params: Dict[str, object] = {
        "family": family.value,
        "gamma": fraction_text(gamma),
        "depth": depth,
        "bits": ctx.bits,
    }
    params.update(extra)
    return params


def _inside(state: ConstructionState, family: Family, gamma: Fraction) -> CheckRecord:
    if not state.intervals:
        return CheckRecord.vacuous("gamma inside final interval", "construction has no stages")
    interval = interval_for(state, family)
    return CheckRecord.flag("gamma inside final interval", interval.contains(gamma),
                            detail=str(interval))


def _segment(diag: OrbitDiagnostics, a: int, b: int, powers: List[BigReal]) -> CheckRecord:
    """d_n > lambda^n для n = a..b: первое нарушение или самое тесное неравенство"""
    name = f"d_n > lambda^n, n in [{a}, {b}]"
    binding = None
    for n in range(a, b + 1):
        d = diag.derivative(n)
        s = certified_sign(d - powers[n])
        if not s.is_decided:
            raise SignUndecidable(f"d_{n} - lambda^{n}", diag.bits)
        if s is not Sign.POSITIVE:
            return CheckRecord.inequality(name, d, ">", powers[n], detail=f"n={n}", n=n)
        ratio = float(d.log()) - float(powers[n].log())
        if binding is None or ratio < binding[0]:
            binding = (ratio, n)
    n = binding[1]
    return CheckRecord.inequality(name, diag.derivative(n), ">", powers[n],
                                  detail=f"binding n={n}", n=n)


def _powers(lam: BigReal, upto: int) -> List[BigReal]:
    powers = [BigReal.from_fraction(1, lam.prec)]
    for _ in range(upto):
        powers.append(powers[-1] * lam)
    return powers


def _orbit_report(name: str, m: BimodalMap, depth: int, ctx: PrecisionContext, evaluate,
                  parameters: Dict[str, object], head: List[CheckRecord]) -> VerificationReport:
    """evaluate(diag, ctx) -> (записи, сводка), с эскалацией точности"""
    try:
        records, summary = with_diagnostics(m, depth, ctx, evaluate, what=f"{name} at {m.label}")
    except (SignUndecidable, OrbitError) as e:
        logger.warning(f"{name} at {m.label} could not be decided: {e}")
        records, summary = [CheckRecord.flag(name, False, detail=str(e))], {}
    return VerificationReport(name=name, parameters=parameters,
                              checks=tuple(head + list(records)), summary=summary)


# ----------------------------------------------------------------------
# Проверки
# ----------------------------------------------------------------------

def ce_windows(state: ConstructionState, gamma, family: Family = Family.CUBIC,
               depth: Optional[int] = None, upto: Optional[int] = None,
               ctx: Optional[PrecisionContext] = None) -> VerificationReport:
    """
    d_n > lambda^n на всех CE-окнах до t_final.
    Промежутки (p, t) шагов A перечисляются без оценки.
    """
    ctx = ctx or PrecisionContext(bits=state.precision_bits)
    family = Family(family)
    gamma = Fraction(gamma)
    partition = index_partition(state, upto)
    depth = partition.upto + 1 if depth is None else depth
    lam_text = state.rates[family_rate_key(family, "lam")]
    m = make_map(family, gamma)

    unclassified = [
        CheckRecord.unclassified(f"gap ({p}, {t})", f"indices {p + 1}..{t - 1} carry no CE bound",
                                 p=p, t=t)
        for p, t in partition.gaps if t - p > 1
    ]

    def evaluate(diag: OrbitDiagnostics, c: PrecisionContext):
        lam = rate(lam_text, c)
        powers = _powers(lam, partition.upto)
        records = [_segment(diag, a, min(b, depth), powers)
                   for a, b in partition.windows if a <= depth]
        log_lam = float(lam.log())
        margins = [float(positive_log(diag.derivative(n), f"log d_{n}", c)) - n * log_lam
                   for n in partition.window_indices() if n <= depth]
        summary = {"windows": [list(w) for w in partition.windows],
                   "margin": f"{min(margins):.12g}" if margins else None}
        return records, summary

    params = _parameters(family, gamma, depth, ctx, **{"lambda": lam_text})
    return _orbit_report("ce_windows", m, depth, ctx, evaluate, params,
                         [_inside(state, family, gamma)] + unclassified)


def _decay_rate_key(state: ConstructionState, family: Family) -> str:
    if state.is_dual:
        return "dual_lam1" if family is Family.DEG7 else "dual_lam2"
    return "a_lam2"


def non_ce_witness(state: ConstructionState, gamma, family: Optional[Family] = None,
                   ctx: Optional[PrecisionContext] = None) -> VerificationReport:
    """d_p < lambda2^p и наклон log d_p / p < log lambda2 в отмеченные времена шагов A"""
    ctx = ctx or PrecisionContext(bits=state.precision_bits)
    family = Family(family) if family is not None else (
        Family.DEG7 if state.is_dual else Family.CUBIC)
    gamma = Fraction(gamma)
    marks = state.marks(StepType.A)
    key = _decay_rate_key(state, family)
    lam_text = state.rates[key]
    if not marks:
        logger.warning("non_ce_witness: construction has no A-step marks")
        return VerificationReport(
            name="non_ce_witness",
            parameters=_parameters(family, gamma, 0, ctx, **{key: lam_text}),
            checks=(CheckRecord.vacuous("d_p < lambda2^p", "no A-step marks"),),
        )
    depth = max(m.p for m in marks) + 1
    m = make_map(family, gamma)

    def evaluate(diag: OrbitDiagnostics, c: PrecisionContext):
        lam2 = rate(lam_text, c)
        records = []
        slopes = {}
        for mark in marks:
            dp = diag.derivative(mark.p)
            records.append(CheckRecord.inequality(f"d_p < lambda2^p at p={mark.p}", dp, "<",
                                                  lam2 ** mark.p, stage=mark.n, p=mark.p))
            slope = positive_log(dp, f"log d_{mark.p}", c) / mark.p
            slopes[str(mark.p)] = digits(slope, 12)
            records.append(CheckRecord.inequality(f"log d_p / p < log lambda2 at p={mark.p}",
                                                  slope, "<", lam2.log(), p=mark.p))
        return records, {"slopes": slopes, "sampled": "finite-stage evidence"}

    params = _parameters(family, gamma, depth, ctx, **{key: lam_text})
    return _orbit_report("non_ce_witness", m, depth, ctx, evaluate, params,
                         [_inside(state, family, gamma)])


def recurrence(state: ConstructionState, gamma, family: Family = Family.CUBIC,
               ctx: Optional[PrecisionContext] = None) -> VerificationReport:
    """0 < |g^p(c2) - c2| < Delta_k в отмеченные времена шагов B"""
    ctx = ctx or PrecisionContext(bits=state.precision_bits)
    family = Family(family)
    gamma = Fraction(gamma)
    marks = state.marks(StepType.B)
    if not marks:
        return VerificationReport(
            name="recurrence", parameters=_parameters(family, gamma, 0, ctx),
            checks=(CheckRecord.vacuous("|g^p(c2) - c2| < Delta", "no B-step marks"),),
        )
    deltas = []
    for index, mark in enumerate(marks, start=1):
        record = state.record_for(mark.n)
        deltas.append(Fraction(record.delta) if record is not None and record.delta
                      else delta_for(index))
    depth = max(m.p for m in marks) + 1
    m = make_map(family, gamma)

    def evaluate(diag: OrbitDiagnostics, c: PrecisionContext):
        c2 = m.critical_points(c)[1]
        zero = BigReal.from_fraction(0, c.bits)
        records = []
        distances = {}
        for mark, delta in zip(marks, deltas):
            distance = abs(diag.v[mark.p - 1] - c2)
            distances[str(mark.p)] = digits(distance, 12)
            records.append(CheckRecord.inequality(
                f"|g^p(c2) - c2| < Delta at p={mark.p}", distance, "<",
                BigReal.from_fraction(delta, c.bits), stage=mark.n, p=mark.p,
                delta=fraction_text(delta)))
            records.append(CheckRecord.inequality(f"|g^p(c2) - c2| > 0 at p={mark.p}",
                                                  distance, ">", zero, p=mark.p))
        return records, {"distances": distances}

    return _orbit_report("recurrence", m, depth, ctx, evaluate,
                         _parameters(family, gamma, depth, ctx), [_inside(state, family, gamma)])


def _order_signs(points: List[BigReal], bits: int) -> Tuple[int, ...]:
    signs = []
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            s = certified_sign(points[i] - points[j])
            if not s.is_decided:
                raise SignUndecidable(f"order of postcritical points {i}, {j}", bits)
            signs.append(s.factor)
    return tuple(signs)


def _postcritical_order(m: BimodalMap, n: int, ctx: PrecisionContext) -> Tuple[int, ...]:
    """Знаки попарных разностей c1, c2, v_0..v_{n-1}"""

    def evaluate(diag: OrbitDiagnostics, c: PrecisionContext) -> Tuple[int, ...]:
        return _order_signs(list(m.critical_points(c)) + list(diag.v), c.bits)

    return with_diagnostics(m, n, ctx, evaluate, what=f"postcritical order of {m.label}")


def combinatorial_equiv(state: ConstructionState, gamma, gamma_prime,
                        depth: Optional[int] = None, points: int = 32,
                        ctx: Optional[PrecisionContext] = None) -> VerificationReport:
    """Совпадение нидинга обоих семейств до глубины t_final и порядка первых точек орбит"""
    ctx = ctx or PrecisionContext(bits=state.precision_bits)
    gamma, gamma_prime = Fraction(gamma), Fraction(gamma_prime)
    depth = state.final_t if depth is None else depth
    params = {"gamma": fraction_text(gamma), "gamma_prime": fraction_text(gamma_prime),
              "depth": depth, "points": min(points, depth), "bits": ctx.bits}
    if depth == 0:
        return VerificationReport(name="combinatorial_equiv", parameters=params,
                                  checks=(CheckRecord.vacuous("kneading prefixes agree",
                                                              "depth 0"),))
    cubic = make_map(Family.CUBIC, gamma)
    deg7 = make_map(Family.DEG7, gamma_prime)
    checks = []
    if state.is_dual:
        checks.append(_inside(state, Family.CUBIC, gamma))
        checks.append(_inside(state, Family.DEG7, gamma_prime))

    summary: Dict[str, object] = {}
    try:
        k_cubic = kneading2(cubic, depth, ctx).symbols(depth)
        k_deg7 = kneading2(deg7, depth, ctx).symbols(depth)
        first = next((i for i, (a, b) in enumerate(zip(k_cubic, k_deg7)) if a is not b), None)
        if first is None and len(k_cubic) != len(k_deg7):
            first = min(len(k_cubic), len(k_deg7))
        summary["first_difference"] = first
        checks.append(CheckRecord.flag(
            f"kneading prefixes agree to depth {depth}", first is None,
            detail="identical" if first is None else f"first difference at index {first}",
            index=first,
        ))
    except OrbitError as e:
        checks.append(CheckRecord.flag(f"kneading prefixes agree to depth {depth}", False,
                                       detail=str(e)))

    monotone = all(certified_sign(m.deriv(0, ctx)) is Sign.POSITIVE for m in (cubic, deg7))
    checks.append(CheckRecord.flag("matching monotonicity type (+, -, +)", monotone))

    n = min(points, depth)
    try:
        same_order = _postcritical_order(cubic, n, ctx) == _postcritical_order(deg7, n, ctx)
        checks.append(CheckRecord.flag(f"order of c1, c2 and first {n} postcritical points",
                                       same_order))
    except (SignUndecidable, OrbitError) as e:
        checks.append(CheckRecord.flag(f"order of c1, c2 and first {n} postcritical points",
                                       False, detail=str(e)))
    return VerificationReport(name="combinatorial_equiv", parameters=params,
                              checks=tuple(checks), summary=summary)


def dual_rate_contrast(state: ConstructionState,
                       ctx: Optional[PrecisionContext] = None) -> VerificationReport:
    """
    В серединах финальных интервалов: d_p > lambda2^p у кубического семейства
    и d~_p < lambda1^p у семейства степени 7 в каждое отмеченное время двойного шага A.
    """
    ctx = ctx or PrecisionContext(bits=state.precision_bits)
    if not state.is_dual:
        return VerificationReport(
            name="dual_rate_contrast", parameters={"mode": state.mode.value},
            checks=(CheckRecord.vacuous("dual rate contrast", "single-family construction"),),
        )
    marks = state.marks(StepType.A)
    checks: List[CheckRecord] = []

    left0, _ = exponent_gap(ctx)
    tol = BigReal.from_fraction(Fraction(1, 2 ** (ctx.bits // 2)), ctx.bits)
    checks.append(CheckRecord.inequality("|gap left at gamma=0 - 1| < 2^-(bits/2)",
                                         abs(left0 - 1), "<", tol))
    theta1, theta2, eta = (state.rate(name) for name in ("theta1", "theta2", "eta"))
    checks.append(CheckRecord.flag("theta1 < eta < theta2", theta1 < eta < theta2,
                                   detail=f"{float(theta1):.6g} < {float(eta):.6g} "
                                          f"< {float(theta2):.6g}"))
    checks.append(CheckRecord.inequality("theta1 > gap left at gamma=0",
                                         BigReal.from_fraction(theta1, ctx.bits), ">", left0))

    params = {"mode": state.mode.value, "bits": ctx.bits,
              "dual_lam1": state.rates["dual_lam1"], "dual_lam2": state.rates["dual_lam2"]}
    if not marks:
        checks.append(CheckRecord.vacuous("dual rate contrast", "no A-step marks"))
        return VerificationReport(name="dual_rate_contrast", parameters=params,
                                  checks=tuple(checks))

    depth = max(m.p for m in marks) + 1
    for family, relation, key in ((Family.CUBIC, ">", "dual_lam2"), (Family.DEG7, "<", "dual_lam1")):
        gamma = interval_for(state, family).midpoint
        m = make_map(family, gamma)
        params[f"{family.value}.gamma"] = fraction_text(gamma)
        lam_text = state.rates[key]

        def evaluate(diag: OrbitDiagnostics, c: PrecisionContext, relation=relation,
                     lam_text=lam_text, family=family, key=key):
            lam = rate(lam_text, c)
            return [CheckRecord.inequality(f"{family.value}: d_p {relation} {key}^p at p={mark.p}",
                                           diag.derivative(mark.p), relation, lam ** mark.p,
                                           p=mark.p)
                    for mark in marks], {}

        report = _orbit_report("dual_rate_contrast", m, depth, ctx, evaluate, params, [])
        checks.extend(report.checks)
    return VerificationReport(name="dual_rate_contrast", parameters=params, checks=tuple(checks))
