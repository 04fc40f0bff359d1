"""
Построители синтетических состояний конструкции для тестов проверок и хранения.
Состояния собираются напрямую, без поиска параметров.
"""

from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from construct import ConstructionState, Mode, PMark, StepRecord, StepType
from families import Family
from paramsearch import ParamInterval
from symbolic import Symbol

SINGLE_RATES: Dict[str, str] = {
    "lam": "1.2", "lam_prime": "2.0", "a_lam1": "0.5", "a_lam2": "0.9",
}
DUAL_RATES: Dict[str, str] = dict(
    SINGLE_RATES,
    dual_lam1="0.95", dual_lam2="1.05", deg7_lam="1.2", deg7_lam_prime="2.0",
    theta1="1.1", theta2="1.3", eta="1.2",
)


def interval(family: Family = Family.CUBIC, lo="0", hi="1/128",
             prefix: Sequence[Symbol] = ()) -> ParamInterval:
    return ParamInterval(family=family, lo=Fraction(lo), hi=Fraction(hi),
                         certified_prefix=tuple(prefix))


def synthetic_state(t: Tuple[int, ...] = (6,),
                    marks: Tuple[PMark, ...] = (),
                    deltas: Optional[Dict[int, str]] = None,
                    mode: Mode = Mode.SINGLE,
                    bits: int = 256) -> ConstructionState:
    """
    Состояние с этапами t и отметками marks; интервалы содержат gamma = 0,
    префикс из I1 (орбита c2 при gamma = 0 сидит в неподвижной точке 0).
    """
    deltas = deltas or {}
    prefix = (Symbol.I1,) * t[-1]
    intervals = tuple(interval(Family.CUBIC, 0, Fraction(1, 2 ** (7 + n)), prefix[:tn])
                      for n, tn in enumerate(t))
    dual = ()
    if mode is Mode.DUAL:
        dual = tuple(interval(Family.DEG7, 0, Fraction(1, 2 ** (7 + n)), prefix[:tn])
                     for n, tn in enumerate(t))
    types = {m.n: m.type for m in marks}
    log = tuple(
        StepRecord.create(stage=n, step_type=types.get(n, StepType.BOOTSTRAP), t=tn,
                          p=next((m.p for m in marks if m.n == n), None),
                          delta=deltas.get(n))
        for n, tn in enumerate(t, start=1)
    )
    return ConstructionState(
        mode=mode, precision_bits=bits,
        rates=dict(DUAL_RATES if mode is Mode.DUAL else SINGLE_RATES),
        prefix=prefix, t=t, p_marks=marks, intervals=intervals, dual_intervals=dual,
        step_log=log,
    )


def a_mark(n: int, p: int) -> PMark:
    return PMark(n=n, p=p, type=StepType.A)


def b_mark(n: int, p: int) -> PMark:
    return PMark(n=n, p=p, type=StepType.B)
