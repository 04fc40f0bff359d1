"""
Запуск конструкции по расписанию шагов с сохранением состояния после каждого шага.
"""

from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Tuple, Union

from config.logging import get_logger
from config.settings import DELTA_SCHEDULE_BASE
from config.typed_settings import KneadlabSettings
from construct.bootstrap import bootstrap
from construct.context import StepContext
from construct.errors import ConstructionError
from construct.state import ConstructionState, Mode, StepType
from construct.steps import describe, dual_step_A, dual_step_B, step_A, step_B
from construct.store import save_state

logger = get_logger(__name__)

Schedule = Tuple[StepType, ...]


def parse_schedule(schedule: Union[str, Iterable]) -> Schedule:
    """'ABAB' или список 'A'/'B' -> шаги; ValueError на прочих символах"""
    steps = []
    for item in schedule:
        text = item.value if isinstance(item, StepType) else str(item).strip().upper()
        if not text:
            continue
        if text not in (StepType.A.value, StepType.B.value):
            raise ValueError(f"Schedule entries must be A or B, got {item!r}")
        steps.append(StepType(text))
    return tuple(steps)


def delta_for(index: int) -> Fraction:
    """Delta_k = 2^-k для k-го шага B (k >= 1)"""
    return Fraction(1, DELTA_SCHEDULE_BASE ** index)


def apply_step(state: ConstructionState, step_type: StepType, sctx: StepContext) -> ConstructionState:
    """Один шаг нужного вида; номер Delta — порядковый номер шага B"""
    if step_type is StepType.A:
        return dual_step_A(state, sctx) if state.is_dual else step_A(state, sctx)
    delta = delta_for(len(state.marks(StepType.B)) + 1)
    return dual_step_B(state, delta, sctx) if state.is_dual else step_B(state, delta, sctx)


def run(mode: Union[Mode, str], schedule: Union[str, Iterable], settings: KneadlabSettings,
        state_path: Optional[Union[str, Path]] = None,
        initial: Optional[ConstructionState] = None,
        sctx: Optional[StepContext] = None) -> ConstructionState:
    """
    Старт (или продолжение initial) и шаги расписания.
    При ошибке шага сохраненным остается состояние после последнего успешного шага.
    """
    mode = Mode(mode)
    steps = parse_schedule(schedule)
    settings.validate_consistency(mode.value)
    sctx = sctx or StepContext.from_settings(settings)

    if initial is None:
        state = bootstrap(mode, settings, sctx)
        if state_path is not None:
            save_state(state, state_path)
    else:
        if initial.mode is not mode:
            raise ConstructionError(
                f"Cannot continue a {initial.mode.value} construction in {mode.value} mode"
            )
        state = initial
        logger.info(f"Continuing construction: {describe(state)}")

    for i, step_type in enumerate(steps, start=1):
        logger.info(f"Schedule step {i}/{len(steps)}: {step_type.value}")
        try:
            state = apply_step(state, step_type, sctx)
        except ConstructionError as e:
            logger.error(f"Construction stopped at schedule step {i} ({step_type.value}): {e}")
            raise
        if state_path is not None:
            save_state(state, state_path)
        logger.info(f"Construction now at {describe(state)}")
    return state
