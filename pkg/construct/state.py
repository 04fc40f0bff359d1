"""
Состояние конструкции: вложенные интервалы параметров, общий префикс S_n,
длины t_n, отмеченные времена p и журнал шагов.

Все объекты иммутабельны: шаг возвращает новое состояние через extend().
"""

from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from config.settings import STATE_SCHEMA_VERSION
from construct.errors import StepFailed
from families import Family
from paramsearch import ParamInterval
from symbolic import ItinerarySeq, Symbol, is_minimal, parse_word, word_text


class Mode(str, Enum):
    SINGLE = "single"
    DUAL = "dual"


class StepType(str, Enum):
    BOOTSTRAP = "S"
    A = "A"
    B = "B"


class PMark(BaseModel):
    """Отмеченное время p шага, построившего этап n"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2)
    p: int = Field(ge=1)
    type: StepType

    @field_validator('type')
    @classmethod
    def not_bootstrap(cls, v: StepType) -> StepType:
        if v is StepType.BOOTSTRAP:
            raise ValueError('Bootstrap stage has no marked time')
        return v


class StepRecord(BaseModel):
    """
    Запись журнала шага.
    Без меток времени: файл состояния воспроизводим байт в байт.
    """
    model_config = ConfigDict(frozen=True)

    stage: int
    step_type: StepType
    k: Dict[str, int] = Field(default_factory=dict)
    p: Optional[int] = None
    t: int
    delta: Optional[str] = None
    constants: Dict[str, str] = Field(default_factory=dict)
    checks: Dict[str, Dict[str, int]] = Field(default_factory=dict)

    @classmethod
    def create(cls,
               stage: int,
               step_type: StepType,
               t: int,
               k: Optional[Dict[str, int]] = None,
               p: Optional[int] = None,
               delta: Optional[str] = None,
               constants: Optional[Dict[str, str]] = None,
               checks: Optional[Dict[str, Dict[str, int]]] = None) -> 'StepRecord':
        """Фабричный метод для записи шага"""
        return cls(
            stage=stage,
            step_type=step_type,
            t=t,
            k=k or {},
            p=p,
            delta=delta,
            constants=constants or {},
            checks=checks or {},
        )

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> 'StepRecord':
        return StepRecord.model_validate(data)


class ConstructionState(BaseModel):
    """Этапы 1..n конструкции; intervals[n-1] относится к этапу n"""
    model_config = ConfigDict(frozen=True)

    mode: Mode
    precision_bits: int
    rates: Dict[str, str] = Field(default_factory=dict)
    prefix: Tuple[Symbol, ...] = ()
    t: Tuple[int, ...] = ()
    p_marks: Tuple[PMark, ...] = ()
    intervals: Tuple[ParamInterval, ...] = ()
    dual_intervals: Tuple[ParamInterval, ...] = ()
    step_log: Tuple[StepRecord, ...] = ()

    # ------------------------------------------------------------------
    # Доступ
    # ------------------------------------------------------------------

    @property
    def stage(self) -> int:
        return len(self.t)

    @property
    def final_t(self) -> int:
        return self.t[-1] if self.t else 0

    @property
    def current(self) -> ParamInterval:
        if not self.intervals:
            raise IndexError("Construction has no stages yet")
        return self.intervals[-1]

    @property
    def dual_current(self) -> ParamInterval:
        if not self.dual_intervals:
            raise IndexError("Construction has no second-family stages")
        return self.dual_intervals[-1]

    @property
    def is_dual(self) -> bool:
        return self.mode is Mode.DUAL

    @property
    def prefix_text(self) -> str:
        return word_text(self.prefix)

    def marks(self, step_type: StepType) -> List[PMark]:
        return [m for m in self.p_marks if m.type is step_type]

    def t_at(self, stage: int) -> int:
        """t_n; t_0 = 0"""
        return 0 if stage == 0 else self.t[stage - 1]

    def rate(self, name: str) -> Fraction:
        if name not in self.rates:
            raise KeyError(f"Rate {name!r} is not recorded in the construction state")
        return Fraction(self.rates[name])

    def record_for(self, stage: int) -> Optional[StepRecord]:
        for record in self.step_log:
            if record.stage == stage:
                return record
        return None

    # ------------------------------------------------------------------
    # Переходы
    # ------------------------------------------------------------------

    def extend(self, prefix: Tuple[Symbol, ...], interval: ParamInterval,
               record: StepRecord, mark: Optional[PMark] = None,
               dual_interval: Optional[ParamInterval] = None) -> 'ConstructionState':
        """Новое состояние с этапом n+1; проверяет инварианты перехода"""
        prefix = tuple(prefix)
        step = record.step_type.value
        t_new = len(prefix)
        if self.t:
            if prefix[:len(self.prefix)] != self.prefix or t_new <= self.final_t:
                raise StepFailed("invariant", step, "prefix does not strictly extend S_n")
            if not interval.strictly_inside(self.current):
                raise StepFailed("invariant", step, f"{interval} not nested in {self.current}")
        if not is_minimal(ItinerarySeq.infinite(prefix, Symbol.I2)):
            raise StepFailed("invariant", step, f"{word_text(prefix)}2^inf is not minimal")
        if mark is not None and not self.final_t < mark.p < t_new:
            raise StepFailed("invariant", step,
                             f"marked time p={mark.p} outside ({self.final_t}, {t_new})")
        if self.is_dual:
            if dual_interval is None:
                raise StepFailed("invariant", step, "dual construction needs both intervals")
            if self.dual_intervals and not dual_interval.strictly_inside(self.dual_current):
                raise StepFailed("invariant", step, "second-family interval not nested")
            if dual_interval.certified_prefix != interval.certified_prefix:
                raise StepFailed("invariant", step, "families carry different prefixes")
        return self.model_copy(update={
            'prefix': prefix,
            't': self.t + (t_new,),
            'p_marks': self.p_marks + ((mark,) if mark is not None else ()),
            'intervals': self.intervals + (interval,),
            'dual_intervals': self.dual_intervals + (
                (dual_interval,) if dual_interval is not None else ()),
            'step_log': self.step_log + (record,),
        })

    def with_rates(self, **rates: str) -> 'ConstructionState':
        updated = dict(self.rates)
        updated.update(rates)
        return self.model_copy(update={'rates': updated})

    # ------------------------------------------------------------------
    # Сериализация
    # ------------------------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        return {
            "version": STATE_SCHEMA_VERSION,
            "mode": self.mode.value,
            "precision_bits": self.precision_bits,
            "rates": dict(self.rates),
            "prefix": self.prefix_text,
            "t": list(self.t),
            "p_marks": [{"n": m.n, "p": m.p, "type": m.type.value} for m in self.p_marks],
            "intervals": [i.to_dict() for i in self.intervals],
            "dual_intervals": [i.to_dict() for i in self.dual_intervals],
            "step_log": [r.to_dict() for r in self.step_log],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ConstructionState':
        return cls(
            mode=Mode(data["mode"]),
            precision_bits=int(data["precision_bits"]),
            rates={str(k): str(v) for k, v in data.get("rates", {}).items()},
            prefix=parse_word(data.get("prefix", "")),
            t=tuple(int(x) for x in data.get("t", [])),
            p_marks=tuple(PMark(**m) for m in data.get("p_marks", [])),
            intervals=tuple(ParamInterval.from_dict(i) for i in data.get("intervals", [])),
            dual_intervals=tuple(ParamInterval.from_dict(i)
                                 for i in data.get("dual_intervals", [])),
            step_log=tuple(StepRecord.from_dict(r) for r in data.get("step_log", [])),
        )


def empty_state(mode: Mode, precision_bits: int, rates: Dict[str, str]) -> ConstructionState:
    return ConstructionState(mode=Mode(mode), precision_bits=precision_bits, rates=rates)


def families_of(mode: Mode) -> Tuple[Family, ...]:
    return (Family.CUBIC, Family.DEG7) if Mode(mode) is Mode.DUAL else (Family.CUBIC,)


_FAMILY_RATE_KEYS = {
    Family.CUBIC: {"lam": "lam", "lam_prime": "lam_prime"},
    Family.DEG7: {"lam": "deg7_lam", "lam_prime": "deg7_lam_prime"},
}


def family_rate_key(family: Family, name: str) -> str:
    """Имя скорости семейства в state.rates: lam у семейства степени 7 — deg7_lam"""
    return _FAMILY_RATE_KEYS[Family(family)].get(name, name)
