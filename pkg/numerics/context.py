import math

import mpmath
from pydantic import BaseModel, ConfigDict, Field

from config.settings import (
    PRECISION_BITS,
    PRECISION_MIN_BITS,
    PRECISION_ESCALATION_FACTOR,
    PRECISION_MAX_ESCALATIONS,
    PRECISION_GUARD_BITS,
    PRECISION_BITS_QUANTUM,
)
from numerics.errors import PrecisionExhausted


class PrecisionContext(BaseModel):
    """
    Рабочая точность вычислений.
    Иммутабельна: эскалация возвращает новый контекст, исходный не меняется.
    """
    model_config = ConfigDict(frozen=True)

    bits: int = Field(default=PRECISION_BITS, ge=PRECISION_MIN_BITS)
    escalation_factor: int = Field(default=PRECISION_ESCALATION_FACTOR, ge=2)
    max_escalations: int = Field(default=PRECISION_MAX_ESCALATIONS, ge=0)
    escalations: int = Field(default=0, ge=0)

    @property
    def initial_bits(self) -> int:
        return self.bits // self.escalation_factor ** self.escalations

    @property
    def can_escalate(self) -> bool:
        return self.escalations < self.max_escalations

    def escalate(self) -> 'PrecisionContext':
        """Следующий уровень точности: bits * escalation_factor"""
        if not self.can_escalate:
            raise PrecisionExhausted(self.bits, self.escalations)
        return self.model_copy(update={
            'bits': self.bits * self.escalation_factor,
            'escalations': self.escalations + 1,
        })

    def for_depth(self, depth: int, log2_rate: float) -> 'PrecisionContext':
        """
        Свежий базовый контекст, точности которого хватает на орбиту длины depth
        при росте погрешности не быстрее 2^log2_rate за итерацию.
        """
        needed = math.ceil(max(depth, 0) * max(log2_rate, 0.0)) + PRECISION_GUARD_BITS
        needed = -(-needed // PRECISION_BITS_QUANTUM) * PRECISION_BITS_QUANTUM
        return self.model_copy(update={
            'bits': max(self.bits, needed),
            'escalations': 0,
        })

    def with_bits(self, bits: int) -> 'PrecisionContext':
        return self.model_copy(update={'bits': max(bits, PRECISION_MIN_BITS), 'escalations': 0})

    def workprec(self):
        """Контекстный менеджер mpmath на текущей точности"""
        return mpmath.workprec(self.bits)
