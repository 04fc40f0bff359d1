"""
Параметры выполнения конструкции, собранные из KneadlabSettings.
"""

from typing import Iterator

from pydantic import BaseModel, ConfigDict, Field

from config.typed_settings import KneadlabSettings
from numerics import PrecisionContext


class StepContext(BaseModel):
    """Точность, выборка и границы поиска k для шагов"""
    model_config = ConfigDict(frozen=True)

    precision: PrecisionContext = Field(default_factory=PrecisionContext)
    samples: int = Field(default=9, ge=0)
    jobs: int = Field(default=1, ge=1)
    k_floor: int = Field(default=8, ge=1)
    k_growth: int = Field(default=2, ge=2)
    k_cap: int = Field(default=2 ** 14, ge=1)
    bootstrap_k0_start: int = Field(default=2, ge=1)
    bootstrap_k0_limit: int = Field(default=12, ge=1)
    bootstrap_k_limit: int = Field(default=64, ge=1)

    @classmethod
    def from_settings(cls, settings: KneadlabSettings) -> 'StepContext':
        p = settings.precision
        s = settings.search
        return cls(
            precision=PrecisionContext(bits=p.precision_bits,
                                       escalation_factor=p.escalation_factor,
                                       max_escalations=p.max_escalations),
            samples=s.samples,
            jobs=s.jobs,
            k_floor=s.k_floor,
            k_growth=s.k_growth,
            k_cap=s.k_cap,
            bootstrap_k0_start=s.bootstrap_k0_start,
            bootstrap_k0_limit=s.bootstrap_k0_limit,
            bootstrap_k_limit=s.bootstrap_k_limit,
        )

    def k_candidates(self, floor: int) -> Iterator[int]:
        """floor, floor*growth, ... до k_cap включительно"""
        k = max(floor, 1)
        while k <= self.k_cap:
            yield k
            k *= self.k_growth
