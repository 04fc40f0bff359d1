"""
ParamInterval: окно параметров семейства с выборочно сертифицированным
префиксом нидинг-последовательности.
"""

from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.settings import SAMPLE_COUNT
from families import Family
from numerics import BigReal, fraction_text, parse_real
from symbolic import Symbol, parse_word, word_text


class ParamInterval(BaseModel):
    """[lo, hi] внутри [0, h] семейства; концы — точные двоично-рациональные"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: Family
    lo: Fraction
    hi: Fraction
    certified_prefix: Tuple[Symbol, ...] = ()
    samples: int = Field(default=SAMPLE_COUNT, ge=0)

    @field_validator('lo', 'hi', mode='before')
    @classmethod
    def to_fraction(cls, v) -> Fraction:
        if isinstance(v, BigReal):
            return v.to_fraction()
        if isinstance(v, str):
            return parse_real(v)
        return Fraction(v)

    @field_validator('certified_prefix', mode='before')
    @classmethod
    def to_word(cls, v) -> Tuple[Symbol, ...]:
        if isinstance(v, str):
            return parse_word(v)
        return tuple(v)

    @model_validator(mode='after')
    def in_range(self) -> 'ParamInterval':
        if not self.lo < self.hi:
            raise ValueError(f"Parameter interval requires lo < hi, got [{self.lo}, {self.hi}]")
        if self.lo < 0 or self.hi > self.family.gamma_max:
            raise ValueError(
                f"Parameter interval [{self.lo}, {self.hi}] outside [0, {self.family.gamma_max}]"
            )
        return self

    @classmethod
    def full(cls, family: Family, samples: int = SAMPLE_COUNT) -> 'ParamInterval':
        """Все окно семейства [0, h]"""
        family = Family(family)
        return cls(family=family, lo=Fraction(0), hi=family.gamma_max, samples=samples)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def prefix_text(self) -> str:
        return word_text(self.certified_prefix)

    def contains(self, gamma: Fraction) -> bool:
        return self.lo <= Fraction(gamma) <= self.hi

    def strictly_inside(self, other: 'ParamInterval') -> bool:
        """self лежит во внутренности other"""
        return other.lo < self.lo and self.hi < other.hi

    def sample_points(self, samples: Optional[int] = None) -> Tuple[Fraction, ...]:
        """
        Концы и samples внутренних точек, строго по возрастанию.
        Внутренние точки лежат на сетке lo + width * j / 2^m, 2^m >= samples + 1,
        ближе всего к равномерному шагу; при двоично-рациональных концах все точки
        двоично-рациональны и имеют конечную десятичную запись.
        """
        n = self.samples if samples is None else samples
        grid = 1 << max(n, 1).bit_length()
        interior = tuple(self.lo + self.width * round(Fraction(i * grid, n + 1)) / grid
                         for i in range(1, n + 1))
        return (self.lo,) + interior + (self.hi,)

    def with_prefix(self, prefix) -> 'ParamInterval':
        return self.model_copy(update={'certified_prefix': tuple(prefix)})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family.value,
            "lo": fraction_text(self.lo),
            "hi": fraction_text(self.hi),
            "prefix": self.prefix_text,
            "samples": self.samples,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ParamInterval':
        return cls(
            family=Family(data["family"]),
            lo=parse_real(data["lo"]),
            hi=parse_real(data["hi"]),
            certified_prefix=parse_word(data.get("prefix", "")),
            samples=int(data.get("samples", SAMPLE_COUNT)),
        )

    def __str__(self) -> str:
        return f"{self.family.value}[{float(self.lo):.6g}, {float(self.hi):.6g}]"
