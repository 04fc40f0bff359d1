"""
Pydantic модели отчетов проверки.
Каждая запись хранит проверенное неравенство и значения обеих сторон.
"""

from typing import Any, Dict, List, Optional, Tuple

import mpmath
from pydantic import BaseModel, ConfigDict, Field

from config.settings import REPORT_DIGITS
from numerics import BigReal, Sign, SignUndecidable, certified_sign

RELATIONS = (">", "<")


def value_text(x: BigReal) -> str:
    """Значение с погрешностью для отчета"""
    if x.exact is not None:
        return str(x.exact)
    text = mpmath.nstr(x.value, REPORT_DIGITS)
    if x.err:
        text += f" +/- {mpmath.nstr(x.err, 3)}"
    return text


class CheckRecord(BaseModel):
    """Одна проверка: left <relation> right и ее исход"""
    model_config = ConfigDict(frozen=True)

    name: str
    passed: Optional[bool] = Field(None, description="None: индекс не классифицирован")
    relation: str = ""
    left: str = ""
    right: str = ""
    detail: str = ""
    witness: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def inequality(cls, name: str, left: BigReal, relation: str, right: BigReal,
                   detail: str = "", **witness) -> 'CheckRecord':
        """
        Сертифицированная проверка неравенства.
        SignUndecidable, если разность не отделена от нуля: вызывающий код
        пересчитывает на большей точности.
        """
        if relation not in RELATIONS:
            raise ValueError(f"Relation must be one of {RELATIONS}, got {relation!r}")
        sign = certified_sign(left - right)
        if not sign.is_decided:
            raise SignUndecidable(name, max(left.prec, right.prec))
        expected = Sign.POSITIVE if relation == ">" else Sign.NEGATIVE
        return cls(name=name, passed=sign is expected, relation=relation,
                   left=value_text(left), right=value_text(right), detail=detail,
                   witness=witness)

    @classmethod
    def flag(cls, name: str, passed: bool, detail: str = "", **witness) -> 'CheckRecord':
        return cls(name=name, passed=bool(passed), detail=detail, witness=witness)

    @classmethod
    def vacuous(cls, name: str, detail: str) -> 'CheckRecord':
        return cls(name=name, passed=True, detail=f"vacuous: {detail}")

    @classmethod
    def unclassified(cls, name: str, detail: str, **witness) -> 'CheckRecord':
        return cls(name=name, passed=None, detail=detail, witness=witness)

    @property
    def status(self) -> str:
        if self.passed is None:
            return "----"
        return "PASS" if self.passed else "FAIL"


class VerificationReport(BaseModel):
    """Набор проверок с параметрами, при которых они выполнены"""
    model_config = ConfigDict(frozen=True)

    name: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    checks: Tuple[CheckRecord, ...] = ()
    summary: Dict[str, Any] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """Неклассифицированные записи исход не меняют"""
        return all(c.passed is not False for c in self.checks)

    @property
    def failures(self) -> List[CheckRecord]:
        return [c for c in self.checks if c.passed is False]

    @property
    def counts(self) -> Dict[str, int]:
        return {
            "passed": sum(1 for c in self.checks if c.passed is True),
            "failed": sum(1 for c in self.checks if c.passed is False),
            "unclassified": sum(1 for c in self.checks if c.passed is None),
        }

    def to_dict(self) -> Dict[str, Any]:
        result = self.model_dump(mode="json")
        result["passed"] = self.passed
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'VerificationReport':
        data = {k: v for k, v in data.items() if k != "passed"}
        return cls.model_validate(data)

    def table(self) -> str:
        """Текстовая таблица для терминала"""
        params = ", ".join(f"{k}={v}" for k, v in self.parameters.items())
        lines = [f"== {self.name} ({params})"]
        for c in self.checks:
            line = f"  {c.status}  {c.name}"
            if c.relation:
                line += f"  {c.left} {c.relation} {c.right}"
            if c.detail:
                line += f"  [{c.detail}]"
            lines.append(line)
        counts = self.counts
        lines.append(
            f"  -> {'PASS' if self.passed else 'FAIL'}: {counts['passed']} passed, "
            f"{counts['failed']} failed, {counts['unclassified']} unclassified"
        )
        return "\n".join(lines)
