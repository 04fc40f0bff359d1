"""
Диагностика орбиты второй критической точки:
v_n = g^(n+1)(c2), d_n = |(g^n)'(v)|, множители |g'(v_n)|.
"""

import csv
from pathlib import Path
from typing import Callable, Iterator, List, Optional, Tuple, TypeVar, Union

import mpmath
from pydantic import BaseModel, ConfigDict

from config.logging import get_logger
from families import BimodalMap
from numerics import BigReal, PrecisionContext, Sign, SignUndecidable, certified_sign
from orbits.itinerary import critical_value
from utils.escalation import run_with_escalation

logger = get_logger(__name__)

T = TypeVar('T')

CSV_HEADER = ("n", "v_n", "d_n", "log_d_n_over_n")


class OrbitDiagnostics(BaseModel):
    """v_0..v_{depth-1}, d_0..d_{depth-1} и множители |g'(v_n)|"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    bits: int
    v: Tuple[BigReal, ...]
    d: Tuple[BigReal, ...]
    factors: Tuple[BigReal, ...]

    @property
    def depth(self) -> int:
        return len(self.v)

    def derivative(self, n: int) -> BigReal:
        """d_n для 0 <= n <= depth"""
        if n < len(self.d):
            return self.d[n]
        if n == len(self.d) and self.d:
            return self.d[-1] * self.factors[n - 1]
        raise IndexError(f"d_{n} beyond diagnostics depth {self.depth}")

    def d_rel(self, n: int, p: int) -> BigReal:
        """d_{n,p} = |(g^p)'(v_n)| как произведение множителей"""
        if n < 0 or p < 0 or n + p > len(self.factors):
            raise IndexError(f"d_({n},{p}) beyond diagnostics depth {self.depth}")
        result = BigReal.from_fraction(1, self.bits)
        for f in self.factors[n:n + p]:
            result = result * f
        return result

    def window(self, n: int, length: int) -> Iterator[Tuple[int, BigReal]]:
        """(l, d_{n,l}) для l = 1..length"""
        if n + length > len(self.factors):
            raise IndexError(f"d_({n},{length}) beyond diagnostics depth {self.depth}")
        acc = BigReal.from_fraction(1, self.bits)
        for l in range(1, length + 1):
            acc = acc * self.factors[n + l - 1]
            yield l, acc

    def log_growth(self, n: int) -> Optional[float]:
        """log d_n / n; None для n = 0 и для d_n, не отделимого от нуля"""
        if n == 0:
            return None
        dn = self.derivative(n)
        if certified_sign(dn) is not Sign.POSITIVE:
            return None
        return float(dn.log()) / n

    def csv_rows(self) -> Iterator[List[str]]:
        for n in range(self.depth):
            growth = self.log_growth(n)
            yield [
                str(n),
                mpmath.nstr(self.v[n].value, 25),
                mpmath.nstr(self.d[n].value, 25),
                "" if growth is None else f"{growth:.12g}",
            ]

    def write_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            writer.writerows(self.csv_rows())
        logger.info(f"Diagnostics for {self.label} written to {path} ({self.depth} rows)")
        return path


def diagnostics(m: BimodalMap, depth: int, ctx: PrecisionContext) -> OrbitDiagnostics:
    """Орбита длины depth с цепным правилом d_{n+1} = d_n |g'(v_n)|"""
    if depth < 0:
        raise ValueError("Diagnostics depth must be non-negative")
    work = ctx.for_depth(depth, m.log2_expansion(ctx))
    x = critical_value(m, work)
    one = BigReal.from_fraction(1, work.bits)
    v: List[BigReal] = []
    d: List[BigReal] = []
    factors: List[BigReal] = []
    dn = one
    for n in range(depth):
        v.append(x)
        d.append(dn)
        factor = abs(m.deriv(x, work))
        factors.append(factor)
        dn = dn * factor
        if n + 1 < depth:
            x = m.eval(x, work)
    return OrbitDiagnostics(label=m.label, bits=work.bits, v=tuple(v), d=tuple(d),
                            factors=tuple(factors))


def with_diagnostics(m: BimodalMap, depth: int, ctx: PrecisionContext,
                     evaluate: Callable[[OrbitDiagnostics, PrecisionContext], T],
                     what: str = "orbit checks") -> T:
    """
    evaluate(diag, ctx) на диагностике; если evaluate бросает SignUndecidable,
    диагностика пересчитывается на большей точности.
    """
    base = ctx.for_depth(depth, m.log2_expansion(ctx))

    def attempt(c: PrecisionContext) -> T:
        return evaluate(diagnostics(m, depth, c), c)

    result, _ = run_with_escalation(attempt, base, SignUndecidable, what)
    return result
