"""
Сертифицированная бисекция и бисекция с ньютоновскими шагами.

Функция f имеет сигнатуру f(x: Fraction, ctx: PrecisionContext) -> BigReal:
точка задается точно, поэтому при эскалации она пересчитывается без потерь.
Середины отрезков двоично-рациональны.
"""

from fractions import Fraction
from typing import Callable, Optional, Tuple, Union

import mpmath
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from config.logging import get_logger
from config.settings import PARAM_PROBE_OFFSETS
from numerics.bigreal import BigReal
from numerics.codec import mpf_to_fraction
from numerics.context import PrecisionContext
from numerics.errors import NoSignChange, SignUndecidable
from numerics.sign import Sign, certified_sign
from utils.escalation import run_with_escalation

logger = get_logger(__name__)

RealFunction = Callable[[Fraction, PrecisionContext], BigReal]
Tolerance = Union[int, Fraction, str, BigReal]


class Bracket(BaseModel):
    """Отрезок [lo, hi] с точными концами"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lo: Fraction
    hi: Fraction

    @field_validator('lo', 'hi', mode='before')
    @classmethod
    def to_fraction(cls, v) -> Fraction:
        if isinstance(v, BigReal):
            return v.to_fraction()
        return Fraction(v)

    @model_validator(mode='after')
    def ordered(self) -> 'Bracket':
        if self.lo > self.hi:
            raise ValueError('Bracket requires lo <= hi')
        return self

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def as_bigreal(self, prec: int) -> BigReal:
        """Середина с погрешностью в полширины"""
        mid = BigReal.from_fraction(self.midpoint, prec)
        if self.is_point:
            return mid
        return mid.widen(self.width / 2)


def _tolerance(tol: Tolerance) -> Fraction:
    if isinstance(tol, BigReal):
        tol = tol.to_fraction()
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("Bisection tolerance must be positive")
    return tol


def certify_sign_at(f: RealFunction, x: Fraction, ctx: PrecisionContext,
                    what: str) -> Tuple[Sign, PrecisionContext]:
    """Знак f(x) с эскалацией точности; SignUndecidable, если эскалации исчерпаны"""

    def attempt(c: PrecisionContext) -> Sign:
        s = certified_sign(f(x, c))
        if not s.is_decided:
            raise SignUndecidable(what, c.bits, x)
        return s

    return run_with_escalation(attempt, ctx, SignUndecidable, what)


def _probe(f: RealFunction, lo: Fraction, hi: Fraction, ctx: PrecisionContext,
           what: str) -> Tuple[Fraction, Sign, PrecisionContext]:
    """Знак в середине; если он не решается, пробуем сдвинутые точки"""
    mid = (lo + hi) / 2
    width = hi - lo
    candidates = [mid]
    for k in PARAM_PROBE_OFFSETS:
        shift = width / 2 ** k
        candidates.extend([mid - shift, mid + shift])
    last_error: Optional[SignUndecidable] = None
    for x in candidates:
        try:
            s, ctx = certify_sign_at(f, x, ctx, what)
            if x != mid:
                logger.debug(f"{what}: midpoint undecidable, probe shifted by {float(x - mid):.3g}")
            return x, s, ctx
        except SignUndecidable as e:
            last_error = e
    raise last_error


def _endpoints(f: RealFunction, lo: Fraction, hi: Fraction, ctx: PrecisionContext,
               what: str):
    if lo >= hi:
        raise ValueError(f"Empty bracket [{lo}, {hi}]")
    s_lo, ctx = certify_sign_at(f, lo, ctx, f"{what} at left end")
    if s_lo is Sign.ZERO:
        return Bracket(lo=lo, hi=lo), s_lo, ctx
    s_hi, ctx = certify_sign_at(f, hi, ctx, f"{what} at right end")
    if s_hi is Sign.ZERO:
        return Bracket(lo=hi, hi=hi), s_lo, ctx
    if s_lo is s_hi:
        raise NoSignChange(lo, hi, s_lo.name.lower())
    return None, s_lo, ctx


def bisect(f: RealFunction, a, b, tol: Tolerance, ctx: PrecisionContext,
           what: str = "bisect") -> Bracket:
    """
    Отрезок ширины <= tol, на котором f меняет знак.
    Точный ноль в пробной точке дает отрезок нулевой ширины.
    """
    lo, hi, tol = Fraction(a), Fraction(b), _tolerance(tol)
    done, s_lo, ctx = _endpoints(f, lo, hi, ctx, what)
    if done is not None:
        return done
    steps = 0
    while hi - lo > tol:
        x, s, ctx = _probe(f, lo, hi, ctx, what)
        steps += 1
        if s is Sign.ZERO:
            return Bracket(lo=x, hi=x)
        if s is s_lo:
            lo = x
        else:
            hi = x
    logger.debug(f"{what}: converged in {steps} steps at {ctx.bits} bits")
    return Bracket(lo=lo, hi=hi)


def _grid(tol: Fraction) -> Fraction:
    """Наибольшая степень двойки, не превосходящая tol"""
    k = tol.numerator.bit_length() - tol.denominator.bit_length()
    g = Fraction(2) ** k
    while g > tol:
        g /= 2
    while g * 2 <= tol:
        g *= 2
    return g


def _newton_candidate(f: RealFunction, df: RealFunction, x: Fraction, lo: Fraction,
                      hi: Fraction, grid: Fraction, ctx: PrecisionContext) -> Optional[Fraction]:
    fx = f(x, ctx)
    dx = df(x, ctx)
    if certified_sign(dx) not in (Sign.NEGATIVE, Sign.POSITIVE):
        return None
    step = mpf_to_fraction(mpmath.fdiv(fx.value, dx.value, prec=ctx.bits))
    candidate = round((x - step) / grid) * grid
    if not lo < candidate < hi:
        return None
    return candidate


def newton_bisect(f: RealFunction, df: RealFunction, a, b, tol: Tolerance,
                  ctx: PrecisionContext, what: str = "newton") -> Bracket:
    """
    Ньютон с сохранением сертифицированного отрезка смены знака.
    После ньютоновской точки пробуется соседняя точка на расстоянии tol/4 в сторону
    корня, чтобы закрыть дальний конец; если отрезок не сократился вдвое,
    делается шаг бисекции.
    """
    lo, hi, tol = Fraction(a), Fraction(b), _tolerance(tol)
    done, s_lo, ctx = _endpoints(f, lo, hi, ctx, what)
    if done is not None:
        return done
    grid = _grid(tol / 4)
    guess = (lo + hi) / 2
    steps = 0
    while hi - lo > tol:
        width = hi - lo
        steps += 1
        candidate = _newton_candidate(f, df, guess, lo, hi, grid, ctx)
        if candidate is not None:
            try:
                s, ctx = certify_sign_at(f, candidate, ctx, what)
            except SignUndecidable:
                s = Sign.UNDECIDABLE
            if s is Sign.ZERO:
                return Bracket(lo=candidate, hi=candidate)
            if s.is_decided:
                toward_root = s is s_lo
                if toward_root:
                    lo = candidate
                else:
                    hi = candidate
                other = candidate + grid if toward_root else candidate - grid
                if lo < other < hi:
                    try:
                        s2, ctx = certify_sign_at(f, other, ctx, what)
                    except SignUndecidable:
                        s2 = Sign.UNDECIDABLE
                    if s2 is Sign.ZERO:
                        return Bracket(lo=other, hi=other)
                    if s2 is s_lo:
                        lo = other
                    elif s2.is_decided:
                        hi = other
                guess = candidate
        if hi - lo > width / 2:
            x, s, ctx = _probe(f, lo, hi, ctx, what)
            if s is Sign.ZERO:
                return Bracket(lo=x, hi=x)
            if s is s_lo:
                lo = x
            else:
                hi = x
            if not lo < guess < hi:
                guess = (lo + hi) / 2
    logger.debug(f"{what}: converged in {steps} steps at {ctx.bits} bits")
    return Bracket(lo=lo, hi=hi)
