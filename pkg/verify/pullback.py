"""
Вещественный эксперимент с прообразами: отрезок (x - delta, x + delta) поднимается
вдоль обратной орбиты x = x_0, x_1, ... по монотонным ветвям лап,
диаметры компонент должны убывать экспоненциально.
"""

import csv
import math
import random
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np
from pydantic import BaseModel, ConfigDict

from config.logging import get_logger
from config.settings import (
    PRECISION_BITS_QUANTUM, PRECISION_GUARD_BITS, PULLBACK_DEFAULT_POLICY,
    PULLBACK_DEFAULT_SEED, PULLBACK_EXHAUSTIVE_MAX_DEPTH,
)
from families import BimodalMap, Family
from numerics import Bracket, PrecisionContext, SignUndecidable
from orbits import NoPreimage, inverse_branch, inverse_point, lap_image
from symbolic import LAPS, Symbol, parse_word, word_text
from utils.parallel import map_parameters
from verify.errors import BranchDead

logger = get_logger(__name__)

POLICIES = ("leftmost", "random", "itinerary", "exhaustive")
PULLBACK_CSV_HEADER = ("n", "diam_n")


class PullbackResult(BaseModel):
    """Диаметры W_0..W_N и оценки скорости сжатия"""
    model_config = ConfigDict(frozen=True)

    label: str
    policy: str
    laps: Tuple[Symbol, ...] = ()
    diameters: Tuple[Fraction, ...]
    rate: Optional[float] = None
    fitted_rate: Optional[float] = None

    @property
    def depth(self) -> int:
        return len(self.diameters) - 1

    def csv_rows(self):
        for n, diam in enumerate(self.diameters):
            yield [str(n), mpmath.nstr(mpmath.fdiv(diam.numerator, diam.denominator, prec=96), 25)]

    def write_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(PULLBACK_CSV_HEADER)
            writer.writerows(self.csv_rows())
        logger.info(f"Pullback diameters for {self.label} written to {path}")
        return path


def _log(x: Fraction) -> float:
    return math.log(x.numerator) - math.log(x.denominator)


def endpoint_rate(diameters: Sequence[Fraction]) -> Optional[float]:
    """-(1/N) log(diam_N / diam_0)"""
    n = len(diameters) - 1
    if n < 1 or diameters[0] <= 0 or diameters[-1] <= 0:
        return None
    return -(_log(diameters[-1]) - _log(diameters[0])) / n


def fit_rate(diameters: Sequence[Fraction]) -> Optional[float]:
    """Наклон МНК log diam_n по второй половине орбиты, со знаком минус"""
    points = [(n, _log(d)) for n, d in enumerate(diameters) if d > 0]
    points = points[len(points) // 2:]
    if len(points) < 2:
        return None
    n, logs = np.array(points, dtype=float).T
    slope = np.polyfit(n, logs, deg=1)[0]
    return float(-slope)


def _work_context(m: BimodalMap, depth: int, delta: Fraction, ctx: PrecisionContext) -> PrecisionContext:
    """Допуск 2^-(bits/2) должен быть много меньше diam_N ~ delta * expansion^-N"""
    scale = depth * m.log2_expansion(ctx) + max(0.0, -_log(delta) / math.log(2))
    needed = 2 * (math.ceil(scale) + PRECISION_GUARD_BITS)
    needed = -(-needed // PRECISION_BITS_QUANTUM) * PRECISION_BITS_QUANTUM
    return ctx.with_bits(max(ctx.bits, needed))


def _initial(x: Fraction, delta: Fraction) -> Bracket:
    return Bracket(lo=max(Fraction(0), x - delta), hi=min(Fraction(1), x + delta))


def _live_laps(m: BimodalMap, y: Fraction, ctx: PrecisionContext) -> List[Symbol]:
    live = []
    for lap in LAPS:
        lo, hi = lap_image(m, lap, ctx)
        if lo <= y <= hi:
            live.append(lap)
    return live


def _pull(m: BimodalMap, lap: Symbol, x: Fraction, window: Bracket, step: int,
          ctx: PrecisionContext) -> Tuple[Fraction, Bracket]:
    """Прообраз точки и окна в лапе lap"""
    try:
        point = inverse_point(m, lap, x, ctx).midpoint
        component = inverse_branch(m, lap, window, ctx)
    except (NoPreimage, SignUndecidable) as e:
        raise BranchDead(step, lap.value, f"{float(x):.6g}") from e
    return point, component


def pullback_shrink(m: BimodalMap, x, delta, depth: int, ctx: PrecisionContext,
                    policy: str = PULLBACK_DEFAULT_POLICY, word: Optional[Sequence[Symbol]] = None,
                    seed: int = PULLBACK_DEFAULT_SEED) -> PullbackResult:
    """
    Диаметры компонент W_n, содержащих x_n.
    policy: leftmost — всегда I1; random — случайная живая лапа; itinerary — циклически
    по слову word (по умолчанию I1); exhaustive — все ветви, максимум по глубине.
    """
    if policy not in POLICIES:
        raise ValueError(f"Unknown branch policy {policy!r}, expected one of {POLICIES}")
    if depth < 0:
        raise ValueError("Pullback depth must be non-negative")
    x, delta = Fraction(x), Fraction(delta)
    if delta < 0:
        raise ValueError("Pullback radius must be non-negative")
    if policy == "exhaustive":
        return pullback_exhaustive(m, x, delta, depth, ctx)
    if delta == 0:
        return PullbackResult(label=m.label, policy=policy, diameters=(Fraction(0),) * (depth + 1))

    work = _work_context(m, depth, delta, ctx)
    word = tuple(word) if word else (Symbol.I1,)
    rng = random.Random(seed)
    window = _initial(x, delta)
    diameters = [window.width]
    laps: List[Symbol] = []
    for n in range(depth):
        if policy == "leftmost":
            lap = Symbol.I1
        elif policy == "random":
            lap = rng.choice(_live_laps(m, x, work))
        else:
            lap = word[n % len(word)]
        x, window = _pull(m, lap, x, window, n + 1, work)
        laps.append(lap)
        diameters.append(window.width)

    result = PullbackResult(label=m.label, policy=policy, laps=tuple(laps),
                            diameters=tuple(diameters), rate=endpoint_rate(diameters),
                            fitted_rate=fit_rate(diameters))
    logger.debug(f"Pullback {policy} on {m.label}, depth {depth}: rate={result.rate}, "
                 f"fitted={result.fitted_rate}")
    return result


def pullback_exhaustive(m: BimodalMap, x: Fraction, delta: Fraction, depth: int,
                        ctx: PrecisionContext) -> PullbackResult:
    """Все компоненты прообразов глубины n <= depth; диаметр — максимальный на уровне"""
    if depth > PULLBACK_EXHAUSTIVE_MAX_DEPTH:
        raise ValueError(f"Exhaustive pullback is limited to depth {PULLBACK_EXHAUSTIVE_MAX_DEPTH}")
    if delta == 0:
        return PullbackResult(label=m.label, policy="exhaustive",
                              diameters=(Fraction(0),) * (depth + 1))
    work = _work_context(m, depth, delta, ctx)
    level = [_initial(x, delta)]
    diameters = [level[0].width]
    for n in range(depth):
        pieces = []
        for window in level:
            for lap in LAPS:
                try:
                    pieces.append(inverse_branch(m, lap, window, work))
                except NoPreimage:
                    continue
        if not pieces:
            raise BranchDead(n + 1, "*", f"{float(x):.6g}")
        level = pieces
        diameters.append(max(piece.width for piece in level))
        logger.debug(f"Exhaustive pullback level {n + 1}: {len(level)} components")
    return PullbackResult(label=m.label, policy="exhaustive", diameters=tuple(diameters),
                          rate=endpoint_rate(diameters), fitted_rate=fit_rate(diameters))


def _random_job(job: Tuple[str, Fraction, Fraction, Fraction, int, int, int, int, int]) -> PullbackResult:
    family, gamma, x, delta, depth, seed, bits, factor, max_escalations = job
    ctx = PrecisionContext(bits=bits, escalation_factor=factor, max_escalations=max_escalations)
    m = BimodalMap(family=Family(family), gamma=gamma)
    return pullback_shrink(m, x, delta, depth, ctx, policy="random", seed=seed)


def random_pullbacks(m: BimodalMap, x, delta, depth: int, count: int, ctx: PrecisionContext,
                     seed: int = PULLBACK_DEFAULT_SEED, jobs: int = 1) -> List[PullbackResult]:
    """count случайных обратных орбит с затравками seed, seed+1, ..."""
    jobs_args = [
        (m.family.value, m.gamma, Fraction(x), Fraction(delta), depth, seed + i,
         ctx.bits, ctx.escalation_factor, ctx.max_escalations)
        for i in range(count)
    ]
    return map_parameters(_random_job, jobs_args, jobs)


def parse_policy_word(text: Optional[str]) -> Optional[Tuple[Symbol, ...]]:
    """Слово лап для политики itinerary, например '13'"""
    if not text:
        return None
    word = parse_word(text)
    if any(s.is_critical for s in word):
        raise ValueError(f"Branch word must contain lap symbols only, got {word_text(word)}")
    return word
