"""
Командная строка kneadlab: подкоманды itinerary, kneading, realize-point,
realize-param, construct, verify, pullback.
Коды выхода: 0 — успех, 1 — проверка или шаг не прошли, 2 — ошибка ввода.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import mpmath

from config.logging import get_logger, setup_logging
from config.settings import (
    PULLBACK_DEFAULT_DELTA, PULLBACK_DEFAULT_POLICY, PULLBACK_DEFAULT_SEED, REPORT_DIGITS,
    STATE_JSON_INDENT,
)
from config.typed_settings import KneadlabSettings, RateOrderError, load_settings
from construct import ConstructionError, StateStoreError, StepContext, load_state, run
from families import Family, FamilyError, make_map
from models.reports import VerificationReport, value_text
from numerics import CodecError, PrecisionContext, fraction_to_decimal, parse_real
from orbits import OrbitError, itinerary, kneading2, realize_bracket
from paramsearch import NotMinimal, ParamInterval, ParamSearchError, find_param_bracket
from symbolic import ItinerarySeq, SymbolicError, word_text
from verify import (
    POLICIES, BranchDead, parse_policy_word, pullback_shrink, random_pullbacks, verify_state,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# Ошибки разбора и диапазонов — неверный ввод, а не провал проверки
INPUT_ERRORS = (CodecError, SymbolicError, FamilyError, StateStoreError, RateOrderError,
                NotMinimal, ValueError)
FAILURE_ERRORS = (ConstructionError, ParamSearchError, OrbitError, BranchDead)


# ======================================
# Разбор аргументов
# ======================================

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None,
                        help="Working precision in bits (default: KNEADLAB_PRECISION or 256)")
    common.add_argument("--jobs", type=int, default=None, help="Worker processes for sampling")
    common.add_argument("--log-level", dest="log_level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return common


def _map_args(p: argparse.ArgumentParser, gamma: bool = True) -> None:
    p.add_argument("--family", choices=[f.value for f in Family], default=Family.CUBIC.value)
    if gamma:
        p.add_argument("--gamma", type=str, default="0", help="Parameter, e.g. 0, 1/64, 0.01")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="kneadlab",
        description="Kneading theory toolkit for the cubic and degree-7 bimodal families",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("itinerary", parents=[common], help="Itinerary of a point")
    _map_args(p)
    p.add_argument("--x", type=str, required=True)
    p.add_argument("--depth", type=int, default=20)
    p.set_defaults(handler=cmd_itinerary)

    p = sub.add_parser("kneading", parents=[common], help="Kneading sequence of c2")
    _map_args(p)
    p.add_argument("--depth", type=int, default=20)
    p.set_defaults(handler=cmd_kneading)

    p = sub.add_parser("realize-point", parents=[common], help="Point with a given itinerary")
    _map_args(p)
    p.add_argument("--target", type=str, required=True, help="Itinerary, e.g. 12A or 2^inf")
    p.set_defaults(handler=cmd_realize_point)

    p = sub.add_parser("realize-param", parents=[common], help="Parameter with a given kneading")
    _map_args(p, gamma=False)
    p.add_argument("--target", type=str, required=True, help="Finite kneading, e.g. 111A")
    p.add_argument("--window", type=str, default=None, help="Search window lo,hi")
    p.set_defaults(handler=cmd_realize_param)

    p = sub.add_parser("construct", parents=[common], help="Run a parameter construction")
    p.add_argument("--mode", choices=["single", "dual"], default="single")
    p.add_argument("--schedule", type=str, default="AB", help="Steps, e.g. ABAB")
    p.add_argument("--state", type=str, default=None, help="Continue from this state file")
    p.add_argument("--out", type=str, default=None, help="State file to write")
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="Verify a saved construction")
    p.add_argument("--state", type=str, required=True)
    p.add_argument("--report", type=str, default=None, help="Comma-separated report names")
    p.add_argument("--samples", type=int, default=None, help="Parameters per interval")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--gamma", type=str, default=None, help="Verify at this parameter only")
    p.add_argument("--out", type=str, default=None, help="Report JSON file")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("pullback", parents=[common], help="Backward shrinking experiment")
    _map_args(p)
    p.add_argument("--x", type=str, default="0")
    p.add_argument("--delta", type=str, default=PULLBACK_DEFAULT_DELTA)
    p.add_argument("--depth", type=int, default=100)
    p.add_argument("--policy", choices=POLICIES, default=PULLBACK_DEFAULT_POLICY)
    p.add_argument("--word", type=str, default=None, help="Lap word for itinerary policy")
    p.add_argument("--seed", type=int, default=PULLBACK_DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=1, help="Random backward orbits")
    p.add_argument("--out", type=str, default=None, help="CSV file n,diam_n")
    p.set_defaults(handler=cmd_pullback)
    return parser


# ======================================
# Общие части
# ======================================

def _settings(args: argparse.Namespace) -> KneadlabSettings:
    return load_settings(precision_bits=args.precision, jobs=args.jobs,
                         samples=getattr(args, "samples", None))


def _context(settings: KneadlabSettings) -> PrecisionContext:
    return StepContext.from_settings(settings).precision


def _map(args: argparse.Namespace):
    return make_map(args.family, parse_real(args.gamma))


def _depth(value: int) -> int:
    if value < 0:
        raise ValueError(f"Depth must be non-negative, got {value}")
    return value


def _window(family: Family, text: Optional[str]) -> ParamInterval:
    if not text:
        return ParamInterval.full(family)
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"Window must be 'lo,hi', got {text!r}")
    lo, hi = (parse_real(p) for p in parts)
    if not lo < hi:
        raise ValueError(f"Window must satisfy lo < hi, got {text!r}")
    return ParamInterval(family=family, lo=lo, hi=hi)


def _decimal(fr) -> str:
    """Точная десятичная запись или REPORT_DIGITS значащих цифр"""
    try:
        return fraction_to_decimal(fr)
    except CodecError:
        return mpmath.nstr(mpmath.fdiv(fr.numerator, fr.denominator, prec=256), REPORT_DIGITS)


def _print_sequence(seq: ItinerarySeq, depth: int) -> None:
    print(f"sequence: {seq}")
    print(f"prefix: {word_text(seq.symbols(depth))}")


# ======================================
# Подкоманды
# ======================================

def cmd_itinerary(args: argparse.Namespace) -> int:
    settings = _settings(args)
    m = _map(args)
    depth = _depth(args.depth)
    ctx = _context(settings).for_depth(depth, m.log2_expansion(_context(settings)))
    _print_sequence(itinerary(m, parse_real(args.x), depth, ctx), depth)
    return EXIT_OK


def cmd_kneading(args: argparse.Namespace) -> int:
    settings = _settings(args)
    m = _map(args)
    depth = _depth(args.depth)
    ctx = _context(settings).for_depth(depth, m.log2_expansion(_context(settings)))
    _print_sequence(kneading2(m, depth, ctx), depth)
    return EXIT_OK


def cmd_realize_point(args: argparse.Namespace) -> int:
    settings = _settings(args)
    m = _map(args)
    target = ItinerarySeq.parse(args.target)
    bracket = realize_bracket(m, target, _context(settings))
    print(f"x: {value_text(bracket.as_bigreal(_context(settings).bits))}")
    print(f"bracket: [{_decimal(bracket.lo)}, {_decimal(bracket.hi)}]")
    return EXIT_OK


def cmd_realize_param(args: argparse.Namespace) -> int:
    settings = _settings(args)
    family = Family(args.family)
    target = ItinerarySeq.parse(args.target)
    ctx = _context(settings)
    bracket = find_param_bracket(family, target, _window(family, args.window), ctx)
    print(f"gamma: {value_text(bracket.as_bigreal(ctx.bits))}")
    print(f"bracket: [{_decimal(bracket.lo)}, {_decimal(bracket.hi)}]")
    return EXIT_OK


def cmd_construct(args: argparse.Namespace) -> int:
    settings = _settings(args)
    initial = load_state(args.state) if args.state else None
    out = args.out or args.state or str(Path(settings.output_dir) / f"{args.mode}_state.json")
    try:
        state = run(args.mode, args.schedule, settings, state_path=out, initial=initial)
    except ConstructionError as e:
        print(f"construction failed: {e}")
        print(f"state: {out}")
        return EXIT_FAILED
    print(f"stage: {state.stage}")
    print(f"t: {', '.join(str(t) for t in state.t)}")
    print(f"prefix: {state.prefix_text}")
    print(f"interval: {state.current}")
    if state.is_dual:
        print(f"dual interval: {state.dual_current}")
    print(f"state: {out}")
    return EXIT_OK


def _write_reports(reports: List[VerificationReport], path: str) -> None:
    data = {"passed": all(r.passed for r in reports), "reports": [r.to_dict() for r in reports]}
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(data, indent=STATE_JSON_INDENT, ensure_ascii=False) + "\n",
                      encoding="utf-8")
    logger.info(f"Verification reports written to {target}")


def cmd_verify(args: argparse.Namespace) -> int:
    settings = _settings(args)
    state = load_state(args.state)
    bits = args.precision or state.precision_bits
    ctx = _context(settings).with_bits(bits)
    gammas = [parse_real(args.gamma)] if args.gamma else None
    reports = verify_state(state, args.report, samples=args.samples, ctx=ctx,
                           jobs=settings.search.jobs, depth=args.depth, gammas=gammas)
    for report in reports:
        print(report.table())
    if args.out:
        _write_reports(reports, args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_pullback(args: argparse.Namespace) -> int:
    settings = _settings(args)
    m = _map(args)
    ctx = _context(settings)
    x, delta = parse_real(args.x), parse_real(args.delta)
    depth = _depth(args.depth)
    if args.policy == "random" and args.samples > 1:
        results = random_pullbacks(m, x, delta, depth, args.samples, ctx, seed=args.seed,
                                   jobs=settings.search.jobs)
    else:
        results = [pullback_shrink(m, x, delta, depth, ctx, policy=args.policy,
                                   word=parse_policy_word(args.word), seed=args.seed)]
    for i, result in enumerate(results):
        print(f"orbit {i}: laps={word_text(result.laps) or '-'} rate={result.rate} "
              f"fitted={result.fitted_rate}")
    if args.out:
        results[0].write_csv(args.out)
    fitted = [r.fitted_rate for r in results if r.fitted_rate is not None]
    if fitted:
        print(f"min fitted rate: {min(fitted):.12g}")
    return EXIT_OK


# ======================================
# Точка входа
# ======================================

def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    setup_logging(level=args.log_level)

    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except INPUT_ERRORS as e:
        print(f"kneadlab {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except FAILURE_ERRORS as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"kneadlab {args.command}: failed: {e}", file=sys.stderr)
        return EXIT_FAILED

