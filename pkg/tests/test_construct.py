import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from config.typed_settings import RateOrderError, load_settings
from construct import (
    Mode, ParseError, PMark, SchemaVersionMismatch, StepContext, StepFailed, StepRecord,
    StepType, dumps_state, empty_state, families_of, family_rate_key, load_state,
    parse_schedule, return_target, run, save_state, delta_for,
)
from construct.bootstrap import (
    DUAL_RATE_NAMES, RATE_NAMES, check_rates_at_zero, initial_rates,
)
from construct.steps import (
    CandidateRejected, a_head, a_step_times, b_head, b_k1, choose_k2, dual_a_k2, odd_k2_values,
    width_bound,
)
from families import Family
from symbolic import Symbol, parse_word, word_text
from tests.fixtures import SINGLE_RATES, a_mark, b_mark, interval, synthetic_state

# Тестовые константы
SLOW_SAMPLES = 2


class TestSchedule:
    """Расписание шагов и последовательность Delta"""

    def test_parse_string_and_list(self):
        assert parse_schedule("ABAB") == (StepType.A, StepType.B, StepType.A, StepType.B)
        assert parse_schedule(["a", " B ", ""]) == (StepType.A, StepType.B)
        assert parse_schedule("") == ()

    def test_rejects_unknown_step(self):
        with pytest.raises(ValueError):
            parse_schedule("AC")
        with pytest.raises(ValueError):
            parse_schedule("S")

    def test_delta_halves(self):
        assert delta_for(1) == Fraction(1, 2)
        assert delta_for(3) == Fraction(1, 8)

    def test_width_bound(self):
        assert width_bound(1) == Fraction(1, 2)
        assert width_bound(10) == Fraction(1, 1024)


class TestStepArithmetic:
    """Выбор k и слова шагов без поиска параметров"""

    def test_a_step_times(self):
        assert a_step_times(6, 8, Fraction(1, 3)) == (15, 10)
        assert a_step_times(6, 8, Fraction(3, 10)) == (15, 9)

    def test_a_step_k2_at_least_one(self):
        assert a_step_times(1, 1, Fraction(1, 100)) == (3, 1)

    def test_dual_a_k2(self):
        assert dual_a_k2(9, Fraction(3, 2)) == 6
        assert dual_a_k2(16, Fraction(6, 5)) == 13
        assert dual_a_k2(1, Fraction(10)) == 1

    def test_a_head_marks_last_i2(self):
        prefix = parse_word("11")
        p, k2 = a_step_times(len(prefix), 2, Fraction(1, 10))
        head = a_head(prefix, 2, k2)
        assert head == parse_word("11222") + (Symbol.I3,) * k2
        assert head[p - 1] is Symbol.I2
        assert head[p] is Symbol.I3

    def test_b_k1_is_odd(self):
        assert b_k1(8) == 9
        assert b_k1(9) == 9

    @pytest.mark.parametrize("t_n, k1, expected", [
        (4, 11, [5, 7, 9]),
        (5, 11, [7, 9]),
        (6, 9, [7]),
        (5, 8, []),
    ])
    def test_odd_k2_values(self, t_n, k1, expected):
        assert list(odd_k2_values(t_n, k1)) == expected

    @pytest.mark.parametrize("k1, k2", [(5, 3), (7, 1), (9, 5)])
    def test_b_head_reads_return_target_at_p(self, k1, k2):
        prefix = parse_word("11")
        p = len(prefix) + k1
        head = b_head(prefix, k1, k2)
        target = return_target(prefix, k2)
        assert word_text(head[p - 1:]) + "B" == str(target)

    def test_choose_k2_takes_smallest_odd(self, ctx):
        k2, constants = choose_k2((), parse_word("1111"), 4, 11, Fraction(1, 2), ctx)
        assert k2 == 5
        assert constants == {}

    def test_choose_k2_without_room(self, ctx):
        with pytest.raises(CandidateRejected) as exc:
            choose_k2((), parse_word("11111"), 5, 8, Fraction(1, 2), ctx)
        assert exc.value.part == "head"
        assert exc.value.reason == "delta"


class TestStepContext:
    """Перебор k"""

    def test_candidates_grow_geometrically(self):
        sctx = StepContext(k_floor=8, k_cap=40)
        assert list(sctx.k_candidates(8)) == [8, 16, 32]
        assert list(sctx.k_candidates(0))[:3] == [1, 2, 4]

    def test_from_settings(self):
        settings = load_settings(precision_bits=512, samples=3, jobs=2)
        sctx = StepContext.from_settings(settings)
        assert sctx.precision.bits == 512
        assert sctx.samples == 3
        assert sctx.jobs == 2


class TestRates:
    """Скорости и их порядок"""

    def test_initial_rates_single(self):
        rates = initial_rates(load_settings(), Mode.SINGLE)
        assert set(rates) == set(RATE_NAMES)

    def test_initial_rates_dual(self):
        rates = initial_rates(load_settings(), Mode.DUAL)
        assert set(RATE_NAMES + DUAL_RATE_NAMES) <= set(rates)

    def test_family_rate_keys(self):
        assert family_rate_key(Family.CUBIC, "lam") == "lam"
        assert family_rate_key(Family.DEG7, "lam_prime") == "deg7_lam_prime"
        assert family_rate_key(Family.DEG7, "a_lam1") == "a_lam1"
        assert families_of(Mode.DUAL) == (Family.CUBIC, Family.DEG7)

    def test_rates_at_zero_pass(self, ctx):
        check_rates_at_zero(Mode.SINGLE, dict(SINGLE_RATES), ctx)

    def test_lambda_prime_above_fixed_point_multiplier(self, ctx):
        # |g_0'(r)| = 3
        rates = dict(SINGLE_RATES, lam_prime="10")
        with pytest.raises(RateOrderError):
            check_rates_at_zero(Mode.SINGLE, rates, ctx)


class TestState:
    """Переходы между этапами и их инварианты"""

    def test_accessors(self):
        state = synthetic_state(t=(4, 9), marks=(a_mark(2, 6),))
        assert state.stage == 2
        assert state.final_t == 9
        assert state.t_at(0) == 0
        assert state.t_at(1) == 4
        assert state.marks(StepType.A) == [a_mark(2, 6)]
        assert state.marks(StepType.B) == []
        assert state.rate("lam") == Fraction(6, 5)
        with pytest.raises(KeyError):
            state.rate("missing")

    def test_empty_state(self):
        state = empty_state(Mode.SINGLE, 256, dict(SINGLE_RATES))
        assert state.stage == 0
        with pytest.raises(IndexError):
            state.current

    def test_mark_validation(self):
        with pytest.raises(ValidationError):
            PMark(n=2, p=3, type=StepType.BOOTSTRAP)
        with pytest.raises(ValidationError):
            PMark(n=1, p=3, type=StepType.A)

    def test_valid_extension(self):
        state = synthetic_state(t=(6,))
        prefix = state.prefix + (Symbol.I2,) * 3
        nested = interval(Family.CUBIC, Fraction(1, 2 ** 10), Fraction(1, 2 ** 8), prefix)
        record = StepRecord.create(stage=2, step_type=StepType.A, t=9, p=7)
        new = state.extend(prefix, nested, record, mark=a_mark(2, 7))
        assert new.stage == 2
        assert new.t == (6, 9)
        assert new.prefix_text == "111111222"
        assert state.stage == 1

    def test_prefix_must_grow(self):
        state = synthetic_state(t=(6,))
        nested = interval(Family.CUBIC, Fraction(1, 2 ** 10), Fraction(1, 2 ** 8))
        record = StepRecord.create(stage=2, step_type=StepType.A, t=6)
        with pytest.raises(StepFailed) as exc:
            state.extend(state.prefix, nested, record)
        assert exc.value.reason == "invariant"

    def test_interval_must_nest(self):
        state = synthetic_state(t=(6,))
        prefix = state.prefix + (Symbol.I2,)
        wide = interval(Family.CUBIC, 0, Fraction(1, 64), prefix)
        record = StepRecord.create(stage=2, step_type=StepType.A, t=7)
        with pytest.raises(StepFailed):
            state.extend(prefix, wide, record)

    def test_prefix_must_stay_minimal(self):
        state = synthetic_state(t=(6,))
        prefix = state.prefix + parse_word("21111111")
        nested = interval(Family.CUBIC, Fraction(1, 2 ** 10), Fraction(1, 2 ** 8), prefix)
        record = StepRecord.create(stage=2, step_type=StepType.A, t=14)
        with pytest.raises(StepFailed):
            state.extend(prefix, nested, record)

    def test_marked_time_inside_new_block(self):
        state = synthetic_state(t=(6,))
        prefix = state.prefix + (Symbol.I2,) * 3
        nested = interval(Family.CUBIC, Fraction(1, 2 ** 10), Fraction(1, 2 ** 8), prefix)
        record = StepRecord.create(stage=2, step_type=StepType.B, t=9, p=9)
        with pytest.raises(StepFailed):
            state.extend(prefix, nested, record, mark=b_mark(2, 9))

    def test_dual_extension_needs_both_intervals(self):
        state = synthetic_state(t=(6,), mode=Mode.DUAL)
        prefix = state.prefix + (Symbol.I2,) * 3
        nested = interval(Family.CUBIC, Fraction(1, 2 ** 10), Fraction(1, 2 ** 8), prefix)
        record = StepRecord.create(stage=2, step_type=StepType.A, t=9, p=7)
        with pytest.raises(StepFailed):
            state.extend(prefix, nested, record, mark=a_mark(2, 7))

    def test_return_target(self):
        assert str(return_target(parse_word("11"), 1)) == "211223B"


class TestStore:
    """JSON-файл состояния"""

    def test_save_load_save_is_identical(self, tmp_path):
        state = synthetic_state(t=(4, 9, 15), marks=(a_mark(2, 6), b_mark(3, 11)),
                                deltas={3: "0.5"})
        first = save_state(state, tmp_path / "state.json").read_text(encoding="utf-8")
        loaded = load_state(tmp_path / "state.json")
        assert loaded == state
        assert dumps_state(loaded) == first

    def test_dual_state_round_trip(self, tmp_path):
        state = synthetic_state(t=(4, 9), marks=(a_mark(2, 6),), mode=Mode.DUAL)
        path = save_state(state, tmp_path / "dual.json")
        assert load_state(path).dual_intervals == state.dual_intervals

    def test_unknown_version(self, tmp_path):
        data = json.loads(dumps_state(synthetic_state()))
        data["version"] = 999
        path = tmp_path / "future.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        with pytest.raises(SchemaVersionMismatch) as exc:
            load_state(path)
        assert exc.value.found == 999

    @pytest.mark.parametrize("content", ["not json", "[1, 2]"])
    def test_garbage(self, tmp_path, content):
        path = tmp_path / "broken.json"
        path.write_text(content, encoding="utf-8")
        with pytest.raises(ParseError):
            load_state(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_state(tmp_path / "absent.json")


def _assert_construction_invariants(state):
    assert list(state.t) == sorted(set(state.t))
    for n, current in enumerate(state.intervals, start=1):
        assert current.width < width_bound(n)
    for outer, inner in zip(state.intervals, state.intervals[1:]):
        assert inner.strictly_inside(outer)
    for mark in state.p_marks:
        assert state.t_at(mark.n - 1) < mark.p < state.t_at(mark.n)


@pytest.mark.slow
class TestRun:
    """Полный прогон конструкции"""

    def test_single_schedule(self, tmp_path):
        settings = load_settings(samples=SLOW_SAMPLES)
        path = tmp_path / "single.json"
        state = run(Mode.SINGLE, "ABAB", settings, state_path=path)
        assert state.stage == 5
        assert len(state.marks(StepType.A)) == 2
        assert len(state.marks(StepType.B)) == 2
        _assert_construction_invariants(state)
        assert load_state(path) == state

    def test_continue_from_saved_state(self, tmp_path):
        settings = load_settings(samples=SLOW_SAMPLES)
        first = run(Mode.SINGLE, "A", settings)
        second = run(Mode.SINGLE, "B", settings, initial=first)
        assert second.stage == first.stage + 1
        assert second.intervals[:first.stage] == first.intervals

    def test_dual_schedule(self):
        settings = load_settings(samples=SLOW_SAMPLES)
        state = run(Mode.DUAL, "AB", settings)
        assert state.stage == 3
        assert len(state.dual_intervals) == 3
        for cubic, deg7 in zip(state.intervals, state.dual_intervals):
            assert cubic.certified_prefix == deg7.certified_prefix
        _assert_construction_invariants(state)
