import csv
import math
from fractions import Fraction

import pytest

from construct import Mode
from families import Family
from numerics import parse_real
from symbolic import Symbol
from tests.fixtures import a_mark, b_mark, synthetic_state
from verify import (
    PULLBACK_CSV_HEADER, BranchDead, ce_windows, combinatorial_equiv, dual_rate_contrast,
    endpoint_rate, fit_rate, index_partition, non_ce_witness, parse_policy_word,
    pullback_exhaustive, pullback_shrink, random_pullbacks, recurrence, sample_parameters,
    select_reports, verify_state,
)
from verify.runner import DUAL_REPORTS, SINGLE_REPORTS

# Тестовые константы
LOG9 = math.log(9)
DELTA = Fraction(1, 1000)
GEOMETRIC = [Fraction(1, 9 ** n) for n in range(11)]


class TestIndexPartition:
    """Окна, отметки и промежутки индексов 1..t_final"""

    def test_windows_around_a_mark(self):
        state = synthetic_state(t=(4, 20), marks=(a_mark(2, 10),))
        partition = index_partition(state)
        assert partition.windows == ((1, 9), (20, 20))
        assert partition.marks == (10,)
        assert partition.gaps == ((10, 20),)

    def test_every_index_classified_once(self):
        state = synthetic_state(t=(4, 20), marks=(a_mark(2, 10),))
        partition = index_partition(state)
        kinds = [partition.classify(n) for n in range(1, 21)]
        assert kinds.count("mark") == 1
        assert kinds.count("gap") == 9
        assert kinds.count("window") == 10
        with pytest.raises(ValueError):
            partition.classify(21)

    def test_b_marks_stay_in_windows(self):
        state = synthetic_state(t=(4, 20), marks=(b_mark(2, 10),))
        assert index_partition(state).windows == ((1, 20),)


class TestOrbitChecks:
    """Проверки орбиты c2 при gamma = 0, где d_n = 9^n"""

    def test_ce_windows_pass(self):
        report = ce_windows(synthetic_state(t=(6,)), 0)
        assert report.passed
        assert report.counts["failed"] == 0

    def test_gap_is_unclassified(self):
        state = synthetic_state(t=(4, 20), marks=(a_mark(2, 10),))
        report = ce_windows(state, 0)
        assert report.passed
        assert report.counts["unclassified"] == 1

    def test_gamma_outside_final_interval(self):
        report = ce_windows(synthetic_state(t=(6,)), Fraction(1, 64))
        assert not report.passed
        assert report.failures[0].name == "gamma inside final interval"

    def test_non_ce_witness_fails_at_expanding_parameter(self):
        state = synthetic_state(t=(4, 20), marks=(a_mark(2, 10),))
        report = non_ce_witness(state, 0)
        assert not report.passed
        assert "10" in report.summary["slopes"]

    def test_non_ce_witness_without_marks(self):
        report = non_ce_witness(synthetic_state(t=(6,)), 0)
        assert report.passed
        assert report.checks[0].detail.startswith("vacuous")

    def test_recurrence_with_recorded_delta(self):
        # |g^p(c2) - c2| = |0 - 3/4|
        state = synthetic_state(t=(4, 20), marks=(b_mark(2, 10),), deltas={2: "1"})
        assert recurrence(state, 0).passed

    def test_recurrence_with_default_delta(self):
        state = synthetic_state(t=(4, 20), marks=(b_mark(2, 10),))
        report = recurrence(state, 0)
        assert not report.passed

    def test_recurrence_without_marks(self):
        assert recurrence(synthetic_state(t=(6,)), 0).passed

    def test_combinatorial_equiv_depth_zero(self):
        report = combinatorial_equiv(synthetic_state(t=(6,)), 0, 0, depth=0)
        assert report.passed

    def test_kneading_agrees_at_zero(self):
        report = combinatorial_equiv(synthetic_state(t=(6,)), 0, 0, depth=6, points=4)
        kneading = next(c for c in report.checks if c.name.startswith("kneading prefixes"))
        assert kneading.passed
        assert report.summary["first_difference"] is None

    def test_dual_rate_contrast_single_mode(self):
        assert dual_rate_contrast(synthetic_state(t=(6,))).passed

    def test_dual_rate_contrast_without_marks(self):
        report = dual_rate_contrast(synthetic_state(t=(6,), mode=Mode.DUAL))
        assert report.passed
        assert report.counts["passed"] == len(report.checks)


class TestPullback:
    """Сжатие прообразов"""

    def test_leftmost_rate_at_zero(self, cubic0, ctx):
        result = pullback_shrink(cubic0, 0, DELTA, 40, ctx, policy="leftmost")
        assert result.depth == 40
        assert result.laps == (Symbol.I1,) * 40
        assert abs(result.fitted_rate - LOG9) < 0.05 * LOG9

    def test_zero_radius(self, cubic0, ctx):
        result = pullback_shrink(cubic0, Fraction(1, 3), 0, 5, ctx)
        assert result.diameters == (Fraction(0),) * 6
        assert result.rate is None

    def test_monotone_in_radius(self, cubic0, ctx):
        small = pullback_shrink(cubic0, 0, DELTA, 10, ctx, policy="leftmost")
        large = pullback_shrink(cubic0, 0, 10 * DELTA, 10, ctx, policy="leftmost")
        assert all(a < b for a, b in zip(small.diameters, large.diameters))

    def test_dead_branch(self, cubic_top, ctx):
        # образ I3 при gamma > 0 не содержит 0
        with pytest.raises(BranchDead) as exc:
            pullback_shrink(cubic_top, 0, DELTA, 5, ctx, policy="itinerary",
                            word=parse_policy_word("3"))
        assert exc.value.step == 1

    def test_random_policy_is_reproducible(self, cubic0, ctx):
        x = Fraction(1, 3)
        first = pullback_shrink(cubic0, x, DELTA, 8, ctx, policy="random", seed=3)
        second = pullback_shrink(cubic0, x, DELTA, 8, ctx, policy="random", seed=3)
        assert first == second
        batch = random_pullbacks(cubic0, x, DELTA, 8, 2, ctx, seed=3)
        assert len(batch) == 2
        assert batch[0].laps == first.laps

    def test_exhaustive(self, cubic0, ctx):
        result = pullback_exhaustive(cubic0, Fraction(1, 3), DELTA, 3, ctx)
        assert result.depth == 3
        assert all(d > 0 for d in result.diameters)
        with pytest.raises(ValueError):
            pullback_exhaustive(cubic0, Fraction(1, 3), DELTA, 13, ctx)

    def test_rejects_bad_arguments(self, cubic0, ctx):
        with pytest.raises(ValueError):
            pullback_shrink(cubic0, 0, DELTA, 5, ctx, policy="rightmost")
        with pytest.raises(ValueError):
            pullback_shrink(cubic0, 0, -DELTA, 5, ctx)
        with pytest.raises(ValueError):
            parse_policy_word("1A")
        assert parse_policy_word("") is None

    def test_rates_of_geometric_sequence(self):
        assert abs(endpoint_rate(GEOMETRIC) - LOG9) < 1e-9
        assert abs(fit_rate(GEOMETRIC) - LOG9) < 1e-9
        assert fit_rate(GEOMETRIC[:1]) is None

    def test_csv(self, cubic0, ctx, tmp_path):
        result = pullback_shrink(cubic0, 0, DELTA, 4, ctx, policy="leftmost")
        path = result.write_csv(tmp_path / "pullback.csv")
        with path.open(encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == PULLBACK_CSV_HEADER
        assert len(rows) == 6


class TestRunner:
    """Выбор отчетов и выборка параметров"""

    def test_select_reports(self):
        single = synthetic_state(t=(6,))
        dual = synthetic_state(t=(6,), mode=Mode.DUAL)
        assert select_reports(single, None) == SINGLE_REPORTS
        assert select_reports(dual, None) == DUAL_REPORTS
        assert select_reports(single, "ce_windows, recurrence") == ("ce_windows", "recurrence")
        with pytest.raises(ValueError):
            select_reports(single, "everything")

    def test_sample_parameters(self):
        state = synthetic_state(t=(6,))
        assert sample_parameters(state, Family.CUBIC) == (Fraction(1, 256),)
        points = sample_parameters(state, Family.CUBIC, 4)
        assert len(points) == 4
        assert points[0] == 0 and points[-1] == Fraction(1, 128)
        assert all(g.denominator & (g.denominator - 1) == 0 for g in points)

    def test_verify_state_on_sampled_parameters(self):
        state = synthetic_state(t=(4, 9))
        points = sample_parameters(state, Family.CUBIC, 4)
        reports = verify_state(state, samples=4)
        assert len(reports) == len(SINGLE_REPORTS) * len(points)
        for report in reports:
            assert isinstance(report.passed, bool)
            assert all(c.status in ("PASS", "FAIL", "----") for c in report.checks)
            assert parse_real(report.parameters["gamma"]) in points

    def test_report_at_non_dyadic_parameter(self):
        gamma = Fraction(1, 768)
        state = synthetic_state(t=(4, 20), marks=(b_mark(2, 10),), deltas={2: "1"})
        for report in (recurrence(state, gamma), ce_windows(state, gamma),
                       non_ce_witness(state, gamma)):
            assert report.parameters["gamma"] == "1/768"
            assert parse_real(report.parameters["gamma"]) == gamma
        combined = combinatorial_equiv(state, gamma, Fraction(1, 3), depth=0)
        assert combined.parameters["gamma_prime"] == "1/3"

    def test_verify_state_at_zero(self):
        reports = verify_state(synthetic_state(t=(6,)), gammas=[Fraction(0)])
        assert [r.name for r in reports] == list(SINGLE_REPORTS)
        assert all(r.passed for r in reports)
