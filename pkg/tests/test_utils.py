import pytest

from numerics import PrecisionContext
from numerics.errors import SignUndecidable
from utils import map_parameters, measure_latency, run_with_escalation

# Тестовые константы
REQUIRED_BITS = 1024


def needs_bits(ctx):
    if ctx.bits < REQUIRED_BITS:
        raise SignUndecidable("probe", ctx.bits)
    return ctx.bits


class TestEscalation:
    """Повтор вычисления на растущей точности"""

    def test_escalates_until_success(self):
        result, used = run_with_escalation(needs_bits, PrecisionContext(bits=256),
                                           SignUndecidable, what="probe")
        assert result == REQUIRED_BITS
        assert used.escalations == 2

    def test_no_retry_when_first_attempt_succeeds(self):
        ctx = PrecisionContext(bits=REQUIRED_BITS)
        result, used = run_with_escalation(needs_bits, ctx, SignUndecidable)
        assert used == ctx

    def test_exhausted(self):
        ctx = PrecisionContext(bits=256, max_escalations=1)
        with pytest.raises(SignUndecidable):
            run_with_escalation(needs_bits, ctx, SignUndecidable)

    def test_other_errors_pass_through(self):
        def broken(ctx):
            raise KeyError("x")

        with pytest.raises(KeyError):
            run_with_escalation(broken, PrecisionContext(), SignUndecidable)


class TestMapParameters:
    """Упорядоченный map по параметрам"""

    def test_sequential(self):
        assert map_parameters(abs, [-3, 2, -1]) == [3, 2, 1]

    def test_process_pool_keeps_order(self):
        items = list(range(-6, 0))
        assert map_parameters(abs, items, jobs=3) == [6, 5, 4, 3, 2, 1]

    def test_empty(self):
        assert map_parameters(abs, [], jobs=4) == []


class TestMeasureLatency:
    """Декоратор длительности"""

    def test_returns_result(self):
        @measure_latency
        def square(x):
            return x * x

        assert square(7) == 49
        assert square.__name__ == "square"

    def test_reraises(self):
        @measure_latency
        def fail(ctx):
            raise ValueError("bad")

        with pytest.raises(ValueError):
            fail(PrecisionContext())
