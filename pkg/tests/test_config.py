from decimal import Decimal

import pytest
from pydantic import ValidationError

from config.typed_settings import (
    FamilySettings, KneadlabSettings, PrecisionSettings, RateOrderError, RateSettings,
    load_settings,
)


class TestLoadSettings:
    """Окружение и явные переопределения"""

    def test_environment_override(self, monkeypatch):
        monkeypatch.delenv("KNEADLAB_PRECISION", raising=False)
        monkeypatch.setenv("KNEADLAB_PRECISION_BITS", "512")
        monkeypatch.setenv("KNEADLAB_RATE_LAM", "1.3")
        settings = load_settings()
        assert settings.precision.precision_bits == 512
        assert settings.rates.lam == Decimal("1.3")

    def test_precision_variable(self, monkeypatch):
        monkeypatch.delenv("KNEADLAB_PRECISION_BITS", raising=False)
        monkeypatch.setenv("KNEADLAB_PRECISION", "768")
        settings = load_settings()
        assert settings.precision.precision_bits == 768
        assert settings.precision.escalation_factor == 2

    def test_precision_variable_below_minimum(self, monkeypatch):
        monkeypatch.setenv("KNEADLAB_PRECISION", "8")
        with pytest.raises(ValidationError):
            load_settings()

    def test_explicit_overrides_win(self, monkeypatch):
        monkeypatch.setenv("KNEADLAB_SAMPLES", "4")
        settings = load_settings(samples=2, jobs=3)
        assert settings.search.samples == 2
        assert settings.search.jobs == 3

    def test_rejects_low_precision(self):
        with pytest.raises(ValidationError):
            PrecisionSettings(precision_bits=8)

    def test_rejects_wide_parameter_range(self):
        with pytest.raises(ValidationError):
            FamilySettings(cubic_gamma_max="1/2")


class TestConsistency:
    """Порядок скоростей"""

    def test_defaults_are_consistent(self):
        settings = KneadlabSettings()
        settings.validate_consistency("single")
        settings.validate_consistency("dual")

    def test_lambda_above_lambda_prime(self):
        settings = KneadlabSettings(rates=RateSettings(lam=Decimal("3")))
        with pytest.raises(RateOrderError) as exc:
            settings.validate_consistency()
        assert exc.value.condition == "1 < lambda < lambda'"

    def test_a_step_rates(self):
        settings = KneadlabSettings(rates=RateSettings(a_lam1=Decimal("0.9"),
                                                       a_lam2=Decimal("0.5")))
        with pytest.raises(RateOrderError):
            settings.validate_consistency()

    def test_gap_ordering_in_dual_mode(self):
        settings = KneadlabSettings(rates=RateSettings(theta1=Decimal("1.3"),
                                                       theta2=Decimal("1.1")))
        settings.validate_consistency("single")
        with pytest.raises(RateOrderError):
            settings.validate_consistency("dual")
