"""
Типизированные настройки kneadlab на pydantic-settings.

Значения по умолчанию берутся из config/settings.py, переменные окружения
с префиксом KNEADLAB_ их переопределяют (KNEADLAB_PRECISION, KNEADLAB_SAMPLES и т.п.).
"""

from decimal import Decimal
from fractions import Fraction
from typing import Literal, Optional, Tuple, Type

from pydantic import AliasChoices, Field, field_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from config import settings as defaults


class RateOrderError(ValueError):
    """Нарушен порядок скоростей роста производной"""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        self.detail = detail
        message = f"Rate ordering violated: {condition}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)


class PrecisionSettings(BaseSettings):
    """Настройки точности с валидацией"""
    model_config = SettingsConfigDict(
        env_prefix='KNEADLAB_',
        env_file='.env',
        env_file_encoding='utf-8',
        case_sensitive=False,
        extra='ignore'
    )

    precision_bits: int = Field(
        default=defaults.PRECISION_BITS,
        ge=defaults.PRECISION_MIN_BITS,
        validation_alias=AliasChoices(
            'precision_bits', 'KNEADLAB_PRECISION', 'KNEADLAB_PRECISION_BITS'
        ),
        description="Рабочая точность в битах"
    )
    escalation_factor: int = Field(default=defaults.PRECISION_ESCALATION_FACTOR, ge=2, le=16)
    max_escalations: int = Field(default=defaults.PRECISION_MAX_ESCALATIONS, ge=0, le=16)


class FamilySettings(BaseSettings):
    """Диапазоны параметров обоих семейств"""
    model_config = SettingsConfigDict(env_prefix='KNEADLAB_', extra='ignore')

    cubic_gamma_max: str = defaults.CUBIC_GAMMA_MAX
    deg7_gamma_max: str = defaults.DEG7_GAMMA_MAX

    @field_validator('cubic_gamma_max', 'deg7_gamma_max')
    @classmethod
    def validate_gamma_max(cls, v: str) -> str:
        value = Fraction(v.strip())
        if value <= 0 or value > Fraction(1, 4):
            raise ValueError('Parameter range bound must lie in (0, 1/4]')
        return v.strip()


class RateSettings(BaseSettings):
    """Скорости роста производной для конструкций"""
    model_config = SettingsConfigDict(env_prefix='KNEADLAB_RATE_', extra='ignore')

    lam: Decimal = Field(default=Decimal(defaults.RATE_LAMBDA), gt=1)
    lam_prime: Decimal = Field(default=Decimal(defaults.RATE_LAMBDA_PRIME), gt=1)
    a_lam1: Decimal = Field(default=Decimal(defaults.RATE_A_LAMBDA1), gt=0)
    a_lam2: Decimal = Field(default=Decimal(defaults.RATE_A_LAMBDA2), gt=0)
    dual_lam1: Decimal = Field(default=Decimal(defaults.RATE_DUAL_LAMBDA1), gt=0)
    dual_lam2: Decimal = Field(default=Decimal(defaults.RATE_DUAL_LAMBDA2), gt=0)
    deg7_lam: Decimal = Field(default=Decimal(defaults.RATE_DEG7_LAMBDA), gt=1)
    deg7_lam_prime: Decimal = Field(default=Decimal(defaults.RATE_DEG7_LAMBDA_PRIME), gt=1)

    # Показательная щель двойной конструкции; None — вычислить при старте
    theta1: Optional[Decimal] = None
    theta2: Optional[Decimal] = None
    eta: Optional[Decimal] = None


class SearchSettings(BaseSettings):
    """Выборка и поиск k"""
    model_config = SettingsConfigDict(env_prefix='KNEADLAB_', extra='ignore')

    samples: int = Field(default=defaults.SAMPLE_COUNT, ge=0, le=1000)
    k_floor: int = Field(default=defaults.K_SEARCH_FLOOR, ge=1)
    k_growth: int = Field(default=defaults.K_SEARCH_GROWTH, ge=2)
    k_cap: int = Field(default=defaults.K_SEARCH_CAP, ge=1)
    bootstrap_k0_start: int = Field(default=defaults.BOOTSTRAP_K0_START, ge=1)
    bootstrap_k0_limit: int = Field(default=defaults.BOOTSTRAP_K0_LIMIT, ge=1)
    bootstrap_k_limit: int = Field(default=defaults.BOOTSTRAP_K_LIMIT, ge=1)
    jobs: int = Field(default=defaults.DEFAULT_JOBS, ge=1, le=256)


class LoggingSettings(BaseSettings):
    """Настройки логирования с валидацией"""
    model_config = SettingsConfigDict(env_prefix='KNEADLAB_', extra='ignore')

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    enable_json_logging: bool = defaults.ENABLE_JSON_LOGGING
    json_log_file: str = defaults.JSON_LOG_FILE


class KneadlabSettings(BaseSettings):
    """Главный класс настроек, объединяющий все секции"""
    model_config = SettingsConfigDict(env_prefix='KNEADLAB_', extra='ignore')

    precision: PrecisionSettings = Field(default_factory=PrecisionSettings)
    families: FamilySettings = Field(default_factory=FamilySettings)
    rates: RateSettings = Field(default_factory=RateSettings)
    search: SearchSettings = Field(default_factory=SearchSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)

    output_dir: str = defaults.OUTPUT_DIR

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # Окружение читают только секции
        return (init_settings,)

    def validate_consistency(self, mode: Literal["single", "dual"] = "single") -> None:
        """Проверка порядка скоростей между собой"""
        r = self.rates
        if not (1 < r.lam < r.lam_prime):
            raise RateOrderError("1 < lambda < lambda'", f"lambda={r.lam}, lambda'={r.lam_prime}")
        if not (r.a_lam1 < r.a_lam2 < 1):
            raise RateOrderError("A-step lambda1 < lambda2 < 1",
                                 f"lambda1={r.a_lam1}, lambda2={r.a_lam2}")
        if mode == "dual":
            if not (1 < r.deg7_lam < r.deg7_lam_prime):
                raise RateOrderError("1 < lambda~ < lambda~'",
                                     f"lambda~={r.deg7_lam}, lambda~'={r.deg7_lam_prime}")
            if not (r.dual_lam1 < 1 < r.dual_lam2 <= min(r.lam, r.deg7_lam)):
                raise RateOrderError("dual lambda1 < 1 < lambda2 <= min(lambda, lambda~)",
                                     f"lambda1={r.dual_lam1}, lambda2={r.dual_lam2}")
            if r.theta1 is not None and r.theta2 is not None:
                if not r.theta1 < r.theta2:
                    raise RateOrderError("theta1 < theta2", f"{r.theta1} >= {r.theta2}")
                if r.eta is not None and not (r.theta1 < r.eta < r.theta2):
                    raise RateOrderError("theta1 < eta < theta2", f"eta={r.eta}")
        if self.search.k_floor > self.search.k_cap:
            raise RateOrderError("k_floor <= k_cap")


def load_settings(**overrides) -> KneadlabSettings:
    """Загрузить настройки из окружения и применить явные переопределения"""
    result = KneadlabSettings()
    if overrides.get("precision_bits") is not None:
        result.precision = result.precision.model_copy(
            update={"precision_bits": int(overrides["precision_bits"])}
        )
    if overrides.get("samples") is not None:
        result.search = result.search.model_copy(update={"samples": int(overrides["samples"])})
    if overrides.get("jobs") is not None:
        result.search = result.search.model_copy(update={"jobs": int(overrides["jobs"])})
    return result
