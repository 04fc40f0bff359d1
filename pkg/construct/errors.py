class ConstructionError(Exception):
    """Базовое исключение пакета construct"""


class BootstrapFailed(ConstructionError):
    """Перебор k0 и k исчерпан, проверки первого этапа не прошли"""

    def __init__(self, k0_limit: int, k_limit: int, last_reason: str = ""):
        self.k0_limit = k0_limit
        self.k_limit = k_limit
        self.last_reason = last_reason
        message = f"Bootstrap failed: k0 <= {k0_limit}, k <= {k_limit} exhausted"
        if last_reason:
            message += f" (last failure: {last_reason})"
        super().__init__(message)


class StepFailed(ConstructionError):
    """Шаг конструкции не прошел выборочные проверки"""

    REASONS = ("prefix", "d-lower", "d-upper", "width", "delta", "precision", "k-cap", "invariant")

    def __init__(self, reason: str, step_type: str, detail: str = ""):
        self.reason = reason
        self.step_type = step_type
        self.detail = detail
        message = f"Step {step_type} failed ({reason})"
        if detail:
            message += f": {detail}"
        super().__init__(message)


class StateStoreError(Exception):
    """Базовое исключение хранения состояния конструкции"""


class SchemaVersionMismatch(StateStoreError):
    """Версия файла состояния не поддерживается"""

    def __init__(self, found, expected: int):
        self.found = found
        self.expected = expected
        super().__init__(f"State schema version {found} does not match expected {expected}")


class ParseError(StateStoreError):
    """Файл состояния поврежден или не соответствует схеме"""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"Cannot parse state file {path}: {reason}")
