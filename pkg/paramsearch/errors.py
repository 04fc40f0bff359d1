class ParamSearchError(Exception):
    """Базовое исключение пакета paramsearch"""


class OrderViolation(ParamSearchError):
    """Нидинг на концах окна не окружает целевую последовательность"""

    def __init__(self, target: str, lo_order: str, hi_order: str):
        self.target = target
        self.lo_order = lo_order
        self.hi_order = hi_order
        super().__init__(
            f"Window does not bracket {target}: k(lo) is {lo_order}, k(hi) is {hi_order}"
        )


class NotMinimal(ParamSearchError):
    """Целевая последовательность не минимальна"""

    def __init__(self, target: str):
        self.target = target
        super().__init__(f"Target sequence {target} is not minimal")


class BracketLost(ParamSearchError):
    """Не удалось выделить подокно со стабильным префиксом лап"""

    def __init__(self, target: str, width: str, reason: str = ""):
        self.target = target
        self.width = width
        self.reason = reason
        message = f"Bracket for {target} lost at width {width}"
        if reason:
            message += f": {reason}"
        super().__init__(message)


class ParityViolation(ParamSearchError):
    """eps(S') != +1"""

    def __init__(self, word: str, sign: int):
        self.word = word
        self.sign = sign
        super().__init__(f"Sign product of {word} is {sign:+d}, expected +1")


class PrefixNotCertified(ParamSearchError):
    """Выборочная проверка префикса нидинга на интервале не прошла"""

    def __init__(self, prefix: str, lo: str, hi: str):
        self.prefix = prefix
        self.lo = lo
        self.hi = hi
        super().__init__(f"Kneading prefix {prefix} not certified on [{lo}, {hi}]")
