from fractions import Fraction
from typing import Optional


class NumericsError(Exception):
    """Базовое исключение пакета numerics"""


class SignUndecidable(NumericsError):
    """Знак величины не удалось сертифицировать даже после эскалации точности"""

    def __init__(self, what: str, bits: int, point: Optional[Fraction] = None):
        self.what = what
        self.bits = bits
        self.point = point
        message = f"Sign of {what} undecidable at {bits} bits"
        if point is not None:
            message += f" (at x={float(point):.6g})"
        super().__init__(message)


class NoSignChange(NumericsError):
    """Функция имеет один и тот же сертифицированный знак на концах отрезка"""

    def __init__(self, lo: Fraction, hi: Fraction, sign: str):
        self.lo = lo
        self.hi = hi
        self.sign = sign
        super().__init__(
            f"No sign change on [{float(lo):.6g}, {float(hi):.6g}]: both ends {sign}"
        )


class PrecisionExhausted(NumericsError):
    """Достигнут предел эскалаций точности"""

    def __init__(self, bits: int, escalations: int):
        self.bits = bits
        self.escalations = escalations
        super().__init__(
            f"Precision exhausted: {bits} bits after {escalations} escalations"
        )


class UncertainDivisor(NumericsError):
    """Делитель не отделен от нуля с учетом погрешности"""

    def __init__(self, value: str, err: str):
        self.value = value
        self.err = err
        super().__init__(f"Divisor not certified nonzero: {value} +/- {err}")


class CodecError(NumericsError):
    """Ошибка разбора или печати десятичного представления"""
