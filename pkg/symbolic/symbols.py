from enum import Enum
from typing import Optional


class SymbolicError(Exception):
    """Базовое исключение пакета symbolic"""


class SequenceParseError(SymbolicError, ValueError):
    """Текст не является записью последовательности"""

    def __init__(self, text: str, reason: str):
        self.text = text
        self.reason = reason
        super().__init__(f"Cannot parse sequence {text!r}: {reason}")


class ShiftOfCritical(SymbolicError):
    """Сдвиг последовательности из одного критического символа"""

    def __init__(self, symbol: 'Symbol'):
        self.symbol = symbol
        super().__init__(f"Cannot shift single critical symbol {symbol.value}")


# Порядок на алфавите по положению на отрезке: I1 < c1 < I2 < c2 < I3
_RANK = {"1": 0, "A": 1, "2": 2, "B": 3, "3": 4}
_SIGN = {"1": 1, "A": 0, "2": -1, "B": 0, "3": 1}


class Symbol(str, Enum):
    """Символ маршрута: лапа I_j или критическая точка c_j"""
    I1 = "1"
    C1 = "A"
    I2 = "2"
    C2 = "B"
    I3 = "3"

    @property
    def rank(self) -> int:
        return _RANK[self.value]

    @property
    def sign(self) -> int:
        """eps(I_j) = (-1)^(j+1), eps(c_j) = 0"""
        return _SIGN[self.value]

    @property
    def is_critical(self) -> bool:
        return self in (Symbol.C1, Symbol.C2)

    @property
    def index(self) -> int:
        """Номер лапы или критической точки: 1, 2, 3"""
        return {"1": 1, "A": 1, "2": 2, "B": 2, "3": 3}[self.value]

    @classmethod
    def lap(cls, j: int) -> 'Symbol':
        return {1: cls.I1, 2: cls.I2, 3: cls.I3}[j]

    @classmethod
    def critical(cls, j: int) -> 'Symbol':
        return {1: cls.C1, 2: cls.C2}[j]

    @classmethod
    def parse(cls, char: str) -> Optional['Symbol']:
        try:
            return cls(char)
        except ValueError:
            return None

    def __str__(self) -> str:
        return self.value


LAPS = (Symbol.I1, Symbol.I2, Symbol.I3)
CRITICALS = (Symbol.C1, Symbol.C2)
