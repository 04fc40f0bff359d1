"""
ItinerarySeq: конечная последовательность с критическим символом в конце,
последовательность с постоянным хвостом s^inf или открытый (усеченный) префикс.

Текстовая запись: "112A" = I1 I1 I2 c1, "112^inf" = I1 I1 I2^inf,
"1111" = открытый префикс I1^4 без известного продолжения.
"""

from typing import Any, Iterable, Iterator, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from symbolic.symbols import Symbol, SequenceParseError

TAIL_MARK = "^inf"


def _as_symbol(value: Any) -> Symbol:
    if isinstance(value, Symbol):
        return value
    return Symbol(value)


class ItinerarySeq(BaseModel):
    """Элемент пространства последовательностей"""
    model_config = ConfigDict(frozen=True)

    head: Tuple[Symbol, ...] = ()
    tail: Optional[Symbol] = None
    open: bool = False

    @model_validator(mode='before')
    @classmethod
    def canonicalize(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        head = [_as_symbol(s) for s in data.get('head', ())]
        tail = data.get('tail')
        if tail is not None:
            tail = _as_symbol(tail)
            while head and head[-1] is tail:
                head.pop()
        data['head'] = tuple(head)
        data['tail'] = tail
        return data

    @model_validator(mode='after')
    def check_shape(self) -> 'ItinerarySeq':
        if self.tail is not None:
            if self.open:
                raise ValueError('Open prefix cannot have a constant tail')
            if self.tail.is_critical:
                raise ValueError('Constant tail must be a lap symbol')
            if any(s.is_critical for s in self.head):
                raise ValueError('Infinite sequence cannot contain a critical symbol')
        elif self.open:
            if any(s.is_critical for s in self.head):
                raise ValueError('Open prefix cannot contain a critical symbol')
        else:
            if not self.head:
                raise ValueError('Finite sequence must be nonempty')
            if not self.head[-1].is_critical:
                raise ValueError('Finite sequence must end with a critical symbol')
            if any(s.is_critical for s in self.head[:-1]):
                raise ValueError('Only the last symbol of a finite sequence may be critical')
        return self

    # ------------------------------------------------------------------
    # Конструкторы
    # ------------------------------------------------------------------

    @classmethod
    def finite(cls, symbols: Iterable) -> 'ItinerarySeq':
        return cls(head=tuple(symbols))

    @classmethod
    def infinite(cls, head: Iterable, tail) -> 'ItinerarySeq':
        return cls(head=tuple(head), tail=tail)

    @classmethod
    def prefix(cls, symbols: Iterable) -> 'ItinerarySeq':
        return cls(head=tuple(symbols), open=True)

    @classmethod
    def parse(cls, text: str) -> 'ItinerarySeq':
        raw = text.strip()
        tail = None
        if raw.endswith(TAIL_MARK):
            raw = raw[:-len(TAIL_MARK)]
            if not raw:
                raise SequenceParseError(text, "missing tail symbol before ^inf")
            tail = Symbol.parse(raw[-1])
            if tail is None or tail.is_critical:
                raise SequenceParseError(text, "tail must be one of 1, 2, 3")
            raw = raw[:-1]
        symbols = []
        for ch in raw:
            s = Symbol.parse(ch)
            if s is None:
                raise SequenceParseError(text, f"unknown symbol {ch!r}")
            symbols.append(s)
        try:
            if tail is not None:
                return cls.infinite(symbols, tail)
            if symbols and symbols[-1].is_critical:
                return cls.finite(symbols)
            return cls.prefix(symbols)
        except ValueError as e:
            raise SequenceParseError(text, str(e)) from e

    # ------------------------------------------------------------------
    # Доступ
    # ------------------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.tail is None and not self.open

    @property
    def is_infinite(self) -> bool:
        return self.tail is not None

    @property
    def size(self) -> Optional[int]:
        """|a| для конечных и открытых, None для бесконечных"""
        return None if self.tail is not None else len(self.head)

    def symbol_at(self, i: int) -> Optional[Symbol]:
        """Символ с номером i или None, если последовательность закончилась раньше"""
        if i < len(self.head):
            return self.head[i]
        return self.tail

    def symbols(self, n: int) -> Tuple[Symbol, ...]:
        """Первые n символов (меньше, если последовательность короче)"""
        out = []
        for i in range(n):
            s = self.symbol_at(i)
            if s is None:
                break
            out.append(s)
        return tuple(out)

    def laps(self, n: int) -> Tuple[Symbol, ...]:
        """Первые n символов-лап; критический символ не включается"""
        return tuple(s for s in self.symbols(n) if not s.is_critical)

    def truncated(self, n: int) -> 'ItinerarySeq':
        """Открытый префикс длины не больше n, либо сама последовательность, если она короче"""
        if self.tail is None and len(self.head) <= n:
            return self
        return ItinerarySeq.prefix(self.symbols(n))

    def has_prefix(self, word: Iterable[Symbol]) -> bool:
        word = tuple(word)
        return self.symbols(len(word)) == word

    def __iter__(self) -> Iterator[Symbol]:
        i = 0
        while True:
            s = self.symbol_at(i)
            if s is None:
                return
            yield s
            i += 1

    def to_text(self) -> str:
        body = "".join(s.value for s in self.head)
        if self.tail is not None:
            return f"{body}{self.tail.value}{TAIL_MARK}"
        return body

    def __str__(self) -> str:
        return self.to_text()


def word_text(word: Iterable[Symbol]) -> str:
    return "".join(s.value for s in word)


def parse_word(text: str) -> Tuple[Symbol, ...]:
    """Разбор конечного слова из лап ("1122")"""
    word = []
    for ch in text.strip():
        s = Symbol.parse(ch)
        if s is None or s.is_critical:
            raise SequenceParseError(text, f"lap word symbol expected, got {ch!r}")
        word.append(s)
    return tuple(word)
