from .symbols import (
    Symbol, LAPS, CRITICALS, SymbolicError, SequenceParseError, ShiftOfCritical,
)
from .sequences import ItinerarySeq, word_text, parse_word
from .order import (
    Ordering, cmp, compare_from, compare_prefixes, shift, is_minimal,
    is_admissible, concat_power, lap_word_sign, leading_count,
)

__all__ = [
    'Symbol', 'LAPS', 'CRITICALS', 'SymbolicError', 'SequenceParseError', 'ShiftOfCritical',
    'ItinerarySeq', 'word_text', 'parse_word',
    'Ordering', 'cmp', 'compare_from', 'compare_prefixes', 'shift', 'is_minimal',
    'is_admissible', 'concat_power', 'lap_word_sign', 'leading_count',
]
