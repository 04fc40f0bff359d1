from .errors import (
    ParamSearchError, OrderViolation, NotMinimal, BracketLost, ParityViolation,
    PrefixNotCertified,
)
from .interval import ParamInterval
from .search import (
    compare_kneading, find_param, find_param_bracket, conv_pair, choose_parity,
    certify_prefix,
)

__all__ = [
    'ParamSearchError', 'OrderViolation', 'NotMinimal', 'BracketLost', 'ParityViolation',
    'PrefixNotCertified',
    'ParamInterval',
    'compare_kneading', 'find_param', 'find_param_bracket', 'conv_pair', 'choose_parity',
    'certify_prefix',
]
