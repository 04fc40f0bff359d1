from .errors import (
    NumericsError, SignUndecidable, NoSignChange, PrecisionExhausted,
    UncertainDivisor, CodecError,
)
from .context import PrecisionContext
from .bigreal import BigReal
from .sign import Sign, certified_sign
from .codec import (
    mpf_to_fraction, fraction_to_decimal, fraction_text, parse_real,
    bigreal_to_json, bigreal_from_json,
)
from .bisection import Bracket, bisect, newton_bisect, certify_sign_at
from .polynomial import RealPolynomial

__all__ = [
    'NumericsError', 'SignUndecidable', 'NoSignChange', 'PrecisionExhausted',
    'UncertainDivisor', 'CodecError',
    'PrecisionContext', 'BigReal', 'Sign', 'certified_sign',
    'mpf_to_fraction', 'fraction_to_decimal', 'fraction_text', 'parse_real',
    'bigreal_to_json', 'bigreal_from_json',
    'Bracket', 'bisect', 'newton_bisect', 'certify_sign_at',
    'RealPolynomial',
]
