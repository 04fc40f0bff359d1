"""
Десятичный кодек: точная печать двоично-рациональных чисел и BigReal в JSON.
"""

from fractions import Fraction
from typing import Dict, Union

import mpmath

from numerics.bigreal import BigReal, exact_int
from numerics.errors import CodecError


def mpf_to_fraction(v: mpmath.mpf) -> Fraction:
    """Точное рациональное значение конечного mpf"""
    sign, man, exp, _ = v._mpf_
    if not man:
        if exp:
            raise CodecError(f"Non-finite value {v}")
        return Fraction(0)
    num = -int(man) if sign else int(man)
    if exp >= 0:
        return Fraction(num << exp)
    return Fraction(num, 1 << -exp)


def _decimal_digits(den: int) -> int:
    """Число десятичных знаков для знаменателя вида 2^a 5^b"""
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return -1
    return max(twos, fives)


def fraction_to_decimal(fr: Union[int, Fraction]) -> str:
    """Точная конечная десятичная запись; только для знаменателей 2^a 5^b"""
    fr = Fraction(fr)
    digits = _decimal_digits(fr.denominator)
    if digits < 0:
        raise CodecError(f"{fr} has no finite decimal expansion")
    if digits == 0:
        return str(fr.numerator)
    scaled = abs(fr.numerator) * (10 ** digits // fr.denominator)
    whole, frac = divmod(scaled, 10 ** digits)
    frac_text = str(frac).rjust(digits, '0').rstrip('0')
    sign = '-' if fr < 0 else ''
    return f"{sign}{whole}.{frac_text}" if frac_text else f"{sign}{whole}"


def fraction_text(fr: Union[int, Fraction]) -> str:
    """Точная запись для отчетов: десятичная, если она конечна, иначе 'p/q'"""
    fr = Fraction(fr)
    if _decimal_digits(fr.denominator) < 0:
        return f"{fr.numerator}/{fr.denominator}"
    return fraction_to_decimal(fr)


def parse_real(text: str) -> Fraction:
    """Разбор '0.5', '1/64', '1e-3', '-0.25' в точную дробь"""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError, AttributeError) as e:
        raise CodecError(f"Cannot parse real number {text!r}: {e}") from e


def bigreal_to_json(x: BigReal) -> Dict[str, str]:
    """{"v": "<decimal>", "e": "<decimal>"}"""
    if x.exact is not None and _decimal_digits(x.exact.denominator) >= 0:
        return {"v": fraction_to_decimal(x.exact), "e": fraction_to_decimal(mpf_to_fraction(x.err))}
    return {
        "v": fraction_to_decimal(mpf_to_fraction(x.value)),
        "e": fraction_to_decimal(mpf_to_fraction(x.err)),
    }


def bigreal_from_json(data: Dict[str, str], prec: int) -> BigReal:
    """Обратный разбор; середина восстанавливается точно"""
    try:
        v = parse_real(data["v"])
        e = parse_real(data["e"])
    except KeyError as exc:
        raise CodecError(f"Missing field {exc} in BigReal JSON") from exc
    if e < 0:
        raise CodecError("Negative error bound in BigReal JSON")
    if e == 0:
        return BigReal.from_fraction(v, prec)
    needed = max(prec, abs(v.numerator).bit_length() + 1)
    value = mpmath.fdiv(exact_int(v.numerator), v.denominator, prec=needed)
    err = mpmath.fdiv(e.numerator, e.denominator, prec=64, rounding='u')
    return BigReal.from_mpf(value, err, prec)
