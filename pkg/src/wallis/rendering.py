"""Certified decimal rendering of exact rationals and enclosures.

A scientific-notation string is emitted for an interval only when both
endpoints round to the same digits, so every printed digit is correct.
Exponents are written without padding ("8.0124e-4"), matching the library's
CSV/JSON conventions.
"""

from __future__ import annotations

from gmpy2 import mpfr, mpq, mpz

from .numerics import RealInterval, rational

_POW10_CACHE: dict[int, mpq] = {}


def _pow10(e: int) -> mpq:
    try:
        return _POW10_CACHE[e]
    except KeyError:
        value = mpq(mpz(10) ** e) if e >= 0 else mpq(1, mpz(10) ** (-e))
        _POW10_CACHE[e] = value
        return value


def scientific_parts(value, sig: int) -> tuple[int, int]:
    """Round ``value`` to ``sig`` significant decimal digits.

    Returns (mantissa, exp10) with 10^(sig-1) <= |mantissa| < 10^sig and
    value ~= mantissa * 10^(exp10 - sig + 1); (0, 0) for zero.  Rounding is
    to nearest, ties away from zero, done in exact rational arithmetic.
    """
    if sig < 1:
        raise ValueError("need at least one significant digit")
    q = mpq(value) if isinstance(value, mpfr) else rational(value)
    if q == 0:
        return 0, 0
    neg = q < 0
    aq = abs(q)
    # first guess from decimal digit counts, then correct to 10^e <= aq < 10^(e+1)
    e = aq.numerator.num_digits(10) - aq.denominator.num_digits(10)
    while aq < _pow10(e):
        e -= 1
    while aq >= _pow10(e + 1):
        e += 1
    scaled = aq / _pow10(e - sig + 1)
    m = (2 * scaled.numerator + scaled.denominator) // (2 * scaled.denominator)
    if m >= mpz(10) ** sig:
        m //= 10
        e += 1
    return (-int(m) if neg else int(m)), e


def format_parts(mantissa: int, exp10: int, sig: int) -> str:
    if mantissa == 0:
        return "0"
    digits = str(abs(mantissa))
    assert len(digits) == sig, (mantissa, sig)
    body = digits[0] + ("." + digits[1:] if sig > 1 else "")
    return ("-" if mantissa < 0 else "") + body + "e" + str(exp10)


def format_scientific(value, sig: int) -> str:
    """Scientific-notation rendering of a point value (rational or mpfr)."""
    return format_parts(*scientific_parts(value, sig), sig)


def interval_scientific(iv: RealInterval, sig: int) -> str | None:
    """Certified rendering of an enclosure, or None when the endpoints do not
    agree on all ``sig`` digits."""
    lo = scientific_parts(iv.lo, sig)
    hi = scientific_parts(iv.hi, sig)
    if lo != hi:
        return None
    return format_parts(*lo, sig)
