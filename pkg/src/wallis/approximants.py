"""Closed-form approximations of the Wallis ratio and their log residuals.

Five families are supported, all built around sqrt(e/pi) (1 - 1/2n)^n:

* ``Chi``          sqrt(e/pi) (1 - 1/2n)^n sqrt(n-1)/n
* ``FamilyA(a)``   sqrt(e/pi) (1 - 1/2n)^n sqrt(n+a)/n        (Chi is a = -1)
* ``Mu``           sqrt(e/pi) [1 - 1/(2(n+1/3))]^(n+1/3) / sqrt(n)
* ``FamilyBC(b,c)``sqrt(e/pi) [1 - 1/(2(n+b))]^(n+c) / sqrt(n)  (Mu is b = c = 1/3)
* ``Corrected``    FamilyA(0) value times exp(sum_k a_k / n^k)

Integer-exponent powers (1 - 1/2n)^n are computed as exact rationals and
enclosed once; rational exponents go through exp((n+c) ln(...)).  The log
residual ln W_n - ln(approximant) is the single error sequence from which
convergence rates and inequality margins are derived.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from gmpy2 import mpq

from .errors import DigitsNotCertified, DomainError
from .numerics import (
    ExactRational,
    RationalLike,
    RealInterval,
    e_over_pi,
    enclose_rational,
    exp,
    ln,
    rational,
    sqrt,
    wallis_exact,
)
from .rendering import interval_scientific


class CoefficientSource(enum.Enum):
    """Whether correction coefficients were solved here or supplied upstream."""

    SOLVED = "solved"
    SUPPLIED = "supplied"


@dataclass(frozen=True, slots=True)
class SeriesCoefficients:
    """Correction coefficients a_1..a_K, contiguous from index 1."""

    values: tuple[ExactRational, ...]
    source: CoefficientSource = CoefficientSource.SUPPLIED

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("need at least one coefficient")
        object.__setattr__(self, "values", tuple(rational(v) for v in self.values))

    @property
    def order(self) -> int:
        return len(self.values)

    def coefficient(self, k: int) -> mpq:
        """a_k, with k counted from 1."""
        if not 1 <= k <= len(self.values):
            raise IndexError(f"coefficient index {k} out of range 1..{len(self.values)}")
        return self.values[k - 1]


def correction_sum(coeffs: SeriesCoefficients, x: RationalLike) -> mpq:
    """The exact correction exponent sum_k a_k / x^k at a rational point."""
    x = rational(x)
    if x <= 0:
        raise DomainError("correction sum requires x > 0")
    total = mpq(0)
    for k, a_k in enumerate(coeffs.values, start=1):
        total += a_k / x ** k
    return total


@dataclass(frozen=True, slots=True)
class Chi:
    """sqrt(e/pi) (1 - 1/2n)^n sqrt(n-1)/n; zero at n = 1."""


@dataclass(frozen=True, slots=True)
class FamilyA:
    """sqrt(e/pi) (1 - 1/2n)^n sqrt(n+a)/n for a rational shift a."""

    a: ExactRational

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", rational(self.a))


@dataclass(frozen=True, slots=True)
class Mu:
    """sqrt(e/pi) [1 - 1/(2(n+1/3))]^(n+1/3) / sqrt(n)."""


@dataclass(frozen=True, slots=True)
class FamilyBC:
    """sqrt(e/pi) [1 - 1/(2(n+b))]^(n+c) / sqrt(n) for rational b, c."""

    b: ExactRational
    c: ExactRational

    def __post_init__(self) -> None:
        object.__setattr__(self, "b", rational(self.b))
        object.__setattr__(self, "c", rational(self.c))


@dataclass(frozen=True, slots=True)
class Corrected:
    """FamilyA(0) multiplied by exp(sum_k a_k / n^k)."""

    coeffs: SeriesCoefficients


ApproximantSpec = Union[Chi, FamilyA, Mu, FamilyBC, Corrected]

_MU_AS_BC = (mpq(1, 3), mpq(1, 3))


def _require_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"approximants are defined for integer n >= 1, got {n!r}")


def _family_a(a: mpq, n: int, bits: int) -> RealInterval:
    shifted = n + a
    if shifted <= 0:
        raise DomainError(f"sqrt(n + a) requires n + a > 0, got n={n}, a={a}")
    power = mpq(2 * n - 1, 2 * n) ** n          # (1 - 1/2n)^n, exact
    radicand = e_over_pi(bits) * shifted        # (e/pi)(n + a)
    return sqrt(radicand, bits) * (power / n)


def _family_bc(b: mpq, c: mpq, n: int, bits: int) -> RealInterval:
    base_den = 2 * (n + b)
    if base_den <= 1:
        raise DomainError(f"1 - 1/(2(n+b)) requires n + b > 1/2, got n={n}, b={b}")
    base = (base_den - 1) / base_den            # exact rational in (0, 1)
    power = exp(ln(enclose_rational(base, bits), bits) * (n + c), bits)
    return sqrt(e_over_pi(bits) / n, bits) * power


def evaluate(spec: ApproximantSpec, n: int, precision_bits: int = 128) -> RealInterval:
    """Containment-sound enclosure of the approximant value at integer n."""
    _require_n(n)
    if isinstance(spec, Chi):
        if n == 1:
            return enclose_rational(0, precision_bits)
        return _family_a(mpq(-1), n, precision_bits)
    if isinstance(spec, FamilyA):
        return _family_a(spec.a, n, precision_bits)
    if isinstance(spec, Mu):
        return _family_bc(*_MU_AS_BC, n, precision_bits)
    if isinstance(spec, FamilyBC):
        return _family_bc(spec.b, spec.c, n, precision_bits)
    if isinstance(spec, Corrected):
        correction = correction_sum(spec.coeffs, n)
        base = _family_a(mpq(0), n, precision_bits)
        return base * exp(enclose_rational(correction, precision_bits), precision_bits)
    raise TypeError(f"unknown approximant spec {spec!r}")


def residual(spec: ApproximantSpec, n: int, precision_bits: int = 128) -> RealInterval:
    """Enclosure of ln W_n - ln(approximant at n).

    Positive iff the approximant under-estimates the Wallis ratio.  Requires
    a strictly positive approximant value (so Chi at n = 1 is rejected).
    """
    value = evaluate(spec, n, precision_bits)
    if value.lo <= 0:
        raise DomainError(f"log residual needs a positive approximant, got {value} at n={n}")
    w = enclose_rational(wallis_exact(n), precision_bits)
    return ln(w, precision_bits) - ln(value, precision_bits)


@dataclass(frozen=True, slots=True)
class ErrorTableRow:
    """One row of the approximation-error table, with certified renderings."""

    n: int
    wallis: ExactRational
    chi_diff: RealInterval
    mu_diff: RealInterval
    chi_text: str
    mu_text: str
    digits: int
    precision_used: int
    chi_degenerate: bool    # n = 1, where the first family is identically zero


DEFAULT_TABLE_NS = (50, 100, 250, 1000)


def error_table(ns: list[int] | tuple[int, ...] = DEFAULT_TABLE_NS,
                precision_bits: int = 256, digits: int = 5,
                cap_bits: int = 8192) -> list[ErrorTableRow]:
    """Rows (n, W_n - chi_n, W_n - mu_n) with enclosures tight enough to
    certify ``digits`` significant digits, escalating precision as needed."""
    if not ns:
        raise ValueError("need at least one n")
    rows = []
    for n in ns:
        _require_n(n)
        bits = precision_bits
        w = wallis_exact(n)
        while True:
            chi_diff = w - evaluate(Chi(), n, bits)
            mu_diff = w - evaluate(Mu(), n, bits)
            chi_text = interval_scientific(chi_diff, digits)
            mu_text = interval_scientific(mu_diff, digits)
            if chi_text is not None and mu_text is not None:
                rows.append(ErrorTableRow(
                    n=n, wallis=w, chi_diff=chi_diff, mu_diff=mu_diff,
                    chi_text=chi_text, mu_text=mu_text, digits=digits,
                    precision_used=bits, chi_degenerate=(n == 1)))
                break
            if bits >= cap_bits:
                raise DigitsNotCertified(
                    f"row n={n}: could not certify {digits} digits at {cap_bits} bits")
            bits = min(2 * bits, cap_bits)
    return rows
