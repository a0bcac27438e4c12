"""Inequality certificates over explicit ranges of n.

Five inequalities are certified, identified by :class:`Inequality`:

* ``U_LOWER``    chi_n < W_n                                   (n >= 2)
* ``U_UPPER``    W_n <= (4/3)(1 - 1/2n)^n sqrt(n-1)/n          (n >= 2,
                 equality exactly at n = 2)
* ``THM3``       W_n > corrected approximant (orders 1..5)     (n >= 1)
* ``THM5_LOWER`` mu_n < W_n                                    (n >= 1)
* ``THM5_UPPER`` W_n < mu_n exp(1/(144 n^3))                   (n >= 1)

Verdicts come from certified interval comparisons under an escalating
precision policy.  The upper bound of ``U_UPPER`` is an exact rational
whenever n - 1 is a perfect square; those points are compared exactly, which
is what makes the single equality point n = 2 detectable at all.

The module also certifies the sign facts behind the monotonicity arguments
for the difference functions s (corrected family), p and q (mu family):
exact positivity certificates for the numerator polynomials of their second
derivatives, exact sign evaluation of those rational closed forms, agreement
of the closed-form differences with residual-based differences, and
finite-difference convexity/concavity spot checks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import gmpy2
from gmpy2 import mpq

from . import approximants, series
from .approximants import Chi, Mu, correction_sum, residual
from .errors import DomainError, RangeError
from .numerics import (
    DEFAULT_POLICY,
    ExactRational,
    Ordering,
    PrecisionPolicy,
    RationalLike,
    RealInterval,
    decide_order,
    enclose_rational,
    exp,
    ln,
    rational,
    sqrt,
    wallis_exact,
    wallis_range,
)


class Inequality(enum.Enum):
    """Identifiers of the certified inequalities."""

    U_LOWER = "U_LOWER"
    U_UPPER = "U_UPPER"
    THM3 = "THM3"
    THM5_LOWER = "THM5_LOWER"
    THM5_UPPER = "THM5_UPPER"

    @property
    def min_n(self) -> int:
        """Smallest n for which the inequality is asserted."""
        return 2 if self in (Inequality.U_LOWER, Inequality.U_UPPER) else 1


class Verdict(enum.Enum):
    HOLDS_STRICT = "holds_strict"
    HOLDS_WITH_EQUALITY = "holds_with_equality"
    VIOLATED = "violated"
    UNDECIDABLE = "undecidable"


@dataclass(frozen=True, slots=True)
class CertificateReport:
    """Per-n verdicts for one inequality over a contiguous range."""

    inequality: Inequality
    n_min: int
    n_max: int
    verdicts: tuple[Verdict, ...]
    max_precision_used: int

    def verdict_at(self, n: int) -> Verdict:
        if not self.n_min <= n <= self.n_max:
            raise RangeError(f"n={n} outside report range {self.n_min}..{self.n_max}")
        return self.verdicts[n - self.n_min]

    def counts(self) -> dict[Verdict, int]:
        out = {v: 0 for v in Verdict}
        for v in self.verdicts:
            out[v] += 1
        return out

    def equality_points(self) -> tuple[int, ...]:
        return tuple(self.n_min + i for i, v in enumerate(self.verdicts)
                     if v is Verdict.HOLDS_WITH_EQUALITY)

    @property
    def summary(self) -> str:
        """"pass" iff no verdict is violated or undecidable."""
        counts = self.counts()
        if counts[Verdict.VIOLATED]:
            return "violated"
        if counts[Verdict.UNDECIDABLE]:
            return "undecidable"
        return "pass"

    @property
    def passed(self) -> bool:
        return self.summary == "pass"


def _order_verdict(order: Ordering, holds_when: Ordering) -> Verdict:
    if order is holds_when:
        return Verdict.HOLDS_STRICT
    if order is Ordering.UNDECIDABLE:
        return Verdict.UNDECIDABLE
    return Verdict.VIOLATED


def _check(ineq: Inequality, n: int, w: mpq,
           policy: PrecisionPolicy) -> tuple[Verdict, int]:
    """Verdict for one n, given the exact Wallis ratio w = W_n."""
    if ineq is Inequality.U_UPPER:
        n_less_1 = gmpy2.mpz(n - 1)
        power = mpq(2 * n - 1, 2 * n) ** n
        scale = mpq(4, 3) * power / n
        if gmpy2.is_square(n_less_1):
            rhs = scale * gmpy2.isqrt(n_less_1)      # both sides exact
            if w < rhs:
                return Verdict.HOLDS_STRICT, 0
            if w == rhs:
                return Verdict.HOLDS_WITH_EQUALITY, 0
            return Verdict.VIOLATED, 0
        order, bits = decide_order(
            lambda b: enclose_rational(w, b),
            lambda b: sqrt(enclose_rational(n_less_1, b), b) * scale,
            policy)
        return _order_verdict(order, Ordering.LESS), bits

    if ineq is Inequality.U_LOWER:
        order, bits = decide_order(
            lambda b: approximants.evaluate(Chi(), n, b),
            lambda b: enclose_rational(w, b),
            policy)
        return _order_verdict(order, Ordering.LESS), bits

    if ineq is Inequality.THM3:
        corrected = series.default_correction()
        order, bits = decide_order(
            lambda b: approximants.evaluate(corrected, n, b),
            lambda b: enclose_rational(w, b),
            policy)
        return _order_verdict(order, Ordering.LESS), bits

    if ineq is Inequality.THM5_LOWER:
        order, bits = decide_order(
            lambda b: approximants.evaluate(Mu(), n, b),
            lambda b: enclose_rational(w, b),
            policy)
        return _order_verdict(order, Ordering.LESS), bits

    if ineq is Inequality.THM5_UPPER:
        bump = mpq(1, 144 * mpq(n) ** 3)
        order, bits = decide_order(
            lambda b: enclose_rational(w, b),
            lambda b: (approximants.evaluate(Mu(), n, b)
                       * exp(enclose_rational(bump, b), b)),
            policy)
        return _order_verdict(order, Ordering.LESS), bits

    raise TypeError(f"unknown inequality {ineq!r}")


def check_inequality(ineq: Inequality, n: int,
                     policy: PrecisionPolicy = DEFAULT_POLICY) -> Verdict:
    """Certified verdict for a single n."""
    if n < ineq.min_n:
        raise RangeError(f"{ineq.value} is asserted for n >= {ineq.min_n}, got n={n}")
    verdict, _ = _check(ineq, n, wallis_exact(n), policy)
    return verdict


def sweep(ineq: Inequality, n_min: int, n_max: int,
          policy: PrecisionPolicy = DEFAULT_POLICY) -> CertificateReport:
    """Per-n verdicts for every integer in [n_min, n_max].

    Deterministic: identical inputs always produce identical reports.
    """
    if n_min < ineq.min_n:
        raise RangeError(f"{ineq.value} is asserted for n >= {ineq.min_n}, got n_min={n_min}")
    if n_max < n_min:
        raise RangeError(f"empty range {n_min}..{n_max}")
    verdicts = []
    max_bits = 0
    for n, w in wallis_range(n_min, n_max):
        verdict, bits = _check(ineq, n, w, policy)
        verdicts.append(verdict)
        max_bits = max(max_bits, bits)
    return CertificateReport(ineq, n_min, n_max, tuple(verdicts), max_bits)


# --------------------------------------------------------------------------
# sign certificates for the difference functions s, p, q

@dataclass(frozen=True, slots=True)
class ExactPolynomial:
    """Dense polynomial with exact rational coefficients, ascending degree."""

    coefficients: tuple[ExactRational, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(rational(c) for c in self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: RationalLike) -> mpq:
        x = rational(x)
        acc = mpq(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc


class PolyCertificate(enum.Enum):
    ALL_COEFFS_NONNEGATIVE = "all_coeffs_nonnegative"
    NOT_CERTIFIED = "not_certified"


def poly_nonneg_certificate(p: ExactPolynomial) -> PolyCertificate:
    """Sufficient certificate that p(x) > 0 for all x > 0 (hence p(x-1) > 0
    for x > 1): every coefficient nonnegative and at least one positive."""
    if all(c >= 0 for c in p.coefficients) and any(c > 0 for c in p.coefficients):
        return PolyCertificate.ALL_COEFFS_NONNEGATIVE
    return PolyCertificate.NOT_CERTIFIED


#: Numerator polynomials (argument shifted by 1) of the closed-form second
#: derivatives of the difference functions s, p, q.
SECOND_DERIVATIVE_NUMERATORS: dict[str, ExactPolynomial] = {
    "s": ExactPolynomial((4913, 33387, 98177, 164799, 174543,
                          121173, 55197, 15920, 2640, 192)),
    "p": ExactPolynomial((351068, 1516131, 2684091, 2495340,
                          1285956, 348624, 38880)),
    "q": ExactPolynomial((6780036, 50421819, 166596550, 322415601,
                          405307306, 346439295, 204449525, 82629900,
                          22094730, 3618864, 305208, 7776)),
}


def second_derivative_value(which: str, x: RationalLike) -> mpq:
    """Exact value of the closed-form second derivative of s, p or q.

    Positive for s and p and negative for q at every x >= 1, which is what
    makes s, p strictly convex and q strictly concave there.
    """
    x = rational(x)
    num = SECOND_DERIVATIVE_NUMERATORS
    if which == "s":
        if x <= mpq(1, 2):
            raise DomainError("s'' is evaluated for x > 1/2")
        den = 32 * x ** 7 * (x + 1) ** 7 * (2 * x + 1) ** 2 * (2 * x - 1) ** 2
        return num["s"](x - 1) / den
    if which == "p":
        den = (2 * x ** 2 * (3 * x + 1) * (3 * x + 4) * (x + 1) ** 2
               * (2 * x + 1) ** 2 * (6 * x - 1) ** 2 * (6 * x + 5) ** 2)
        if den == 0:
            raise DomainError(f"p'' undefined at x={x}")
        return num["p"](x - 1) / den
    if which == "q":
        den = (12 * x ** 5 * (3 * x + 1) * (3 * x + 4) * (2 * x + 1) ** 2
               * (6 * x - 1) ** 2 * (x + 1) ** 5 * (6 * x + 5) ** 2)
        if den == 0:
            raise DomainError(f"q'' undefined at x={x}")
        return -num["q"](x - 1) / den
    raise ValueError(f"unknown difference function {which!r}")


def _log_of(num: mpq, den: mpq, bits: int) -> RealInterval:
    return ln(enclose_rational(num / den, bits), bits)


def closed_form_difference(which: str, x: RationalLike, precision_bits: int = 256) -> RealInterval:
    """Enclosure of the difference function s, p or q at a rational point.

    s(x) is the forward difference of the corrected-family log error, p(x)
    that of the mu-family log error, and q(x) = p(x) + 1/(144(x+1)^3) -
    1/(144 x^3).
    """
    x = rational(x)
    bits = precision_bits
    if which == "s":
        if 2 * x <= 1:
            raise DomainError("s is evaluated for x > 1/2")
        h = correction_sum(series.default_correction().coeffs, x)
        h_next = correction_sum(series.default_correction().coeffs, x + 1)
        return (_log_of(2 * x + 1, 2 * x + 2, bits) * (x + 1)
                - _log_of(2 * x - 1, 2 * x, bits) * x
                - _log_of(x + 1, x, bits) * mpq(1, 2)
                - _log_of(2 * x + 1, 2 * x + 2, bits)
                + (h_next - h))
    if which in ("p", "q"):
        if 6 * x <= 1:
            raise DomainError("p and q are evaluated for x > 1/6")
        value = (_log_of(6 * x + 5, 6 * x + 8, bits) * (x + mpq(4, 3))
                 - _log_of(6 * x - 1, 6 * x + 2, bits) * (x + mpq(1, 3))
                 - _log_of(x + 1, x, bits) * mpq(1, 2)
                 - _log_of(2 * x + 1, 2 * x + 2, bits))
        if which == "q":
            value = value + (mpq(1, 144 * (x + 1) ** 3) - mpq(1, 144 * x ** 3))
        return value
    raise ValueError(f"unknown difference function {which!r}")


def difference_consistency(which: str, n: int, precision_bits: int = 256) -> RealInterval:
    """Closed-form difference minus the residual-based difference at n.

    The two computations agree identically, so the returned enclosure must
    contain zero; its width reflects only the working precision.
    """
    if n < 1:
        raise DomainError("difference consistency is checked for n >= 1")
    bits = precision_bits
    if which == "s":
        spec = series.default_correction()
        model = residual(spec, n, bits) - residual(spec, n + 1, bits)
    elif which in ("p", "q"):
        model = residual(Mu(), n, bits) - residual(Mu(), n + 1, bits)
        if which == "q":
            model = model + (mpq(1, 144 * mpq(n + 1) ** 3) - mpq(1, 144 * mpq(n) ** 3))
    else:
        raise ValueError(f"unknown difference function {which!r}")
    return closed_form_difference(which, n, bits) - model


@dataclass(frozen=True, slots=True)
class SignSample:
    """Sign of a central second difference at one sample point."""

    x: ExactRational
    sign: str               # "positive", "negative" or "undecidable"
    value: RealInterval


def finite_difference_convexity(which: str, x_samples: Sequence[RationalLike],
                                h: RationalLike, precision_bits: int = 256) -> list[SignSample]:
    """Sign report of f(x+h) - 2 f(x) + f(x-h) for f in {s, p, q}.

    Decidedly positive at every sample for s and p (strict convexity) and
    negative for q (strict concavity); undecidable entries are reported as
    such rather than dropped.
    """
    h = rational(h)
    if h <= 0:
        raise ValueError("step h must be positive")
    rows = []
    for x in x_samples:
        x = rational(x)
        if x < 1 + h:
            raise DomainError(f"sample {x} must be at least 1 + h = {1 + h}")
        second = (closed_form_difference(which, x + h, precision_bits)
                  - closed_form_difference(which, x, precision_bits) * 2
                  + closed_form_difference(which, x - h, precision_bits))
        if second.lo > 0:
            sign = "positive"
        elif second.hi < 0:
            sign = "negative"
        else:
            sign = "undecidable"
        rows.append(SignSample(x, sign, second))
    return rows
