"""Exact rationals and self-validating interval arithmetic.

Exact quantities (Wallis ratios, series coefficients, polynomial values) are
``gmpy2.mpq`` fractions kept in lowest terms.  Every transcendental quantity
is carried as a :class:`RealInterval`: a pair of MPFR floats rounded outward,
so the true mathematical value always lies between ``lo`` and ``hi``.  A
decided :func:`compare` between two enclosures is therefore a certificate of
the corresponding strict inequality.

All values are immutable after construction and all operations are pure, so
they may be shared freely between concurrent workers (gmpy2 contexts are
thread-local).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from .errors import DomainError

#: The exact-rational carrier type.  ``mpq`` is always in lowest terms with a
#: positive denominator, and arithmetic on it is closed and exact.
ExactRational = mpq

RationalLike = Union[int, mpz, mpq, Fraction, str]

#: Smallest working precision accepted anywhere in the library.
MIN_PRECISION = 16


def rational(value: RationalLike, den: RationalLike | None = None) -> mpq:
    """Coerce ``value`` (or the ratio ``value/den``) to an exact rational.

    Accepts ints, ``Fraction``, ``mpq`` and strings like ``"-3/8"``.  Floats
    are rejected: they would smuggle binary rounding error into paths that
    must stay exact.
    """
    if den is not None:
        return mpq(rational(value), rational(den))
    if isinstance(value, mpq):
        return value
    if isinstance(value, (int, mpz)):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return mpq(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def wallis_exact(n: int) -> mpq:
    """The Wallis ratio (2n-1)!!/(2n)!! in lowest terms.

    Computed as binomial(2n, n)/4^n, which is the same quantity; in lowest
    terms the numerator is odd and the denominator is a power of two.
    """
    if n < 1:
        raise DomainError("the Wallis ratio is defined for n >= 1")
    return mpq(gmpy2.bincoef(2 * n, n), mpz(4) ** n)


def wallis_range(n_min: int, n_max: int) -> Iterator[tuple[int, mpq]]:
    """Yield (n, W_n) for n = n_min..n_max via the exact recurrence
    W_{n+1} = W_n * (2n+1)/(2n+2)."""
    if n_min < 1:
        raise DomainError("the Wallis ratio is defined for n >= 1")
    w = wallis_exact(n_min)
    for n in range(n_min, n_max + 1):
        yield n, w
        w = w * mpq(2 * n + 1, 2 * n + 2)


# --------------------------------------------------------------------------
# directed-rounding contexts

def _check_bits(bits: int) -> int:
    if not isinstance(bits, int) or bits < MIN_PRECISION:
        raise ValueError(f"precision must be an int >= {MIN_PRECISION}, got {bits!r}")
    return bits


def _rdown(bits: int):
    return gmpy2.context(precision=bits, round=gmpy2.RoundDown)


def _rup(bits: int):
    return gmpy2.context(precision=bits, round=gmpy2.RoundUp)


def _scalar(value) -> mpq | None:
    """Exact scalar operand for mixed interval arithmetic, or None."""
    if isinstance(value, (int, mpz, mpq)):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return None


def _coerce(value, bits: int) -> "RealInterval | None":
    """Lift an operand to an interval for mixed arithmetic.

    Rational scalars become directed two-sided enclosures first: gmpy2's
    mixed mpfr/mpq operations convert the rational at the context rounding
    before operating, and that double rounding is not containment-safe (for
    division, or multiplication by a negative), so all arithmetic here is
    mpfr-with-mpfr only.  Dyadic scalars stay exact, so nothing is lost on
    integer operands.
    """
    if isinstance(value, RealInterval):
        return value
    q = _scalar(value)
    if q is None:
        return None
    return enclose_rational(q, bits)


@dataclass(frozen=True, slots=True)
class RealInterval:
    """A closed enclosure [lo, hi] of one real number.

    Containment soundness: for every operation defined here, applying the
    true mathematical operation to any points of the input intervals yields a
    value inside the output interval.  Endpoints are MPFR floats produced
    under directed rounding at ``precision`` bits; rational scalar operands
    are lifted to directed enclosures before arithmetic (see ``_coerce``), so
    mixed expressions stay sound at the cost of at most one extra ulp.
    """

    lo: mpfr
    hi: mpfr
    precision: int

    def __post_init__(self) -> None:
        if not (gmpy2.is_finite(self.lo) and gmpy2.is_finite(self.hi)):
            raise DomainError("interval endpoints must be finite")
        if self.lo > self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    # -- inspection ---------------------------------------------------------

    def width(self) -> mpq:
        """Exact width hi - lo."""
        return mpq(self.hi) - mpq(self.lo)

    def mid(self) -> mpq:
        """Exact midpoint (lo + hi)/2."""
        return (mpq(self.lo) + mpq(self.hi)) / 2

    def magnitude(self) -> mpq:
        """sup |x| over the interval."""
        return max(abs(mpq(self.lo)), abs(mpq(self.hi)))

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, value: RationalLike) -> bool:
        q = rational(value)
        return self.lo <= q <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def pad(self, delta: RationalLike) -> "RealInterval":
        """Widen both endpoints outward by at least ``delta`` >= 0."""
        d = rational(delta)
        if d < 0:
            raise ValueError("pad amount must be nonnegative")
        with _rup(self.precision):
            d_up = mpfr(d)                      # d_up >= d, so the pad covers delta
        with _rdown(self.precision):
            lo = gmpy2.sub(self.lo, d_up)
        with _rup(self.precision):
            hi = gmpy2.add(self.hi, d_up)
        return RealInterval(lo, hi, self.precision)

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        rhs = _coerce(other, self.precision)
        if rhs is None:
            return NotImplemented
        bits = max(self.precision, rhs.precision)
        with _rdown(bits):
            lo = gmpy2.add(self.lo, rhs.lo)
        with _rup(bits):
            hi = gmpy2.add(self.hi, rhs.hi)
        return RealInterval(lo, hi, bits)

    __radd__ = __add__

    def __neg__(self):
        with _rdown(self.precision):
            lo = gmpy2.mul(self.hi, -1)
        with _rup(self.precision):
            hi = gmpy2.mul(self.lo, -1)
        return RealInterval(lo, hi, self.precision)

    def __sub__(self, other):
        rhs = _coerce(other, self.precision)
        if rhs is None:
            return NotImplemented
        bits = max(self.precision, rhs.precision)
        with _rdown(bits):
            lo = gmpy2.sub(self.lo, rhs.hi)
        with _rup(bits):
            hi = gmpy2.sub(self.hi, rhs.lo)
        return RealInterval(lo, hi, bits)

    def __rsub__(self, other):
        rhs = _coerce(other, self.precision)
        if rhs is None:
            return NotImplemented
        return rhs.__sub__(self)

    def __mul__(self, other):
        rhs = _coerce(other, self.precision)
        if rhs is None:
            return NotImplemented
        bits = max(self.precision, rhs.precision)
        pairs = [(self.lo, rhs.lo), (self.lo, rhs.hi),
                 (self.hi, rhs.lo), (self.hi, rhs.hi)]
        with _rdown(bits):
            lo = min(gmpy2.mul(a, b) for a, b in pairs)
        with _rup(bits):
            hi = max(gmpy2.mul(a, b) for a, b in pairs)
        return RealInterval(lo, hi, bits)

    __rmul__ = __mul__

    def __truediv__(self, other):
        rhs = _coerce(other, self.precision)
        if rhs is None:
            return NotImplemented
        if rhs.contains_zero():
            raise DomainError("division by an enclosure containing zero")
        bits = max(self.precision, rhs.precision)
        pairs = [(self.lo, rhs.lo), (self.lo, rhs.hi),
                 (self.hi, rhs.lo), (self.hi, rhs.hi)]
        with _rdown(bits):
            lo = min(gmpy2.div(a, b) for a, b in pairs)
        with _rup(bits):
            hi = max(gmpy2.div(a, b) for a, b in pairs)
        return RealInterval(lo, hi, bits)

    def __rtruediv__(self, other):
        rhs = _coerce(other, self.precision)
        if rhs is None:
            return NotImplemented
        return rhs.__truediv__(self)

    def __pow__(self, k):
        if not isinstance(k, (int, mpz)):
            return NotImplemented
        k = int(k)
        bits = self.precision
        if k == 0:
            with _rdown(bits):
                one = mpfr(1)
            return RealInterval(one, one, bits)
        if k < 0:
            return 1 / (self ** (-k))
        if self.lo >= 0:
            with _rdown(bits):
                lo = self.lo ** k
            with _rup(bits):
                hi = self.hi ** k
        elif self.hi <= 0:
            if k % 2 == 0:
                with _rdown(bits):
                    lo = self.hi ** k
                with _rup(bits):
                    hi = self.lo ** k
            else:
                with _rdown(bits):
                    lo = self.lo ** k
                with _rup(bits):
                    hi = self.hi ** k
        else:
            if k % 2 == 0:
                with _rdown(bits):
                    lo = mpfr(0)
                with _rup(bits):
                    hi = max(self.lo ** k, self.hi ** k)
            else:
                with _rdown(bits):
                    lo = self.lo ** k
                with _rup(bits):
                    hi = self.hi ** k
        return RealInterval(lo, hi, bits)


def enclose_rational(q: RationalLike, precision_bits: int) -> RealInterval:
    """Outward-rounded enclosure of an exact rational.

    The result has relative width at most 2^(2 - precision_bits) and is exact
    (width zero) whenever q is representable at the working precision.
    """
    bits = _check_bits(precision_bits)
    q = rational(q)
    with _rdown(bits):
        lo = mpfr(q)
    with _rup(bits):
        hi = mpfr(q)
    return RealInterval(lo, hi, bits)


def _bits_for(x: RealInterval, precision_bits: int | None) -> int:
    return x.precision if precision_bits is None else _check_bits(precision_bits)


def sqrt(x: RealInterval, precision_bits: int | None = None) -> RealInterval:
    if x.lo < 0:
        raise DomainError("sqrt requires a nonnegative enclosure")
    bits = _bits_for(x, precision_bits)
    with _rdown(bits):
        lo = gmpy2.sqrt(x.lo)
    with _rup(bits):
        hi = gmpy2.sqrt(x.hi)
    return RealInterval(lo, hi, bits)


def exp(x: RealInterval, precision_bits: int | None = None) -> RealInterval:
    bits = _bits_for(x, precision_bits)
    with _rdown(bits):
        lo = gmpy2.exp(x.lo)
    with _rup(bits):
        hi = gmpy2.exp(x.hi)
    return RealInterval(lo, hi, bits)


def ln(x: RealInterval, precision_bits: int | None = None) -> RealInterval:
    if x.lo <= 0:
        raise DomainError("ln requires a strictly positive enclosure")
    bits = _bits_for(x, precision_bits)
    with _rdown(bits):
        lo = gmpy2.log(x.lo)
    with _rup(bits):
        hi = gmpy2.log(x.hi)
    return RealInterval(lo, hi, bits)


def pow_rational(x: RealInterval, exponent: RationalLike,
                 precision_bits: int | None = None) -> RealInterval:
    """x^e for a strictly positive enclosure x and exact rational exponent,
    evaluated as exp(e * ln x)."""
    if x.lo <= 0:
        raise DomainError("pow requires a strictly positive base enclosure")
    bits = _bits_for(x, precision_bits)
    e = rational(exponent)
    return exp(ln(x, bits) * e, bits)


_ELEMENTARY: dict[str, Callable[..., RealInterval]] = {
    "exp": exp,
    "ln": ln,
    "sqrt": sqrt,
    "pow": pow_rational,
    "pow_rational_exponent": pow_rational,
}


def elementary(fn: str, x: RealInterval, precision_bits: int,
               exponent: RationalLike | None = None) -> RealInterval:
    """Dispatch form of the elementary enclosures (exp, ln, sqrt, pow)."""
    try:
        op = _ELEMENTARY[fn]
    except KeyError:
        raise ValueError(f"unknown elementary function {fn!r}") from None
    if op is pow_rational:
        if exponent is None:
            raise ValueError("pow requires an exponent")
        return op(x, exponent, precision_bits)
    if exponent is not None:
        raise ValueError(f"{fn} takes no exponent")
    return op(x, precision_bits)


@lru_cache(maxsize=None)
def pi_enclosure(precision_bits: int) -> RealInterval:
    bits = _check_bits(precision_bits)
    with _rdown(bits):
        lo = gmpy2.const_pi()
    with _rup(bits):
        hi = gmpy2.const_pi()
    return RealInterval(lo, hi, bits)


@lru_cache(maxsize=None)
def e_enclosure(precision_bits: int) -> RealInterval:
    bits = _check_bits(precision_bits)
    with _rdown(bits):
        lo = gmpy2.exp(mpfr(1))
    with _rup(bits):
        hi = gmpy2.exp(mpfr(1))
    return RealInterval(lo, hi, bits)


@lru_cache(maxsize=None)
def e_over_pi(precision_bits: int) -> RealInterval:
    return e_enclosure(precision_bits) / pi_enclosure(precision_bits)


class Ordering(enum.Enum):
    """Three-way order between two enclosures; UNDECIDABLE iff they overlap."""

    LESS = "less"
    GREATER = "greater"
    UNDECIDABLE = "undecidable"


def compare(f: RealInterval, g: RealInterval) -> Ordering:
    """Certified comparison: LESS iff f.hi < g.lo, GREATER iff f.lo > g.hi."""
    if f.hi < g.lo:
        return Ordering.LESS
    if f.lo > g.hi:
        return Ordering.GREATER
    return Ordering.UNDECIDABLE


def intervals_overlap(f: RealInterval, g: RealInterval) -> bool:
    return not (f.hi < g.lo or g.hi < f.lo)


@dataclass(frozen=True, slots=True)
class PrecisionPolicy:
    """Escalation schedule for decided comparisons: start at ``start_bits``
    and double up to ``cap_bits`` before giving up as undecidable."""

    start_bits: int = 128
    cap_bits: int = 8192

    def __post_init__(self) -> None:
        _check_bits(self.start_bits)
        if self.cap_bits < self.start_bits:
            raise ValueError("cap_bits must be >= start_bits")

    def ladder(self) -> Iterator[int]:
        bits = self.start_bits
        while True:
            yield bits
            if bits >= self.cap_bits:
                return
            bits = min(2 * bits, self.cap_bits)


DEFAULT_POLICY = PrecisionPolicy()


def decide_order(lhs: Callable[[int], RealInterval],
                 rhs: Callable[[int], RealInterval],
                 policy: PrecisionPolicy = DEFAULT_POLICY) -> tuple[Ordering, int]:
    """Compare two precision-parameterised enclosures, escalating precision
    along the policy ladder until the order is decided or the cap is hit.

    Returns the ordering together with the precision at which it was decided
    (the cap when undecidable).
    """
    for bits in policy.ladder():
        order = compare(lhs(bits), rhs(bits))
        if order is not Ordering.UNDECIDABLE:
            return order, bits
    return Ordering.UNDECIDABLE, policy.cap_bits
