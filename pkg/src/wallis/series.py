"""Asymptotic correction coefficients and convergence-rate estimation.

The exponential correction exp(sum_k a_k / n^k) attached to the base form
g(n) = sqrt(e/pi) (1 - 1/2n)^n / sqrt(n) is determined by the expansion
coefficients x_k of ln[W_n g(n+1) / (g(n) W_{n+1})] through a unitriangular
linear system with binomial entries: row k reads

    a_1 - C(k-1,1) a_2 + ... + (-1)^k C(k-1,k-2) a_{k-1} = (-1)^k x_k,

so forward substitution yields a_1..a_{K-1} exactly.  The x_k themselves have
the closed form

    x_k = (-1)^k [ (1 + (-1)^k) / ((k+1) 2^(k+1)) - 1/(k+1) + 1/(2k) ].

Rates are measured with the scaled-difference criterion: if the residual
sequence w_n tends to zero and n^k (w_n - w_{n+1}) -> L with k > 1, then
n^(k-1) w_n -> L/(k-1).  The first k at which L is decidedly nonzero ranks a
family's convergence speed; a parameter choice that pushes that order higher
converges faster.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import gmpy2
from gmpy2 import mpq

from . import approximants
from .approximants import (
    ApproximantSpec,
    CoefficientSource,
    Corrected,
    SeriesCoefficients,
)
from .errors import InconsistentTrend
from .numerics import (
    ExactRational,
    RealInterval,
    enclose_rational,
    intervals_overlap,
    ln,
    rational,
)

#: Default sample grid: three decades ending at 10^5.
DEFAULT_GRID = (100, 1000, 10_000, 100_000)

#: Relative disagreement between the two largest grid points beyond which the
#: requested order is considered wrong.
TREND_TOLERANCE = mpq(1, 10)


@dataclass(frozen=True, slots=True)
class LogRatioCoefficients:
    """Expansion coefficients x_2..x_K, contiguous from index 2."""

    values: tuple[ExactRational, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("need at least x_2")
        object.__setattr__(self, "values", tuple(rational(v) for v in self.values))

    @property
    def max_order(self) -> int:
        return len(self.values) + 1

    def coefficient(self, k: int) -> mpq:
        """x_k, with k counted from 2."""
        if not 2 <= k <= self.max_order:
            raise IndexError(f"coefficient index {k} out of range 2..{self.max_order}")
        return self.values[k - 2]


def log_ratio_coeffs(K: int) -> LogRatioCoefficients:
    """Exact x_k for k = 2..K from the closed form above."""
    if K < 2:
        raise ValueError("need K >= 2")
    values = []
    for k in range(2, K + 1):
        sign = -1 if k % 2 else 1
        bracket = (mpq(1 + sign, (k + 1) * 2 ** (k + 1))
                   - mpq(1, k + 1) + mpq(1, 2 * k))
        values.append(sign * bracket)
    return LogRatioCoefficients(tuple(values))


def system_row(coeffs: Sequence[mpq], k: int) -> mpq:
    """Left side of row k of the triangular system, evaluated at a_1..a_{k-1}:
    sum_{j=1}^{k-1} (-1)^(j+1) C(k-1, j-1) a_j."""
    total = mpq(0)
    for j in range(1, k):
        term = mpq(gmpy2.bincoef(k - 1, j - 1)) * coeffs[j - 1]
        total += term if j % 2 else -term
    return total


def solve_triangular(x: LogRatioCoefficients) -> SeriesCoefficients:
    """Forward-substitute the triangular system; row k determines a_{k-1}.

    The coefficient of a_{k-1} in row k is (-1)^k (k-1), so each row is
    solvable exactly and the solution is unique.
    """
    solved: list[mpq] = []
    for k in range(2, x.max_order + 1):
        rhs_sign = 1 if k % 2 == 0 else -1
        rhs = rhs_sign * x.coefficient(k)
        partial = system_row(solved + [mpq(0)], k)
        pivot = mpq(rhs_sign * (k - 1))
        solved.append((rhs - partial) / pivot)
    return SeriesCoefficients(tuple(solved), CoefficientSource.SOLVED)


@lru_cache(maxsize=None)
def default_correction(order: int = 5) -> Corrected:
    """The corrected approximant with solved coefficients a_1..a_order
    (a_1 = 0, a_2 = 1/24, a_3 = 1/48, a_4 = 1/160, a_5 = 1/960 at order 5)."""
    if order < 1:
        raise ValueError("need order >= 1")
    return Corrected(solve_triangular(log_ratio_coeffs(order + 1)))


def verify_log_ratio(K: int, n_probe: int, precision_bits: int = 256,
                     cap_bits: int = 8192) -> RealInterval:
    """Defect of the truncated expansion at one probe point.

    Returns an enclosure of ln[W_n g(n+1)/(g(n) W_{n+1})] - sum_{k=2}^K x_k/n^k
    at n = n_probe; its magnitude is bounded by 1/n^(K+1) in the tested range.
    Precision escalates while the enclosure itself is too wide to judge that
    ceiling, so looseness is never mistaken for a formula error.
    """
    if K < 2:
        raise ValueError("need K >= 2")
    if n_probe < 10:
        raise ValueError("need n_probe >= 10")
    n = n_probe
    # W_n / W_{n+1} = (2n+2)/(2n+1) exactly, and the base-form ratio
    # g(n+1)/g(n) splits into an exact rational times sqrt(n/(n+1)).
    exact_part = (mpq(2 * n + 2, 2 * n + 1)
                  * mpq(2 * n + 1, 2 * n + 2) ** (n + 1)
                  / mpq(2 * n - 1, 2 * n) ** n)
    truncated = sum((x_k / mpq(n) ** k for k, x_k in
                     enumerate(log_ratio_coeffs(K).values, start=2)), mpq(0))
    ceiling = mpq(1, mpq(n) ** (K + 1))
    bits = precision_bits
    while True:
        log_exact = ln(enclose_rational(exact_part, bits), bits)
        log_root = ln(enclose_rational(mpq(n, n + 1), bits), bits) * mpq(1, 2)
        defect = log_exact + log_root - truncated
        if defect.width() <= ceiling / 10 or bits >= cap_bits:
            return defect
        bits = min(2 * bits, cap_bits)


@dataclass(frozen=True, slots=True)
class ConvergenceReport:
    """Outcome of one scaled-difference rate probe.

    ``limit_estimate`` encloses n^k (w_n - w_{n+1}) at the largest grid point,
    padded outward by the drift from the previous grid point so the reported
    interval covers the remaining extrapolation bias.  When the limit is
    decided nonzero, ``scaled_residual_limit`` (the same treatment applied to
    n^(k-1) w_n) must be consistent with limit/(k-1); ``consistent`` records
    that cross-check.  ``vanishing`` flags a clean decay to zero, meaning the
    true decay order exceeds k.
    """

    spec: ApproximantSpec
    order_k: int
    limit_estimate: RealInterval
    scaled_residual_limit: RealInterval
    samples: tuple[tuple[int, RealInterval], ...]
    decided_nonzero: bool
    vanishing: bool
    consistent: bool | None
    precision_bits: int


@lru_cache(maxsize=4096)
def _residual(spec: ApproximantSpec, n: int, bits: int) -> RealInterval:
    return approximants.residual(spec, n, bits)


def estimate_rate(spec: ApproximantSpec, k: int,
                  n_grid: Sequence[int] = DEFAULT_GRID,
                  precision_bits: int = 512) -> ConvergenceReport:
    """Probe the decay order of the residual sequence w_n of ``spec``.

    Evaluates d_n = n^k (w_n - w_{n+1}) over the grid.  The two largest grid
    points must agree within 10% unless the values decay cleanly to zero
    (the ``vanishing`` case, meaning k is below the true order); any other
    disagreement raises InconsistentTrend.
    """
    if k < 2:
        raise ValueError("need k >= 2")
    grid = tuple(int(n) for n in n_grid)
    if len(grid) < 3:
        raise ValueError("need at least three grid points")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")
    if grid[-1] < 1000:
        raise ValueError("largest grid point must be at least 1000")
    bits = precision_bits

    samples = []
    for n in grid:
        d_n = (_residual(spec, n, bits) - _residual(spec, n + 1, bits)) * mpq(n) ** k
        samples.append((n, d_n))

    (_, d_prev), (n_top, d_top) = samples[-2], samples[-1]
    m_prev, m_top = d_prev.mid(), d_top.mid()
    limit = d_top.pad(abs(m_top - m_prev))

    s_prev = _residual(spec, grid[-2], bits) * mpq(grid[-2]) ** (k - 1)
    s_top = _residual(spec, n_top, bits) * mpq(n_top) ** (k - 1)
    scaled = s_top.pad(abs(s_top.mid() - s_prev.mid()))

    vanishing = limit.contains_zero() or 2 * abs(m_top) <= abs(m_prev)
    if not vanishing:
        drift = abs(m_top - m_prev)
        if drift > TREND_TOLERANCE * max(abs(m_top), abs(m_prev)):
            raise InconsistentTrend(
                f"scaled differences at n={grid[-2]} and n={n_top} disagree by "
                f"more than 10% for order k={k}; try a different k")

    decided = not limit.contains_zero()
    consistent = None
    if decided:
        consistent = intervals_overlap(limit * mpq(1, k - 1), scaled)
    return ConvergenceReport(
        spec=spec, order_k=k, limit_estimate=limit,
        scaled_residual_limit=scaled, samples=tuple(samples),
        decided_nonzero=decided, vanishing=vanishing, consistent=consistent,
        precision_bits=bits)


@dataclass(frozen=True, slots=True)
class RankedCandidate:
    """One entry of a best-parameter ranking."""

    rank: int
    spec: ApproximantSpec
    first_nonzero_order: int | None
    report: ConvergenceReport | None


def best_parameter_check(candidates: Sequence[ApproximantSpec], order: int,
                         n_grid: Sequence[int] = DEFAULT_GRID,
                         precision_bits: int = 512) -> list[RankedCandidate]:
    """Rank candidates by how late their scaled differences stay nonzero.

    For each candidate the orders k = 2..order are probed in turn; the first
    k whose limit is decided nonzero is the candidate's convergence order.
    Candidates with a later first order rank first (they converge faster);
    ties break on the smaller |limit| midpoint.  A candidate still vanishing
    at ``order`` outranks every decided one.
    """
    if not candidates:
        raise ValueError("need at least one candidate")
    if order < 2:
        raise ValueError("need order >= 2")
    probed = []
    for spec in candidates:
        first_k = None
        report = None
        for k in range(2, order + 1):
            rate = estimate_rate(spec, k, n_grid, precision_bits)
            if rate.decided_nonzero and not rate.vanishing:
                first_k, report = k, rate
                break
        probed.append((spec, first_k, report))

    def sort_key(entry):
        _, first_k, report = entry
        effective = first_k if first_k is not None else order + 1
        magnitude = abs(report.limit_estimate.mid()) if report is not None else mpq(0)
        return (-effective, magnitude)

    ranked = sorted(probed, key=sort_key)
    return [RankedCandidate(rank, spec, first_k, report)
            for rank, (spec, first_k, report) in enumerate(ranked, start=1)]
