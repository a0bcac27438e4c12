"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines; every tolerance and runtime bound is asserted in the test body.
"""

import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction

from click.testing import CliRunner
from gmpy2 import is_odd, mpq

from wallis import (
    FamilyA,
    FamilyBC,
    Inequality,
    PrecisionPolicy,
    SECOND_DERIVATIVE_NUMERATORS,
    Verdict,
    best_parameter_check,
    difference_consistency,
    enclose_rational,
    estimate_rate,
    exp,
    ln,
    log_ratio_coeffs,
    poly_nonneg_certificate,
    second_derivative_value,
    solve_triangular,
    sweep,
    verify_log_ratio,
    wallis_exact,
    wallis_range,
)
from wallis.certify import PolyCertificate
from wallis.cli import main
from wallis.series import system_row


@contextmanager
def criterion(label):
    started = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {label}: FAIL ({time.monotonic() - started:.1f}s)")
        raise
    print(f"ACCEPTANCE {label}: PASS ({time.monotonic() - started:.1f}s)")


def test_criterion_1_coefficient_exactness():
    with criterion("1 coefficient exactness"):
        started = time.monotonic()
        result = CliRunner().invoke(main, ["coeffs", "--order", "6"])
        elapsed = time.monotonic() - started
        assert result.exit_code == 0
        rows = json.loads(result.output)["rows"]
        assert [row["a"] for row in rows] == ["0", "1/24", "1/48", "1/160", "1/960"]
        assert elapsed < 1.0, f"coeffs took {elapsed:.2f}s"


def test_criterion_2_error_table_regression():
    with criterion("2 error-table regression"):
        started = time.monotonic()
        result = CliRunner().invoke(main, [
            "table", "--precision-bits", "256", "--precision-cap", "512"])
        elapsed = time.monotonic() - started
        assert result.exit_code == 0
        payload = json.loads(result.output)
        got = {row["n"]: (row["w_minus_chi"], row["w_minus_mu"])
               for row in payload["rows"]}
        assert got == {
            50: ("8.0124e-4", "4.4198e-9"),
            100: ("2.8269e-4", "3.9124e-10"),
            250: ("7.1425e-5", "1.5850e-11"),
            1000: ("8.9225e-6", "1.2388e-13"),
        }
        assert payload["summary"]["max_precision_used"] <= 512
        assert elapsed < 10.0, f"table took {elapsed:.2f}s"


def test_criterion_3_inequality_sweeps():
    with criterion("3 inequality sweeps to 10^4"):
        started = time.monotonic()
        policy = PrecisionPolicy(128, 1024)
        for ineq in Inequality:
            report = sweep(ineq, ineq.min_n, 10_000, policy)
            counts = report.counts()
            assert report.passed, ineq
            assert counts[Verdict.UNDECIDABLE] == 0, ineq
            assert report.max_precision_used <= 1024, ineq
            if ineq is Inequality.U_UPPER:
                assert report.equality_points() == (2,)
            else:
                assert counts[Verdict.HOLDS_WITH_EQUALITY] == 0, ineq
        elapsed = time.monotonic() - started
        assert elapsed < 300.0, f"sweeps took {elapsed:.1f}s"


def test_criterion_4_rate_limits():
    with criterion("4 rate limits on grids to 10^5"):
        grid = (100, 1000, 10_000, 100_000)
        report = estimate_rate(FamilyA(1), 2, grid, 512)
        assert abs(report.limit_estimate.mid() - mpq(-1, 2)) <= mpq(1, 1000)

        report = estimate_rate(FamilyA(0), 3, grid, 512)
        assert abs(report.limit_estimate.mid() - mpq(1, 12)) <= mpq(1, 1000)
        assert abs(report.scaled_residual_limit.mid() - mpq(1, 24)) <= mpq(1, 1000)

        report = estimate_rate(FamilyBC(mpq(1, 3), mpq(1, 3)), 4, grid, 512)
        assert abs(report.limit_estimate.mid() - mpq(1, 48)) <= mpq(1, 100)
        assert abs(report.scaled_residual_limit.mid() - mpq(1, 144)) <= mpq(1, 100)


def test_criterion_5_best_parameter_rankings():
    with criterion("5 best-parameter rankings"):
        a_candidates = [FamilyA(a) for a in (-1, mpq(-1, 2), 0, mpq(1, 2), 1)]
        ranking = best_parameter_check(a_candidates, 3)
        assert ranking[0].spec == FamilyA(0)

        bc_candidates = [FamilyBC(*bc) for bc in
                         ((mpq(1, 3), mpq(1, 3)), (0, 0),
                          (mpq(1, 2), mpq(1, 2)), (mpq(1, 3), 0))]
        ranking = best_parameter_check(bc_candidates, 4)
        assert ranking[0].spec == FamilyBC(mpq(1, 3), mpq(1, 3))


def test_criterion_6_proof_certificates():
    with criterion("6 proof certificates"):
        for poly in SECOND_DERIVATIVE_NUMERATORS.values():
            assert poly_nonneg_certificate(poly) is PolyCertificate.ALL_COEFFS_NONNEGATIVE

        rng = random.Random(2024)
        for _ in range(100):
            den = rng.randint(1, 10**6)
            num = rng.randint(den, 10**6 * den)
            x = mpq(num, den)          # exact rational in [1, 10^6]
            assert second_derivative_value("s", x) > 0
            assert second_derivative_value("p", x) > 0
            assert second_derivative_value("q", x) < 0

        for which in ("s", "p", "q"):
            for n in range(1, 101):
                assert difference_consistency(which, n, 256).contains_zero(), (which, n)


def test_criterion_7_property_suites():
    with criterion("7 property suites"):
        # enclosure containment for 1000 random rationals
        rng = random.Random(7)
        for _ in range(1000):
            q = Fraction(rng.randint(-10**9, 10**9), rng.randint(1, 10**9))
            bits = rng.choice((16, 32, 64, 128, 256))
            assert enclose_rational(q, bits).contains(mpq(q.numerator, q.denominator))

        # Wallis invariants: odd numerator, power-of-two denominator, recurrence
        for n, w in wallis_range(1, 500):
            assert is_odd(w.numerator)
            assert w.denominator & (w.denominator - 1) == 0
            assert w * mpq(2 * n + 1, 2 * n + 2) == wallis_exact(n + 1)

        # round trip of the triangular system up to K = 16
        x = log_ratio_coeffs(16)
        a = solve_triangular(x)
        for k in range(2, 17):
            sign = 1 if k % 2 == 0 else -1
            assert system_row(a.values, k) == sign * x.coefficient(k)

        # log-ratio defect decays like 2^(K+1) when n doubles
        for K in (2, 4, 6):
            ratio = abs(verify_log_ratio(K, 100, 512).mid()
                        / verify_log_ratio(K, 200, 512).mid())
            assert mpq(2) ** (K + 1) / 2 <= ratio <= mpq(2) ** (K + 1) * 2

        # exp/ln round trip on a deterministic sample of positive rationals
        for _ in range(200):
            q = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
            x = enclose_rational(q, 128)
            assert exp(ln(x)).contains(mpq(q.numerator, q.denominator))
