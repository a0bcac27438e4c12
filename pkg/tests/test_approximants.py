"""Approximant families, log residuals, and the certified error table."""

import mpmath
import pytest
from gmpy2 import mpq
from mpmath import mp

from conftest import assert_encloses
from wallis import (
    Chi,
    CoefficientSource,
    Corrected,
    DomainError,
    FamilyA,
    FamilyBC,
    Mu,
    Ordering,
    SeriesCoefficients,
    compare,
    correction_sum,
    enclose_rational,
    error_table,
    evaluate,
    residual,
    wallis_exact,
)

DEFAULT_COEFFS = SeriesCoefficients(
    (0, mpq(1, 24), mpq(1, 48), mpq(1, 160), mpq(1, 960)))


def _mp_wallis(n):
    return mpmath.binomial(2 * n, n) / mpmath.mpf(4) ** n


def _mp_value(spec, n):
    root = mpmath.sqrt(mpmath.e / mpmath.pi)
    if isinstance(spec, Chi):
        spec = FamilyA(-1)
    if isinstance(spec, FamilyA):
        a = mpmath.mpf(spec.a.numerator) / mpmath.mpf(spec.a.denominator)
        return root * (1 - mpmath.mpf(1) / (2 * n)) ** n * mpmath.sqrt(n + a) / n
    if isinstance(spec, Mu):
        spec = FamilyBC(mpq(1, 3), mpq(1, 3))
    if isinstance(spec, FamilyBC):
        b = mpmath.mpf(spec.b.numerator) / mpmath.mpf(spec.b.denominator)
        c = mpmath.mpf(spec.c.numerator) / mpmath.mpf(spec.c.denominator)
        return root * (1 - 1 / (2 * (n + b))) ** (n + c) / mpmath.sqrt(n)
    corr = sum(mpmath.mpf(v.numerator) / mpmath.mpf(v.denominator) / mpmath.mpf(n) ** k
               for k, v in enumerate(spec.coeffs.values, start=1))
    return _mp_value(FamilyA(0), n) * mpmath.exp(corr)


class TestEvaluate:
    def test_chi_at_one_is_zero(self):
        iv = evaluate(Chi(), 1, 128)
        assert iv.is_point() and iv.lo == 0

    def test_chi_equals_family_a_minus_one(self):
        for n in range(2, 201):
            chi = evaluate(Chi(), n, 128)
            fam = evaluate(FamilyA(-1), n, 128)
            assert chi.lo == fam.lo and chi.hi == fam.hi

    def test_mu_is_family_bc_one_third(self):
        for n in (1, 2, 17, 100):
            for bits in (128, 256):
                mu = evaluate(Mu(), n, bits)
                bc = evaluate(FamilyBC(mpq(1, 3), mpq(1, 3)), n, bits)
                assert mu.lo == bc.lo and mu.hi == bc.hi and mu.precision == bc.precision

    def test_mu_at_one_oracle(self):
        # oracle: direct high-precision evaluation of sqrt(e/pi) (5/8)^(4/3)
        mp.prec = 300
        oracle = mpmath.sqrt(mpmath.e / mpmath.pi) * mpmath.mpf(0.625) ** (mpmath.mpf(4) / 3)
        iv = evaluate(Mu(), 1, 256)
        assert_encloses(iv, oracle, slack=mpq(1, 2**290))
        assert iv.hi < mpq(1, 2)  # sanity: below W_1 = 1/2

    @pytest.mark.parametrize("spec", [
        Chi(), FamilyA(0), FamilyA(mpq(-1, 2)), FamilyA(3),
        Mu(), FamilyBC(mpq(1, 2), mpq(-1, 4)), Corrected(DEFAULT_COEFFS),
    ])
    @pytest.mark.parametrize("n", [2, 7, 50])
    def test_matches_high_precision_oracle(self, spec, n):
        mp.prec = 400
        assert_encloses(evaluate(spec, n, 256), _mp_value(spec, n), slack=mpq(1, 2**350))

    def test_corrected_stays_below_wallis(self):
        spec = Corrected(DEFAULT_COEFFS)
        for n in (1, 2, 3, 10, 50, 500, 2000):
            order = compare(evaluate(spec, n, 256),
                            enclose_rational(wallis_exact(n), 256))
            assert order is Ordering.LESS, n

    def test_family_a_domain(self):
        with pytest.raises(DomainError):
            evaluate(FamilyA(-2), 1, 128)
        with pytest.raises(DomainError):
            evaluate(FamilyA(-2), 2, 128)
        assert evaluate(FamilyA(-2), 3, 128).lo > 0

    def test_family_bc_domain(self):
        with pytest.raises(DomainError):
            evaluate(FamilyBC(mpq(-1, 2), 0), 1, 128)
        assert evaluate(FamilyBC(mpq(-1, 4), 0), 1, 128).lo > 0

    def test_rejects_bad_n(self):
        with pytest.raises(DomainError):
            evaluate(Mu(), 0, 128)


class TestResidual:
    def test_family_a0_positive_at_one(self):
        # W_1 = 1/2 exceeds sqrt(e/pi)/2 ~ 0.4651, so the residual is positive
        mp.prec = 300
        iv = residual(FamilyA(0), 1, 256)
        assert iv.lo > 0
        oracle = mpmath.log(mpmath.mpf(0.5)) - mpmath.log(mpmath.sqrt(mpmath.e / mpmath.pi) / 2)
        assert_encloses(iv, oracle, slack=mpq(1, 2**280))

    def test_chi_at_one_rejected(self):
        with pytest.raises(DomainError):
            residual(Chi(), 1, 128)

    def test_family_a_minus_one_near_half_over_n(self):
        # n z_n -> 1/2 for the sqrt(n-1) family, so z_50 is near 1/100
        iv = residual(FamilyA(-1), 50, 256)
        mp.prec = 300
        oracle = mpmath.log(mpf_fraction(wallis_exact(50))) - mpmath.log(_mp_value(FamilyA(-1), 50))
        assert_encloses(iv, oracle, slack=mpq(1, 2**280))
        assert abs(iv.mid() - mpq(1, 100)) < mpq(2, 10000)

    def test_mu_residual_sandwich(self):
        # 0 < ln W_n - ln mu_n < 1/(144 n^3) for n = 1..100
        for n in range(1, 101):
            iv = residual(Mu(), n, 256)
            assert iv.lo > 0, n
            assert iv.hi < mpq(1, 144 * mpq(n) ** 3), n

    def test_mu_residual_decay_at_100(self):
        iv = residual(Mu(), 100, 256) * mpq(100) ** 3
        assert abs(iv.mid() - mpq(1, 144)) < mpq(1, 100)


class TestSeriesCoefficients:
    def test_validation(self):
        with pytest.raises(ValueError):
            SeriesCoefficients(())
        coeffs = SeriesCoefficients((0, mpq(1, 24)))
        assert coeffs.order == 2
        assert coeffs.coefficient(2) == mpq(1, 24)
        with pytest.raises(IndexError):
            coeffs.coefficient(3)
        assert coeffs.source is CoefficientSource.SUPPLIED

    def test_correction_sum(self):
        coeffs = SeriesCoefficients((1, mpq(1, 2)))
        assert correction_sum(coeffs, 2) == mpq(1, 2) + mpq(1, 8)
        with pytest.raises(DomainError):
            correction_sum(coeffs, 0)


class TestErrorTable:
    def test_reference_values(self):
        rows = error_table((50, 100, 250, 1000), 256, 5)
        table = {row.n: (row.chi_text, row.mu_text) for row in rows}
        assert table[50] == ("8.0124e-4", "4.4198e-9")
        assert table[100] == ("2.8269e-4", "3.9124e-10")
        assert table[250] == ("7.1425e-5", "1.5850e-11")
        assert table[1000] == ("8.9225e-6", "1.2388e-13")
        assert all(row.digits == 5 for row in rows)

    def test_exact_column_and_flags(self):
        rows = error_table((1, 2), 128, 5)
        assert rows[0].chi_degenerate and not rows[1].chi_degenerate
        assert rows[1].wallis == mpq(3, 8)
        # at n = 1 the first family vanishes, so the error equals W_1 = 1/2
        assert rows[0].chi_diff.contains(mpq(1, 2))
        assert rows[0].chi_text == "5.0000e-1"

    def test_enclosures_contain_true_difference(self):
        mp.prec = 400
        rows = error_table((50,), 256, 5)
        w = _mp_wallis(50)
        assert_encloses(rows[0].chi_diff, w - _mp_value(Chi(), 50), slack=mpq(1, 2**350))
        assert_encloses(rows[0].mu_diff, w - _mp_value(Mu(), 50), slack=mpq(1, 2**350))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            error_table(())


def mpf_fraction(q):
    return mpmath.mpf(q.numerator) / mpmath.mpf(q.denominator)
