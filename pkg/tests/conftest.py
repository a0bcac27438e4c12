"""Shared helpers: exact conversion between mpmath values and rationals."""

from __future__ import annotations

from gmpy2 import mpq

from wallis import RealInterval


def mpf_to_mpq(x) -> mpq:
    """Exact rational value of an mpmath float."""
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return mpq(0)
    value = mpq(man) * (mpq(2) ** exp if exp >= 0 else mpq(1, 2 ** (-exp)))
    return -value if sign else value


def assert_encloses(iv: RealInterval, oracle, slack=mpq(1, 10**30)) -> None:
    """The enclosure, padded by the oracle's own error allowance, must contain
    the independently computed value."""
    target = mpf_to_mpq(oracle) if hasattr(oracle, "_mpf_") else mpq(oracle)
    padded = iv.pad(slack)
    assert padded.contains(target), (
        f"{target} not in [{padded.lo}, {padded.hi}] (unpadded width {iv.width()})")
