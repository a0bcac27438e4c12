"""Command-line front end.

Four subcommands expose the library: ``table`` (approximation errors),
``coeffs`` (correction coefficients), ``verify`` (inequality certificates)
and ``rate`` (convergence-rate reports and parameter rankings).

Every command supports ``--format csv|json`` and ``--out PATH`` (stdout by
default).  JSON payloads are a single object::

    {"command": ..., "parameters": {...}, "rows": [...],
     "summary": {...}, "exit_semantics": {...}}

with exact rationals rendered as "p/q" strings and decimals as unpadded
scientific-notation strings such as "8.0124e-4", each certified to the stated
number of significant digits.  CSV output carries the same rows (header line,
UTF-8, LF endings), so decimal fields round-trip losslessly between the two
formats.  Output is byte-identical across runs: no timestamps, no run ids.

Exit codes: 0 pass, 1 violation, 2 undecidable/uncertified at the precision
cap, 3 inconsistent trend, 64 usage error.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from typing import Sequence

import click
from gmpy2 import mpq

from . import approximants, certify, series
from .approximants import FamilyA, FamilyBC
from .errors import DigitsNotCertified, InconsistentTrend
from .numerics import PrecisionPolicy, rational
from .rendering import format_scientific

EXIT_SEMANTICS = {
    "0": "pass",
    "1": "violated",
    "2": "undecidable or uncertified at precision cap",
    "3": "inconsistent trend",
    "64": "usage error",
}

#: Significant digits used for point renderings of interval endpoints.
ENDPOINT_DIGITS = 8


def _usage_error(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(64)


def _parse_rational(text: str, what: str) -> mpq:
    try:
        return rational(text.strip())
    except (ValueError, ZeroDivisionError, TypeError):
        _usage_error(f"malformed {what}: {text!r}")


def _payload(command: str, parameters: dict, rows: list[dict],
             summary: dict | None) -> dict:
    payload = {"command": command, "parameters": parameters, "rows": rows}
    if summary is not None:
        payload["summary"] = summary
    payload["exit_semantics"] = EXIT_SEMANTICS
    return payload


def _emit(payload: dict, fieldnames: Sequence[str], fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(fieldnames),
                                lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        writer.writerows(payload["rows"])
        text = buffer.getvalue()
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def csv_to_rows(text: str) -> list[dict[str, str]]:
    """Parse CSV emitted by this CLI back into row dictionaries."""
    return [dict(row) for row in csv.DictReader(io.StringIO(text))]


def _interval_fields(prefix: str, iv) -> dict[str, str]:
    return {
        f"{prefix}_lo": format_scientific(iv.lo, ENDPOINT_DIGITS),
        f"{prefix}_mid": format_scientific(iv.mid(), ENDPOINT_DIGITS),
        f"{prefix}_hi": format_scientific(iv.hi, ENDPOINT_DIGITS),
    }


_FORMAT = click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                       default="json", show_default=True, help="Output format.")
_OUT = click.option("--out", type=click.Path(dir_okay=False, writable=True),
                    default=None, help="Write output to a file instead of stdout.")


@click.group()
def main() -> None:
    """Wallis-ratio approximations: exact values, certified error tables,
    correction coefficients, convergence rates and inequality certificates."""


@main.command()
@click.option("--n", "ns", multiple=True, type=int,
              help="Row index n (repeatable); defaults to 50, 100, 250, 1000.")
@click.option("--precision-bits", default=256, show_default=True,
              help="Initial working precision.")
@click.option("--precision-cap", default=8192, show_default=True,
              help="Precision ceiling for digit certification.")
@click.option("--digits", default=5, show_default=True,
              help="Certified significant digits.")
@_FORMAT
@_OUT
def table(ns, precision_bits, precision_cap, digits, fmt, out) -> None:
    """Approximation errors W_n - chi_n and W_n - mu_n, digit-certified."""
    ns = tuple(ns) or approximants.DEFAULT_TABLE_NS
    if any(n < 2 for n in ns):
        _usage_error("table rows need n >= 2")
    if digits < 1:
        _usage_error("need at least one significant digit")
    if precision_bits < 16 or precision_cap < precision_bits:
        _usage_error("need 16 <= precision-bits <= precision-cap")
    try:
        rows_data = approximants.error_table(ns, precision_bits, digits, precision_cap)
    except DigitsNotCertified as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    rows = [{
        "n": row.n,
        "wallis_exact": str(row.wallis),
        "w_minus_chi": row.chi_text,
        "w_minus_mu": row.mu_text,
        "digits": row.digits,
    } for row in rows_data]
    parameters = {"ns": list(ns), "precision_bits": precision_bits,
                  "precision_cap": precision_cap, "digits": digits}
    summary = {"max_precision_used": max(row.precision_used for row in rows_data)}
    _emit(_payload("table", parameters, rows, summary),
          ["n", "wallis_exact", "w_minus_chi", "w_minus_mu", "digits"], fmt, out)


@main.command()
@click.option("--order", "-k", "order", default=6, show_default=True,
              help="Largest expansion index K; emits x_2..x_K and a_1..a_{K-1}.")
@_FORMAT
@_OUT
def coeffs(order, fmt, out) -> None:
    """Exact expansion coefficients x_k and solved correction coefficients a_k."""
    if order < 2:
        _usage_error("need --order >= 2")
    x = series.log_ratio_coeffs(order)
    a = series.solve_triangular(x)
    rows = [{
        "k": k,
        "x": str(x.coefficient(k)),
        "a_index": k - 1,
        "a": str(a.coefficient(k - 1)),
    } for k in range(2, order + 1)]
    sign = lambda k: 1 if k % 2 == 0 else -1
    round_trip = all(
        series.system_row(a.values, k) == sign(k) * x.coefficient(k)
        for k in range(2, order + 1))
    parameters = {"K": order}
    summary = {"round_trip": "pass" if round_trip else "fail"}
    _emit(_payload("coeffs", parameters, rows, summary),
          ["k", "x", "a_index", "a"], fmt, out)


_ALL_IDS = tuple(certify.Inequality)


@main.command()
@click.argument("ids", nargs=-1)
@click.option("--n-min", type=int, default=None,
              help="Start of the sweep; defaults to each inequality's domain start.")
@click.option("--n-max", type=int, default=10_000, show_default=True,
              help="End of the sweep.")
@click.option("--precision-bits", default=128, show_default=True,
              help="Initial working precision.")
@click.option("--precision-cap", default=8192, show_default=True,
              help="Precision ceiling before reporting undecidable.")
@_FORMAT
@_OUT
def verify(ids, n_min, n_max, precision_bits, precision_cap, fmt, out) -> None:
    """Certify inequalities over a range of n (IDS: inequality names or 'all')."""
    if not ids or [t.lower() for t in ids] == ["all"]:
        selected = list(_ALL_IDS)
    else:
        selected = []
        for token in ids:
            try:
                selected.append(certify.Inequality(token.upper()))
            except ValueError:
                _usage_error(f"unknown inequality {token!r}; choose from "
                             f"{', '.join(i.value for i in _ALL_IDS)} or 'all'")
    try:
        policy = PrecisionPolicy(precision_bits, precision_cap)
    except ValueError as exc:
        _usage_error(str(exc))
    rows = []
    summaries = []
    for ineq in selected:
        start = n_min if n_min is not None else ineq.min_n
        if start < ineq.min_n:
            _usage_error(f"{ineq.value} is asserted for n >= {ineq.min_n}, "
                         f"got --n-min {start}")
        if start > n_max:
            _usage_error(f"empty range {start}..{n_max} for {ineq.value}")
        report = certify.sweep(ineq, start, n_max, policy)
        rows.extend({
            "inequality": ineq.value,
            "n": n,
            "verdict": report.verdict_at(n).value,
        } for n in range(start, n_max + 1))
        counts = report.counts()
        summaries.append({
            "inequality": ineq.value,
            "n_min": start,
            "n_max": n_max,
            "summary": report.summary,
            "holds_strict": counts[certify.Verdict.HOLDS_STRICT],
            "holds_with_equality": counts[certify.Verdict.HOLDS_WITH_EQUALITY],
            "violated": counts[certify.Verdict.VIOLATED],
            "undecidable": counts[certify.Verdict.UNDECIDABLE],
            "equality_points": list(report.equality_points()),
            "max_precision_used": report.max_precision_used,
        })
    any_violated = any(s["violated"] for s in summaries)
    any_undecidable = any(s["undecidable"] for s in summaries)
    overall = ("violated" if any_violated
               else "undecidable" if any_undecidable else "pass")
    parameters = {"ids": [i.value for i in selected], "n_min": n_min,
                  "n_max": n_max, "precision_bits": precision_bits,
                  "precision_cap": precision_cap}
    summary = {"overall": overall, "per_inequality": summaries}
    _emit(_payload("verify", parameters, rows, summary),
          ["inequality", "n", "verdict"], fmt, out)
    if any_violated:
        sys.exit(1)
    if any_undecidable:
        sys.exit(2)


def _candidate_label(spec) -> str:
    if isinstance(spec, FamilyA):
        return f"a={spec.a}"
    return f"b={spec.b},c={spec.c}"


@main.command()
@click.option("--family", type=click.Choice(["a", "bc"]), required=True,
              help="Parameter family: 'a' (sqrt shift) or 'bc' (base/exponent shifts).")
@click.option("--param", "params", multiple=True, required=True,
              help="Parameter value: a rational like -1/2 for family 'a', "
                   "or a pair like 1/3,1/3 for family 'bc' (repeat to rank).")
@click.option("--order", "-k", "order", default=2, show_default=True,
              help="Decay order k to probe (max order when ranking).")
@click.option("--grid", default="100,1000,10000,100000", show_default=True,
              help="Comma-separated sample grid.")
@click.option("--precision-bits", default=512, show_default=True)
@_FORMAT
@_OUT
def rate(family, params, order, grid, precision_bits, fmt, out) -> None:
    """Convergence-rate report for one parameter choice, or a ranking of several."""
    if order < 2:
        _usage_error("need --order >= 2")
    if precision_bits < 16:
        _usage_error("need precision-bits >= 16")
    try:
        n_grid = tuple(int(tok) for tok in grid.split(","))
    except ValueError:
        _usage_error(f"malformed grid {grid!r}")
    candidates = []
    for token in params:
        if family == "a":
            candidates.append(FamilyA(_parse_rational(token, "parameter")))
        else:
            parts = token.split(",")
            if len(parts) != 2:
                _usage_error(f"family 'bc' takes b,c pairs, got {token!r}")
            candidates.append(FamilyBC(_parse_rational(parts[0], "parameter b"),
                                       _parse_rational(parts[1], "parameter c")))
    parameters = {"family": family,
                  "candidates": [_candidate_label(c) for c in candidates],
                  "order": order, "grid": list(n_grid),
                  "precision_bits": precision_bits,
                  "endpoint_digits": ENDPOINT_DIGITS}

    try:
        if len(candidates) == 1:
            spec = candidates[0]
            report = series.estimate_rate(spec, order, n_grid, precision_bits)
            rows = [{
                "candidate": _candidate_label(spec),
                "order_k": report.order_k,
                "n": n,
                **_interval_fields("scaled_difference", value),
            } for n, value in report.samples]
            summary = {
                "candidate": _candidate_label(spec),
                "order_k": report.order_k,
                **_interval_fields("limit", report.limit_estimate),
                **_interval_fields("scaled_residual", report.scaled_residual_limit),
                "decided_nonzero": report.decided_nonzero,
                "vanishing": report.vanishing,
            }
            if report.vanishing:
                summary["note"] = "vanishes; try k+1"
            if report.consistent is not None:
                summary["limit_consistency"] = "pass" if report.consistent else "fail"
            fieldnames = ["candidate", "order_k", "n",
                          "scaled_difference_lo", "scaled_difference_mid",
                          "scaled_difference_hi"]
        else:
            ranking = series.best_parameter_check(candidates, order, n_grid,
                                                  precision_bits)
            rows = []
            for entry in ranking:
                row = {
                    "rank": entry.rank,
                    "candidate": _candidate_label(entry.spec),
                    "first_nonzero_order": entry.first_nonzero_order,
                }
                if entry.report is not None:
                    row.update(_interval_fields("limit", entry.report.limit_estimate))
                else:
                    row.update({"limit_lo": "", "limit_mid": "", "limit_hi": ""})
                rows.append(row)
            summary = {"best": rows[0]["candidate"], "max_order_probed": order}
            fieldnames = ["rank", "candidate", "first_nonzero_order",
                          "limit_lo", "limit_mid", "limit_hi"]
    except InconsistentTrend as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    except ValueError as exc:
        _usage_error(str(exc))

    _emit(_payload("rate", parameters, rows, summary), fieldnames, fmt, out)


if __name__ == "__main__":
    main()
