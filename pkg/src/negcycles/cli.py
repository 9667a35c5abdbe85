"""Command-line interface.

Usage:
    negcycles table --max-n 10 --format csv
    negcycles verify --max-n-counts 8 --max-n-lemma 6
    negcycles sample --group coset --n 50 --trials 1000000 --seed 3
    negcycles bound --max 1000000 --log-steps 13

Data goes to standard output, logs to standard error.  Exit codes: 0 all
checks passed, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import sys
import time

import click

from . import oracle
from .asymptotics import (
    Verdict,
    certify_upper_bound,
    decimal_string,
    log_grid,
    ratio_p_over_h,
)
from .counting import (
    ConsistencyError,
    count_all_negative_B,
    count_all_negative_coset,
    count_all_negative_D,
    count_all_positive_B,
    format_rational,
    proportion_p,
    proportion_p_minus,
    proportion_p_plus,
)
from .sampling import GroupSelector, estimate_proportion

__all__ = ["cli", "main"]

log = logging.getLogger("negcycles")

FORMATS = ("csv", "json", "pretty")
PRETTY_WIDTH = 40


def short_decimal(q) -> str:
    """15 significant digits, printed as the shortest float repr (``0.5``, ``0.0``)."""
    return repr(float(decimal_string(q, 15)))


def render(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    if not records:
        return ""
    columns = list(records[0])
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([rec[c] for c in columns])
        return buf.getvalue()
    cells = [[_clip(str(rec[c])) for c in columns] for rec in records]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _clip(text: str) -> str:
    if len(text) <= PRETTY_WIDTH:
        return text
    return f"{text[:12]}...({len(text)} chars)"


def _out(records: list[dict], fmt: str) -> None:
    sys.stdout.write(render(records, fmt))
    sys.stdout.flush()


format_option = click.option(
    "--format", "fmt", type=click.Choice(FORMATS), default="csv", show_default=True,
    help="Output format.",
)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("-v", "--verbose", is_flag=True, help="Log progress to standard error.")
def cli(verbose: bool) -> None:
    """Elements with only negative (or only positive) cycles in W(B_n) and W(D_n)."""
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


def table_rows(max_n: int) -> list[dict]:
    rows = []
    for n in range(1, max_n + 1):
        p, pp, pm = proportion_p(n), proportion_p_plus(n), proportion_p_minus(n)
        rows.append({
            "n": n,
            "count_neg_B": str(count_all_negative_B(n)),
            "count_neg_D": str(count_all_negative_D(n)),
            "count_neg_coset": str(count_all_negative_coset(n)),
            "count_pos_B": str(count_all_positive_B(n)),
            "p": format_rational(p),
            "p_plus": format_rational(pp),
            "p_minus": format_rational(pm),
            "p_dec": short_decimal(p),
            "p_plus_dec": short_decimal(pp),
            "p_minus_dec": short_decimal(pm),
        })
    return rows


@cli.command()
@click.option("--max-n", type=click.IntRange(min=1), default=10, show_default=True,
              help="Tabulate n = 1..max-n.")
@format_option
def table(max_n: int, fmt: str) -> None:
    """Exact counts and proportions for n = 1..max-n."""
    try:
        rows = table_rows(max_n)
    except ConsistencyError as exc:
        click.echo(f"consistency failure: {exc}", err=True)
        sys.exit(1)
    _out(rows, fmt)


def verify_records(max_n_counts: int, max_n_lemma: int) -> list[dict]:
    records = []
    for n in range(1, max_n_counts + 1):
        t0 = time.perf_counter()
        brute = oracle.brute_counts(n)
        formula = {
            "neg_B": count_all_negative_B(n),
            "neg_D": count_all_negative_D(n),
            "neg_coset": count_all_negative_coset(n),
            "pos_B": count_all_positive_B(n),
        }
        bad = [k for k, v in formula.items() if getattr(brute, k) != v]
        detail = " ".join(f"{k}={getattr(brute, k)}" for k in formula)
        if bad:
            detail += " mismatch " + " ".join(f"{k}:formula={formula[k]}" for k in bad)
        log.info("counts n=%d done in %.2fs", n, time.perf_counter() - t0)
        records.append({"check": "counts", "n": n, "status": "fail" if bad else "pass",
                        "detail": detail})
    for n in range(1, max_n_lemma + 1):
        failures: list = []
        ok = oracle.verify_lemma(n, failures=failures)
        detail = f"{math.factorial(n)} fibers" if ok else f"first failure {failures[0]}"
        records.append({"check": "lemma", "n": n, "status": "pass" if ok else "fail",
                        "detail": detail})
    for n in range(1, min(max_n_lemma, oracle.FLIP_CAP) + 1):
        failures = []
        ok = oracle.verify_flip_bijection(n, failures=failures)
        detail = "all sign classes" if ok else f"counterexample {failures[0]}"
        records.append({"check": "flip_bijection", "n": n,
                        "status": "pass" if ok else "fail", "detail": detail})
    return records


@cli.command()
@click.option("--max-n-counts", type=click.IntRange(min=1), default=oracle.COUNT_CAP,
              show_default=True, help=f"Brute-force counts for n <= this (cap {oracle.COUNT_CAP}).")
@click.option("--max-n-lemma", type=click.IntRange(min=1), default=oracle.LEMMA_CAP,
              show_default=True,
              help=f"Fiber checks for n <= this (cap {oracle.LEMMA_CAP}; "
                   f"flip bijection up to {oracle.FLIP_CAP}).")
@format_option
def verify(max_n_counts: int, max_n_lemma: int, fmt: str) -> None:
    """Compare formulas with brute-force enumeration."""
    if max_n_counts > oracle.COUNT_CAP:
        raise click.BadParameter(
            f"{max_n_counts} exceeds the enumeration cap {oracle.COUNT_CAP}",
            param_hint="--max-n-counts")
    if max_n_lemma > oracle.LEMMA_CAP:
        raise click.BadParameter(
            f"{max_n_lemma} exceeds the fiber-check cap {oracle.LEMMA_CAP}",
            param_hint="--max-n-lemma")
    try:
        records = verify_records(max_n_counts, max_n_lemma)
    except ConsistencyError as exc:
        click.echo(f"consistency failure: {exc}", err=True)
        sys.exit(1)
    _out(records, fmt)
    if any(r["status"] != "pass" for r in records):
        sys.exit(1)


@cli.command()
@click.option("--group", "selector", type=click.Choice([s.value for s in GroupSelector]),
              default="B", show_default=True, help="Sample from W(B_n), W(D_n) or the coset.")
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Rank.")
@click.option("--trials", type=click.IntRange(min=1), default=1_000_000, show_default=True)
@click.option("--seed", type=click.IntRange(min=0, max=2**64 - 1), default=0, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
              help="Threads; the report does not depend on this.")
@format_option
def sample(selector: str, n: int, trials: int, seed: int, workers: int, fmt: str) -> None:
    """Monte Carlo estimate of the only-negative proportion."""
    report = estimate_proportion(selector, n, trials, seed, workers=workers)
    _out([report.as_record()], fmt)
    if not abs(report.z_score) <= 5:
        log.warning("|z| = %s exceeds 5", report.z_score)
        sys.exit(1)


def bound_records(ns: list[int]) -> list[dict]:
    records = []
    for n in ns:
        report = certify_upper_bound(n)
        ratio = ratio_p_over_h(n)
        rec = report.as_record()
        rec["ratio_lower"] = decimal_string(ratio.lower, 20, "floor")
        rec["ratio_upper"] = decimal_string(ratio.upper, 20, "ceil")
        log.info("bound n=%d %s", n, report.verdict)
        records.append(rec)
    return records


@cli.command()
@click.option("--n", "ns", type=click.IntRange(min=1), multiple=True,
              help="Rank to certify; repeatable.")
@click.option("--max", "max_n", type=click.IntRange(min=1), default=None,
              help="Largest rank of a log-spaced grid starting at 1.")
@click.option("--log-steps", type=click.IntRange(min=1), default=13, show_default=True,
              help="Grid points when --max is given.")
@format_option
def bound(ns: tuple[int, ...], max_n: int | None, log_steps: int, fmt: str) -> None:
    """Certify p(n) < h(n) and enclose p(n)/h(n)."""
    points = sorted(set(ns))
    if max_n is not None:
        points = sorted(set(points) | set(log_grid(max_n, log_steps)))
    if not points:
        raise click.UsageError("give --n at least once or --max")
    records = bound_records(points)
    _out(records, fmt)
    if any(r["verdict"] != Verdict.CERTIFIED_TRUE.value for r in records):
        sys.exit(1)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
