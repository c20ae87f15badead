"""Command line interface.

Set files are JSON objects with an "intervals" key: a list of
[lo, hi] pairs given as exact fraction or decimal strings.  All
reports print canonical JSON (sorted keys, compact separators) or CSV
via --out csv.  Exit code 0 means every internal assertion and checked
inequality passed; a missing witness inside the hypothesis region, a
violated bound, or a failed identity exits 1.  Verbosity is controlled
by the SUMSET_LOG environment variable (debug, info, warning, error).
"""

from __future__ import annotations

import json
import logging
import os
import sys
from fractions import Fraction
from typing import Any

import click

from . import serialize
from .harness import InstanceSpec, run_corpus, tightness_sweep
from .intervals import IntervalSet, minkowski_sum
from .ruzsa import dichotomy_bound, refined_bound_check, ruzsa_bound
from .structure import (
    StructureParams,
    build_extremal_family,
    build_floors,
    extremal_base,
    normalize_pair,
    verify_main_theorem,
)
from .torus import level_sets


def _setup_logging() -> None:
    level_name = os.environ.get("SUMSET_LOG", "warning").lower()
    level = {
        "debug": logging.DEBUG,
        "info": logging.INFO,
        "warning": logging.WARNING,
        "error": logging.ERROR,
    }.get(level_name, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _emit(obj: dict[str, Any], out: str, csv_rows: list[dict[str, Any]] | None = None) -> None:
    if out == "csv":
        rows = csv_rows if csv_rows is not None else [obj]
        click.echo(serialize.rows_to_csv(rows), nl=False)
    else:
        click.echo(serialize.dumps(obj))


def _load_set(path: str) -> IntervalSet:
    try:
        return serialize.load_interval_set(path)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise click.ClickException(f"cannot read interval set from {path}: {exc}")


out_option = click.option(
    "--out", type=click.Choice(["json", "csv"]), default="json", show_default=True
)


@click.group()
def main() -> None:
    """Exact sumset analysis: measures, level decompositions, lower
    bounds, and near-equality structure checks."""
    _setup_logging()


@main.command()
@click.argument("set_file", type=click.Path(exists=True, dir_okay=False))
@out_option
def measure(set_file: str, out: str) -> None:
    """Measure, diameter, and component count of a set."""
    s = _load_set(set_file)
    obj = {
        "components": len(s),
        "measure": serialize.scalar(s.measure),
        "diameter": None if s.is_empty else serialize.scalar(s.diameter),
        "set": serialize.interval_set_to_obj(s),
    }
    _emit(obj, out)


@main.command()
@click.argument("a_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("b_file", type=click.Path(exists=True, dir_okay=False))
@out_option
def sumset(a_file: str, b_file: str, out: str) -> None:
    """Exact Minkowski sum of two sets."""
    a, b = _load_set(a_file), _load_set(b_file)
    if a.is_empty or b.is_empty:
        raise click.ClickException("both sets must be nonempty")
    s = minkowski_sum(a, b)
    superadditive = s.measure >= a.measure + b.measure
    obj = {
        "sum": serialize.interval_set_to_obj(s),
        "measure_a": serialize.scalar(a.measure),
        "measure_b": serialize.scalar(b.measure),
        "measure_sum": serialize.scalar(s.measure),
        "superadditive": superadditive,
    }
    _emit(obj, out)
    if not superadditive:
        sys.exit(1)


@main.command()
@click.argument("set_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--period", required=True, help="period of the circle, e.g. 3/2")
@out_option
def decompose(set_file: str, period: str, out: str) -> None:
    """Level decomposition of a set periodized onto a circle."""
    s = _load_set(set_file)
    try:
        dec = level_sets(s, serialize.parse_fraction(period))
    except (ValueError, ZeroDivisionError) as exc:
        raise click.ClickException(str(exc))
    obj = serialize.decomposition_to_obj(dec)
    _emit(obj, out)
    if obj["residual"]["fraction"] != "0":
        sys.exit(1)


@main.command("check-ruzsa")
@click.argument("a_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("b_file", type=click.Path(exists=True, dir_okay=False))
@out_option
def check_ruzsa(a_file: str, b_file: str, out: str) -> None:
    """Check the sumset lower bounds on a pair of sets."""
    a, b = _load_set(a_file), _load_set(b_file)
    try:
        rz = ruzsa_bound(a, b)
        dich = dichotomy_bound(a, b)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    refined_obj: dict[str, Any] | None = None
    refined_ok = True
    if b.diameter > 0:
        na, nb, _ = normalize_pair(a, b)
        refined = refined_bound_check(na, nb)
        refined_ok = refined.holds is not False
        refined_obj = {
            "applicable": refined.applicable,
            "k_a": refined.k_a,
            "depth_matches_split": refined.depth_matches_split,
            "bound": None if refined.bound is None else serialize.scalar(refined.bound),
            "sum_measure": serialize.scalar(refined.sum_measure),
            "holds": refined.holds,
        }
    obj = {
        "ruzsa": {
            "k": rz.split.k,
            "delta": serialize.scalar(rz.split.delta),
            "diam_b": serialize.scalar(rz.diam_b),
            "bound": serialize.scalar(rz.bound),
            "sum_measure": serialize.scalar(rz.sum_measure),
            "holds": rz.holds,
            "tight": rz.tight,
        },
        "dichotomy": {
            "k": dich.k,
            "branch": dich.branch,
            "bound": serialize.scalar(dich.bound),
            "sum_measure": serialize.scalar(dich.sum_measure),
            "holds": dich.holds,
            "tight": dich.tight,
        },
        "refined": refined_obj,
    }
    _emit(obj, out)
    if not (rz.holds and dich.holds and refined_ok):
        sys.exit(1)


@main.command("check-structure")
@click.argument("a_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("b_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--explore", is_flag=True, help="attempt conclusions even when hypotheses fail")
@out_option
def check_structure(a_file: str, b_file: str, explore: bool, out: str) -> None:
    """Run the full near-equality rigidity pipeline on a pair."""
    a, b = _load_set(a_file), _load_set(b_file)
    try:
        report = verify_main_theorem(a, b, explore=explore)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    _emit(report.to_obj(), out)
    if report.overall == "fail":
        sys.exit(1)


@main.command("generate-extremal")
@click.option("--k", type=int, required=True)
@click.option("--delta", required=True, help="fractional part parameter, e.g. 1/2")
@click.option("--b", "b_str", required=True, help="measure of the companion set, e.g. 1/5")
@click.option("--eps", default="0", show_default=True, help="total excess")
@click.option("--eps-prime", default="0", show_default=True, help="right-protrusion share")
@click.option("--i", "floor_i", type=int, default=1, show_default=True, help="deformed floor")
@out_option
def generate_extremal(
    k: int, delta: str, b_str: str, eps: str, eps_prime: str, floor_i: int, out: str
) -> None:
    """Build a member of the extremal family and check its excess."""
    try:
        params = StructureParams(
            k=k,
            delta=serialize.parse_fraction(delta),
            b=serialize.parse_fraction(b_str),
            b_plus=serialize.parse_fraction(b_str),
            b_minus=Fraction(0),
        )
        epsilon = serialize.parse_fraction(eps)
        member = build_extremal_family(params, epsilon, serialize.parse_fraction(eps_prime), floor_i)
        base = extremal_base(params)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    s = minkowski_sum(member, base)
    expected = member.measure + (k + params.delta + epsilon) * params.b
    residual = s.measure - expected
    floors = build_floors(params)
    obj = {
        "a": serialize.interval_set_to_obj(member),
        "b": serialize.interval_set_to_obj(base),
        "floor_structure": serialize.interval_set_to_obj(floors),
        "measure_a": serialize.scalar(member.measure),
        "measure_b": serialize.scalar(base.measure),
        "measure_sum": serialize.scalar(s.measure),
        "excess_residual": serialize.scalar(residual),
    }
    _emit(obj, out)
    if residual != 0:
        sys.exit(1)


def _load_spec(path: str) -> tuple[InstanceSpec, dict[str, Any]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        return InstanceSpec.from_obj(obj), obj
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise click.ClickException(f"cannot read instance spec from {path}: {exc}")


@main.command()
@click.option("--spec", "spec_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("-n", "count", type=int, default=100, show_default=True)
@click.option("--explore", is_flag=True)
@out_option
def corpus(spec_file: str, count: int, explore: bool, out: str) -> None:
    """Generate and verify a deterministic corpus of instances."""
    spec, _ = _load_spec(spec_file)
    result = run_corpus(spec, count, explore=explore)
    if out == "csv":
        click.echo(result.to_csv(), nl=False)
    else:
        click.echo(result.to_json_bytes().decode("utf-8"))
    agg = result.aggregates
    hard_failures = (
        agg["ruzsa_violations"]
        + agg["dichotomy_violations"]
        + agg["reflection_mismatches"]
        + agg["overall"].get("fail", 0)
    )
    if agg["max_split_residual"]["fraction"] != "0" or hard_failures:
        sys.exit(1)


@main.command()
@click.option("--spec", "spec_file", required=True, type=click.Path(exists=True, dir_okay=False))
@out_option
def sweep(spec_file: str, out: str) -> None:
    """Tightness sweep over an excess grid given in the spec file."""
    spec, obj = _load_spec(spec_file)
    grid = obj.get("epsilon_grid")
    if not grid:
        raise click.ClickException('the spec file must provide a nonempty "epsilon_grid"')
    result = tightness_sweep(spec, [serialize.parse_fraction(g) for g in grid])
    if out == "csv":
        click.echo(result.to_csv(), nl=False)
    else:
        click.echo(result.to_json_bytes().decode("utf-8"))


if __name__ == "__main__":
    main()
