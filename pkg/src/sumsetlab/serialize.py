"""Exact JSON and CSV encodings shared by the library and the CLI.

Every scalar is emitted as an object with two views: the exact
fraction string, and a decimal rendering for human readers.  The
decimal view is rounded (round half to even on the last kept digit)
and deterministic, so serialized reports are byte-stable across runs
and platforms.  Parsing accepts fraction strings, integers, and
decimal literals, all converted exactly.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .intervals import IntervalSet, RatLike, as_fraction
from .torus import LevelDecomposition, TorusSet

DECIMAL_DIGITS = 12


def fraction_to_str(x: Fraction) -> str:
    return str(x)


def decimal_str(x: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    """Deterministic decimal rendering with `digits` significant digits.

    Uses plain notation for moderate magnitudes and scientific notation
    otherwise, so values near the 10^-1549 scale stay readable.
    """
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    num, den = abs(x.numerator), x.denominator
    # Decimal exponent such that 10^exp <= |x| < 10^(exp+1).  The digit
    # count difference is off by at most one; fix with one exact test.
    exp = len(str(num)) - len(str(den))
    too_big = den * 10**exp > num if exp >= 0 else den > num * 10 ** (-exp)
    if too_big:
        exp -= 1
    # Round num/den to `digits` significant digits (half to even).
    shift = digits - 1 - exp
    if shift >= 0:
        divisor = den
        q, r = divmod(num * 10**shift, divisor)
    else:
        divisor = den * 10 ** (-shift)
        q, r = divmod(num, divisor)
    if 2 * r > divisor or (2 * r == divisor and q % 2 == 1):
        q += 1
    mantissa = str(q)
    if len(mantissa) > digits:
        # Rounding carried over, e.g. 999...9 -> 1000...0.
        mantissa = mantissa[:digits]
        exp += 1
    mantissa = mantissa.rstrip("0") or "0"
    if -4 <= exp < digits + 4:
        int_digits = exp + 1
        if int_digits <= 0:
            body = "0." + "0" * (-int_digits) + mantissa
        elif len(mantissa) <= int_digits:
            body = mantissa + "0" * (int_digits - len(mantissa))
        else:
            body = mantissa[:int_digits] + "." + mantissa[int_digits:]
        return sign + body
    if len(mantissa) > 1:
        mantissa = mantissa[0] + "." + mantissa[1:]
    return f"{sign}{mantissa}e{exp}"


def scalar(x: RatLike) -> dict[str, str]:
    x = as_fraction(x)
    return {"fraction": fraction_to_str(x), "decimal": decimal_str(x)}


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}")


def interval_set_to_obj(s: IntervalSet) -> dict[str, Any]:
    return {"intervals": [[str(c.lo), str(c.hi)] for c in s.components]}


def interval_set_from_obj(obj: Mapping[str, Any]) -> IntervalSet:
    if "intervals" not in obj:
        raise ValueError('expected an object with an "intervals" key')
    pairs = [(parse_fraction(lo), parse_fraction(hi)) for lo, hi in obj["intervals"]]
    from .intervals import normalize

    return normalize(pairs)


def torus_set_to_obj(t: TorusSet) -> dict[str, Any]:
    return {
        "period": str(t.period),
        "intervals": [[str(c.lo), str(c.hi)] for c in t.components.components],
    }


def decomposition_to_obj(d: LevelDecomposition) -> dict[str, Any]:
    return {
        "period": str(d.period),
        "k_max": d.k_max,
        "levels": [torus_set_to_obj(t) for t in d.levels],
        "level_measures": [scalar(m) for m in d.level_measures],
        "source_measure": scalar(d.source_measure),
        "residual": scalar(d.source_measure - sum(d.level_measures, Fraction(0))),
    }


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, no whitespace, ASCII-safe."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def dump_bytes(obj: Any) -> bytes:
    return dumps(obj).encode("utf-8")


def load_interval_set(path: str) -> IntervalSet:
    with open(path, "r", encoding="utf-8") as fh:
        return interval_set_from_obj(json.load(fh))


def _flatten(prefix: str, value: Any, row: dict[str, str]) -> None:
    if isinstance(value, Mapping):
        if set(value.keys()) == {"fraction", "decimal"}:
            row[prefix] = value["fraction"]
            return
        for k in sorted(value.keys()):
            _flatten(f"{prefix}.{k}" if prefix else str(k), value[k], row)
    elif isinstance(value, (list, tuple)):
        row[prefix] = dumps(value)
    elif value is None:
        row[prefix] = ""
    else:
        row[prefix] = str(value)


def rows_to_csv(rows: Sequence[Mapping[str, Any]]) -> str:
    """Flatten a list of JSON-ish row objects to CSV text with a stable
    header: the sorted union of flattened keys."""
    flat_rows: list[dict[str, str]] = []
    for r in rows:
        flat: dict[str, str] = {}
        _flatten("", r, flat)
        flat_rows.append(flat)
    fields = sorted({k for r in flat_rows for k in r})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in flat_rows:
        writer.writerow({k: r.get(k, "") for k in fields})
    return buf.getvalue()
