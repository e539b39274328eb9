"""Run reports: a versioned JSON schema plus derived human-readable tables.

Every decimal in a report is the exact rational rounded (half to even) at
the configured precision; the exact value always travels alongside as
``"P/Q"``.
"""

from __future__ import annotations

import json
from fractions import Fraction

SCHEMA_VERSION = 1


def format_ratio(value: Fraction, precision: int) -> str:
    """Exact decimal rendering of a rational at ``precision`` places."""
    value = Fraction(value)
    unit = 10**precision
    scaled = round(value * unit)  # round half to even, exactly
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, unit)
    if precision == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{precision}d}"


def exact_str(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def make_report(
    *,
    dataset: str,
    n: int,
    m: int,
    algorithm: str,
    ratio: Fraction,
    set_size: int,
    iterations: int,
    wall_time: float,
    cut_solves: int = 0,
    certified: bool | None = None,
    precision: int = 4,
    subset_ids=None,
    config: dict | None = None,
    extra: dict | None = None,
) -> dict:
    report = {
        "schema_version": SCHEMA_VERSION,
        "dataset": dataset,
        "n": n,
        "m": m,
        "algorithm": algorithm,
        "ratio_decimal": format_ratio(ratio, precision),
        "ratio_exact": exact_str(ratio),
        "set_size": set_size,
        "iterations": iterations,
        "wall_time_s": round(wall_time, 6),
        "cut_solves": cut_solves,
        "config": dict(config or {}),
    }
    if certified is not None:
        report["certified"] = bool(certified)
    if subset_ids is not None:
        report["subset_original_ids"] = [int(x) for x in subset_ids]
    if extra:
        report.update(extra)
    return report


_TABLE_FIELDS = [
    ("dataset", "Dataset"),
    ("n", "Nodes"),
    ("m", "Edges"),
    ("algorithm", "Algorithm"),
    ("ratio_decimal", "Value"),
    ("set_size", "Set size"),
    ("iterations", "Iters"),
    ("cut_solves", "Cut solves"),
    ("wall_time_s", "Wall [s]"),
]


def render_table(reports: list[dict]) -> str:
    """Fixed-width table derived purely from report JSON."""
    rows = [[str(r.get(key, "")) for key, _ in _TABLE_FIELDS] for r in reports]
    headers = [title for _, title in _TABLE_FIELDS]
    widths = [
        max(len(h), *(len(row[i]) for row in rows)) if rows else len(h)
        for i, h in enumerate(headers)
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines)


def render_csv(reports: list[dict]) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow([key for key, _ in _TABLE_FIELDS])
    for r in reports:
        writer.writerow([r.get(key, "") for key, _ in _TABLE_FIELDS])
    return buf.getvalue()


def dump_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False)
