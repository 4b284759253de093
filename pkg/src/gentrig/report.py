"""Stable CSV and JSON serialisation of scan reports.

CSV layout: header ``property,kind,p,y,margin,err_bound,verdict``, one row
per cell in row-major (p, then y) order, floats with 17 significant digits,
UTF-8, LF line endings.  Binary64 values survive a round trip exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from typing import Iterable

from .convexity import Margin, Property, ScanReport, Verdict, certified
from .core import FunctionKind

__all__ = [
    "CSV_HEADER",
    "SCHEMA_VERSION",
    "fmt",
    "scan_to_csv",
    "scan_from_csv",
    "scan_to_json",
    "scan_from_json",
    "rows_to_csv",
    "atomic_write",
    "exit_status",
]

CSV_HEADER = ("property", "kind", "p", "y", "margin", "err_bound", "verdict")
SCHEMA_VERSION = 1


def fmt(x) -> str:
    """17 significant digits; ``nan``/``inf`` spelled out."""
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def rows_to_csv(header: Iterable[str], rows: Iterable[Iterable]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(header))
    for row in rows:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def scan_to_csv(report: ScanReport) -> str:
    prop, kind = report.property.value, report.kind.value
    return rows_to_csv(
        CSV_HEADER,
        ((prop, kind, p, y, m.value, m.err_bound, m.verdict.value) for p, y, m in report.cells()),
    )


def _unique(seq):
    out = []
    for v in seq:
        if v not in out:
            out.append(v)
    return out


def scan_from_csv(text: str, config: dict | None = None) -> ScanReport:
    """Parse :func:`scan_to_csv` output back into a :class:`ScanReport`.

    Verdicts are recomputed from the numbers and checked against the file.
    """
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header!r}")
    rows = [r for r in reader if r]
    if not rows:
        raise ValueError("report has no cells")
    props = {r[0] for r in rows}
    kinds = {r[1] for r in rows}
    if len(props) != 1 or len(kinds) != 1:
        raise ValueError("a report holds exactly one property and one kind")
    ps = _unique(float(r[2]) for r in rows)
    ys = _unique(float(r[3]) for r in rows)
    if len(rows) != len(ps) * len(ys):
        raise ValueError("rows do not form a full grid")
    margins = []
    for i, p in enumerate(ps):
        row = []
        for j, y in enumerate(ys):
            r = rows[i * len(ys) + j]
            if float(r[2]) != p or float(r[3]) != y:
                raise ValueError("rows are not in row-major grid order")
            m = Margin(float(r[4]), float(r[5]))
            if m.verdict.value != r[6]:
                raise ValueError(f"verdict {r[6]!r} inconsistent with margin at p={p}, y={y}")
            row.append(m)
        margins.append(tuple(row))
    return ScanReport(
        FunctionKind.parse(kinds.pop()),
        Property.parse(props.pop()),
        tuple(ps),
        tuple(ys),
        tuple(margins),
        dict(config or {}),
    )


def _jnum(x: float):
    x = float(x)
    return x if math.isfinite(x) else fmt(x)


def _unjnum(x) -> float:
    return float(x)


def scan_to_json(report: ScanReport) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": report.kind.value,
        "property": report.property.value,
        "p_grid": [_jnum(p) for p in report.p_grid],
        "y_grid": [_jnum(y) for y in report.y_grid],
        "margins": [
            [
                {"value": _jnum(m.value), "err_bound": _jnum(m.err_bound), "verdict": m.verdict.value,
                 **({"note": m.note} if m.note else {})}
                for m in row
            ]
            for row in report.margins
        ],
        "asserted": [[certified(report.property, report.kind, p, y) for y in report.y_grid] for p in report.p_grid],
        "config": report.config,
    }
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def scan_from_json(text: str) -> ScanReport:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    margins = tuple(
        tuple(Margin(_unjnum(c["value"]), _unjnum(c["err_bound"]), note=c.get("note", "")) for c in row)
        for row in doc["margins"]
    )
    return ScanReport(
        FunctionKind.parse(doc["kind"]),
        Property.parse(doc["property"]),
        tuple(_unjnum(v) for v in doc["p_grid"]),
        tuple(_unjnum(v) for v in doc["y_grid"]),
        margins,
        doc.get("config", {}),
    )


def atomic_write(path: str, text: str) -> None:
    """Write via a temporary file in the target directory and rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".gentrig-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def exit_status(report: ScanReport) -> int:
    """1 if any cell Fails; 3 if a proved cell is Inconclusive; else 0.

    Cells outside proved regions are reported but only count when they Fail.
    """
    fails = False
    open_cells = False
    for p, y, m in report.cells():
        if m.verdict is Verdict.FAILS:
            fails = True
        elif m.verdict is Verdict.INCONCLUSIVE and report.asserted(p, y):
            open_cells = True
    if fails:
        return 1
    return 3 if open_cells else 0
