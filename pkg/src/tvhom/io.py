"""JSON and CSV formats for instances, measures and reports.

Instance files look like ``{"m": 2, "n": 2, "P": [[...], [...]], "Q": [...]}``.
Floats are written with ``repr``, the shortest string that parses back to
the same double.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import InputParseError, TVHomError
from .measure import AtomicMeasure, make_measure
from .tv import Pmf, ProductInstance, smooth


def _fail(where: str, msg: str):
    raise InputParseError(f"{where}: {msg}")


def _pmf_rows(obj, key: str, n: int, m: int, source: str) -> list[list[float]]:
    rows = obj.get(key)
    if not isinstance(rows, list):
        _fail(source, f"field {key!r} must be a list of {n} probability vectors")
    if len(rows) != n:
        _fail(source, f"field {key!r} has {len(rows)} rows, expected n = {n}")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != m:
            _fail(source, f"{key}[{i}] must be a list of m = {m} numbers")
        vals = []
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                _fail(source, f"{key}[{i}][{j}] is not a finite number: {v!r}")
            vals.append(float(v))
        out.append(vals)
    return out


def parse_instance(text: str, *, source: str = "<input>", smooth_delta: float | None = None) -> ProductInstance:
    """Parse instance JSON, optionally smoothing every pmf towards uniform first."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        _fail(source, "top level must be a JSON object")
    for key in ("m", "n"):
        v = obj.get(key)
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            _fail(source, f"field {key!r} must be a positive integer, got {v!r}")
    n, m = obj["n"], obj["m"]
    rows = {k: _pmf_rows(obj, k, n, m, source) for k in ("P", "Q")}
    pmfs = {}
    for key, vecs in rows.items():
        built = []
        for i, vec in enumerate(vecs):
            try:
                built.append(smooth(vec, smooth_delta) if smooth_delta is not None else Pmf(vec))
            except TVHomError as exc:
                _fail(source, f"{key}[{i}]: {exc}")
        pmfs[key] = tuple(built)
    return ProductInstance(pmfs["P"], pmfs["Q"])


def load_instance(path, *, smooth_delta: float | None = None) -> ProductInstance:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputParseError(f"{p}: cannot read file ({exc.strerror})") from exc
    return parse_instance(text, source=str(p), smooth_delta=smooth_delta)


def dump_instance(inst: ProductInstance) -> str:
    return json.dumps(inst.to_json())


def measure_to_json(eta: AtomicMeasure) -> list[list[float]]:
    return eta.to_json()


def measure_from_json(pairs) -> AtomicMeasure:
    return make_measure([(float(x), float(w)) for x, w in pairs])


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        # JSON has no inf/nan; keep them readable
        return repr(obj)
    return obj


def to_json_text(obj) -> str:
    return json.dumps(_plain(obj), indent=2) + "\n"


CSV_FIELDS = ("instance_id", "check", "lhs", "rhs", "margin", "status")


def _g17(x: float) -> str:
    return format(x, ".17g")


def reports_to_csv(reports: Iterable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in reports:
        for c in r.checks:
            w.writerow([r.instance_id, c.name, _g17(c.lhs), _g17(c.rhs), _g17(c.margin), c.status])
    return buf.getvalue()


def read_csv_report(text: str) -> list[dict]:
    rows = list(csv.DictReader(io.StringIO(text)))
    for row in rows:
        for key in ("lhs", "rhs", "margin"):
            row[key] = float(row[key])
        row["instance_id"] = int(row["instance_id"]) if row["instance_id"] else None
    return rows
