"""Deterministic JSON and CSV report writers.

Floats are printed with 17 significant digits, rationals as ``"p/q"``
strings and key order is preserved as built, so identical inputs give
byte-identical files. Files are written atomically.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import arith

OUTPUT_DIR_ENV = "GAPLAB_OUTPUT_DIR"


def format_float(v: float) -> str:
    if not math.isfinite(v):
        return json.dumps(str(v))
    s = format(v, ".17g")
    # keep the token a float in JSON readers
    if all(ch not in s for ch in ".en"):
        s += ".0"
    return s


def plain(obj):
    """Reduce numpy, rational and interval values to JSON-compatible Python values."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if arith.is_interval(obj):
        return {"midpoint": arith.midpoint(obj), "radius": arith.radius(obj)}
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [plain(v) for v in obj]
    return obj


def _dump(obj, indent, level, out):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(k)}: ")
            _dump(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _dump(v, indent, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    out: list[str] = []
    _dump(plain(obj), indent, 0, out)
    return "".join(out) + "\n"


def _cell(v):
    v = plain(v)
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def csv_text(rows, config=None, columns=None) -> str:
    """CSV with an optional ``# key = value`` preamble carrying the run config."""
    buf = io.StringIO()
    if config:
        for k, v in plain(config).items():
            buf.write(f"# {k} = {_cell(v)}\n")
    rows = list(rows)
    if columns is None:
        columns = list(rows[0]) if rows else []
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def write_atomic(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def default_output(name: str, fmt: str):
    """``$GAPLAB_OUTPUT_DIR/<name>.<fmt>`` when the variable is set, else standard output."""
    d = os.environ.get(OUTPUT_DIR_ENV)
    return None if not d else Path(d) / f"{name}.{fmt}"


def emit_report(report: dict, rows, fmt: str, out=None, columns=None):
    """Write ``report`` (JSON) or ``rows`` (CSV, config preamble) to ``out`` or stdout.

    Returns the written path, or ``None`` for standard output.
    """
    if fmt == "json":
        text = dumps(report)
    elif fmt == "csv":
        text = csv_text(rows, report.get("config"), columns)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out is None or str(out) == "-":
        sys.stdout.write(text)
        return None
    return write_atomic(out, text)
