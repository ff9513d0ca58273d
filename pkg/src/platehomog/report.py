"""Canonical JSON / CSV serialization and console tables."""

from __future__ import annotations

import io
import math

import numpy as np


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _encode(obj, out: list[str]) -> None:
    if isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                out.append(", ")
            out.append(_quote(str(key)))
            out.append(": ")
            _encode(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, item in enumerate(obj.tolist() if isinstance(obj, np.ndarray) else obj):
            if i:
                out.append(", ")
            _encode(item, out)
        out.append("]")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        out.append(_quote(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _quote(s: str) -> str:
    import json

    return json.dumps(s, ensure_ascii=True)


def canonical_json(obj) -> str:
    """Sorted keys, floats at 17 significant digits; stable under parse/re-serialize."""
    out: list[str] = []
    _encode(obj, out)
    return "".join(out) + "\n"


def matrix_csv(m: np.ndarray) -> str:
    buf = io.StringIO()
    for row in np.asarray(m):
        buf.write(",".join(_fmt_float(float(v)) for v in row) + "\n")
    return buf.getvalue()


def format_matrix(m: np.ndarray, decimals: int = 2, split: int | None = None) -> str:
    """Fixed-width table; ``split`` draws the block separator after that row/column."""
    m = np.asarray(m)
    cells = [[f"{v:.{decimals}f}" for v in row] for row in m]
    width = max(len(c) for row in cells for c in row)
    lines = []
    for i, row in enumerate(cells):
        parts = [c.rjust(width) for c in row]
        if split:
            parts.insert(split, "|")
        lines.append("  ".join(parts))
        if split and i == split - 1:
            lines.append("-" * len(lines[-1]))
    return "\n".join(lines)


def rows_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt_float(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    return buf.getvalue()
