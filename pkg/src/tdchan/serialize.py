"""Deterministic output encoding for the CLI.

Floats are always rendered with 17 significant digits, which round-trips
IEEE doubles exactly, so identical reports serialize to identical bytes.
"""

from __future__ import annotations

import json

import numpy as np

from .channel import DensityMatrix
from .errors import BadDimension


def fmt_float(x: float) -> str:
    if x != x:  # NaN
        return "NaN"
    return format(float(x), ".17g")


def to_json(obj) -> str:
    """JSON text with 17-significant-digit floats, insertion-ordered keys."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        inner = ", ".join(f"{json.dumps(str(k))}: {to_json(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        return "[" + ", ".join(to_json(v) for v in seq) + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def rows_to_csv(header: list[str], rows: list[list]) -> str:
    """Simple CSV with the mandatory header row; floats at 17 digits."""

    def cell(v) -> str:
        if v is None:
            return ""
        if isinstance(v, (float, np.floating)):
            return fmt_float(v)
        return str(v)

    lines = [",".join(header)]
    lines.extend(",".join(cell(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def rows_to_table(header: list[str], rows: list[list]) -> str:
    """Human-readable aligned table (text output mode)."""

    def cell(v) -> str:
        if v is None:
            return "-"
        if isinstance(v, (float, np.floating)):
            return format(float(v), ".12g")
        return str(v)

    grid = [header] + [[cell(v) for v in row] for row in rows]
    widths = [max(len(r[c]) for r in grid) for c in range(len(header))]
    lines = []
    for i, r in enumerate(grid):
        lines.append("  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def density_to_obj(rho: DensityMatrix) -> dict:
    """{"dim": n, "rows": [[[re, im], ...], ...]}, row-major."""
    m = rho.mat
    rows = [[[float(m[i, j].real), float(m[i, j].imag)] for j in range(m.shape[1])] for i in range(m.shape[0])]
    return {"dim": int(m.shape[0]), "rows": rows}


def density_from_obj(obj) -> DensityMatrix:
    """Parse the JSON form back into a validated DensityMatrix.

    Structural problems raise BadDimension (a parse-level failure);
    the DensityMatrix constructor handles the numeric invariants.
    """
    if not isinstance(obj, dict) or "dim" not in obj or "rows" not in obj:
        raise BadDimension('expected an object with "dim" and "rows"')
    dim = obj["dim"]
    rows = obj["rows"]
    if not isinstance(dim, int) or not isinstance(rows, list) or len(rows) != dim:
        raise BadDimension(f"rows/dim mismatch: dim={dim!r}")
    m = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise BadDimension(f"row {i} has wrong length")
        for j, entry in enumerate(row):
            if not isinstance(entry, list) or len(entry) != 2:
                raise BadDimension(f"entry ({i},{j}) is not an [re, im] pair")
            m[i, j] = complex(float(entry[0]), float(entry[1]))
    return DensityMatrix(m)
