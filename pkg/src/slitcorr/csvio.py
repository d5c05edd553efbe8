"""CSV curve files: ``#`` header lines, a column header, 9 significant digits."""
from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

SIGNIFICANT_DIGITS = 9


def fmt(value: float) -> str:
    """Positional decimal text with 9 significant digits."""
    return np.format_float_positional(
        float(value), precision=SIGNIFICANT_DIGITS, unique=False, fractional=False, trim="-"
    )


def atomic_write(path, text: str) -> Path:
    """Write via a temporary file in the same directory and rename into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def render_table(header_items, columns: dict) -> str:
    """Render ``# key = value`` header lines followed by a CSV table."""
    lines = [f"# {k} = {v}" if v is not None else f"# {k}" for k, v in header_items]
    names = list(columns)
    lines.append(",".join(names))
    cols = [np.asarray(columns[n], dtype=float) for n in names]
    for row in zip(*cols):
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def render_curve(curve, header_items) -> str:
    columns = {"x_m": curve.x, "value": curve.values}
    if curve.stderr is not None:
        columns["stderr"] = curve.stderr
    return render_table(header_items, columns)


def read_table(path):
    """Parse a file written by :func:`render_table`.

    Returns ``(header, columns)`` where ``header`` maps the ``# key = value``
    lines and ``columns`` maps column names to float arrays.
    """
    header = {}
    names = None
    rows = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        if not raw.strip():
            continue
        if raw.startswith("#"):
            body = raw[1:].strip()
            if "=" in body:
                k, v = body.split("=", 1)
                header[k.strip()] = v.strip()
            continue
        if names is None:
            names = [c.strip() for c in raw.split(",")]
            continue
        rows.append([float(c) for c in raw.split(",")])
    if names is None:
        raise ValueError(f"{path}: no column header found")
    data = np.array(rows, dtype=float).reshape(-1, len(names))
    return header, {n: data[:, i] for i, n in enumerate(names)}
