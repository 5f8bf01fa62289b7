"""CSV emission: header row, one ``#`` metadata line, then data rows."""

from __future__ import annotations

import csv
import io
import numbers
from pathlib import Path

from .experiments import ExperimentResult

META_KEYS = ("experiment", "seed", "config_digest", "version")


def format_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, numbers.Integral):
        return str(int(v))
    if isinstance(v, numbers.Real):
        return format(float(v), ".9g")
    return str(v)


def render_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.columns)
    meta = " ".join(f"{k}={result.metadata[k]}" for k in META_KEYS if k in result.metadata)
    buf.write(f"# {meta}\n")
    for row in result.rows:
        if len(row) != len(result.columns):
            raise ValueError(f"row {row!r} does not match columns {result.columns!r}")
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def emit_csv(result: ExperimentResult, path) -> None:
    """Write ``result`` to ``path`` (UTF-8). Raises ``OSError`` if the path is not writable."""
    Path(path).write_bytes(render_csv(result).encode("utf-8"))


def read_csv(path):
    """Read back ``(columns, metadata, rows)``; numeric cells become floats."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    columns = next(csv.reader([lines[0]]))
    meta = {}
    body = []
    for line in lines[1:]:
        if line.startswith("#"):
            meta.update(kv.split("=", 1) for kv in line[1:].split())
        elif line:
            body.append(line)
    rows = []
    for cells in csv.reader(body):
        row = []
        for c in cells:
            try:
                row.append(float(c))
            except ValueError:
                row.append(c)
        rows.append(tuple(row))
    return columns, meta, rows
