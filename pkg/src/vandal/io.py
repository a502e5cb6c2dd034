"""Record emission in JSON, CSV and aligned text, plus node-file loading."""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Sequence

from .torus import NodeSet

__all__ = ["CSV_DIGITS", "format_number", "emit", "load_nodes"]

#: Default number of significant digits for CSV and text output.
CSV_DIGITS = 6


def format_number(value, digits: int = CSV_DIGITS) -> str:
    """Round floats to ``digits`` significant digits; blank for ``None``."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.{digits}g}"
    return str(value)


def _json_default(obj):
    # numpy scalars and arrays show up in detail records
    if hasattr(obj, "tolist"):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit(
    records: Sequence[dict],
    fmt: str,
    columns: Sequence[str] | None = None,
    digits: int = CSV_DIGITS,
    single: bool = False,
) -> str:
    """Render ``records`` as a string in ``fmt`` (``json``, ``csv`` or ``text``).

    JSON keeps full precision: Python's float repr is the shortest decimal
    string that reads back as the same double.  With ``single`` a lone
    record is written as an object instead of a one-element list.
    """
    records = list(records)
    if columns is None:
        columns = []
        for rec in records:
            columns += [k for k in rec if k not in columns]
    if fmt == "json":
        payload = records[0] if single and len(records) == 1 else records
        return json.dumps(payload, default=_json_default, allow_nan=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([format_number(rec.get(c), digits) for c in columns])
        return buf.getvalue()
    if fmt == "text":
        rows = [list(columns)] + [[format_number(rec.get(c), digits) for c in columns] for rec in records]
        widths = [max(len(row[i]) for row in rows) for i in range(len(columns))]
        return "".join("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() + "\n" for row in rows)
    raise ValueError(f"unknown output format {fmt!r}")


def load_nodes(source: str | Path, stdin_text: str | None = None) -> NodeSet:
    """Read a node file in JSON or whitespace-separated text form.

    ``"-"`` reads ``stdin_text``.  The format is detected from the first
    non-blank character.
    """
    if str(source) == "-":
        text = stdin_text or ""
    else:
        text = Path(source).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return NodeSet.from_json(stripped)
    return NodeSet.from_text(text)
