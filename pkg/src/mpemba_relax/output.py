"""Deterministic CSV and JSON rendering of run results."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import TYPE_CHECKING, Any

import numpy as np

from mpemba_relax import __version__

if TYPE_CHECKING:
    from collections.abc import Collection, Sequence

    from mpemba_relax.models import Cell, ScanResult

ENGINE = "mpemba-relax"
SCIENTIFIC_BELOW = 1e-4
SCIENTIFIC_FROM = 1e16


def format_float(value: float, precision: int) -> str:
    """Shortest round-trip text of `value`, capped at `precision` significant digits."""
    if not math.isfinite(value):
        return repr(float(value))
    magnitude = abs(value)
    if magnitude == 0.0 or SCIENTIFIC_BELOW <= magnitude < SCIENTIFIC_FROM:
        text = np.format_float_positional(
            value, precision=precision, unique=True, fractional=False, trim="-"
        )
    else:
        text = np.format_float_scientific(value, precision=precision - 1, unique=True, trim="-")
    return "0" if text == "-0" else text


def format_cell(value: Cell, precision: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value, precision)
    return str(value)


def parse_cell(text: str, *, numeric: bool = True) -> Cell:
    """Inverse of `format_cell` for CSV fields; text columns are never read as numbers."""
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    if not numeric:
        return text
    try:
        return float(text)
    except ValueError:
        return text


def parse_row(
    columns: Sequence[str], cells: Sequence[str], text_columns: Collection[str] = ()
) -> list[Cell]:
    """Parse one CSV row; cells in `text_columns` stay strings even when they look numeric."""
    return [
        parse_cell(cell, numeric=name not in text_columns)
        for name, cell in zip(columns, cells, strict=True)
    ]


def render_csv(result: ScanResult, precision: int) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([format_cell(v, precision) for v in row])
    return buffer.getvalue()


def _json_cell(value: Any, precision: int) -> Any:
    if isinstance(value, float) and not isinstance(value, bool):
        return float(format_float(value, precision))
    if isinstance(value, dict):
        return {k: _json_cell(v, precision) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_json_cell(v, precision) for v in value]
    return value


def render_json(result: ScanResult, precision: int, config: dict[str, Any] | None = None) -> str:
    payload = {
        "metadata": {
            "engine": ENGINE,
            "version": __version__,
            "command": result.command,
            "kind": result.kind,
            "config": config,
        },
        "summary": _json_cell(result.summary, precision),
        "columns": result.columns,
        "data": _json_cell(result.rows, precision),
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def render(
    result: ScanResult, fmt: str, precision: int, config: dict[str, Any] | None = None
) -> str:
    if fmt == "json":
        return render_json(result, precision, config)
    return render_csv(result, precision)
