"""Structured text reports: a flat key = value view plus optional tables.

The machine view prints one `path = value` line per leaf of a report
tree.  Nested mappings extend the dotted path, complex leaves split into
.re and .im, sequences of plain integers or strings are emitted inline
(space separated) and other sequences get numeric path components.
Floats print with shortest-roundtrip precision; tables reuse the same
formatting so both views carry identical numbers.
"""

from __future__ import annotations

from typing import Any, Iterable, Mapping

import numpy as np


def format_scalar(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, str):
        return value
    raise TypeError(f"cannot format {type(value).__name__} as a report scalar")


def format_complex(value: complex) -> str:
    """Human-view rendering of a complex number, shortest-roundtrip parts."""
    z = complex(value)
    sign = "+" if z.imag >= 0 else "-"
    return f"{format_scalar(z.real)} {sign} {format_scalar(abs(z.imag))}j"


def _is_inline_sequence(value: Any) -> bool:
    return isinstance(value, (list, tuple)) and all(
        isinstance(item, (int, np.integer, str)) and not isinstance(item, bool)
        for item in value
    )


def kv_lines(tree: Mapping[str, Any], prefix: str = "") -> list[str]:
    """Flatten a report tree into `path = value` lines, depth first."""
    lines: list[str] = []
    for key, value in tree.items():
        path = f"{prefix}{key}"
        if value is None:
            continue
        if isinstance(value, Mapping):
            lines.extend(kv_lines(value, f"{path}."))
        elif isinstance(value, (complex, np.complexfloating)):
            z = complex(value)
            lines.append(f"{path}.re = {format_scalar(z.real)}")
            lines.append(f"{path}.im = {format_scalar(z.imag)}")
        elif _is_inline_sequence(value):
            lines.append(f"{path} = {' '.join(format_scalar(v) for v in value)}")
        elif isinstance(value, (list, tuple)):
            lines.extend(kv_lines({str(k): v for k, v in enumerate(value)}, f"{path}."))
        else:
            lines.append(f"{path} = {format_scalar(value)}")
    return lines


def render_report(tree: Mapping[str, Any]) -> str:
    return "\n".join(kv_lines(tree)) + "\n"


def format_table(headers: Iterable[str], rows: Iterable[Iterable[Any]]) -> str:
    """Plain column-aligned table; every cell is formatted before layout."""
    head = [str(h) for h in headers]
    body = [[cell if isinstance(cell, str) else format_scalar(cell) for cell in row]
            for row in rows]
    for row in body:
        if len(row) != len(head):
            raise ValueError(
                f"table row has {len(row)} cells, expected {len(head)}"
            )
    widths = [len(h) for h in head]
    for row in body:
        for k, cell in enumerate(row):
            widths[k] = max(widths[k], len(cell))
    def line(cells):
        return "  ".join(cell.ljust(widths[k]) for k, cell in enumerate(cells)).rstrip()
    out = [line(head), line(["-" * w for w in widths])]
    out.extend(line(row) for row in body)
    return "\n".join(out) + "\n"
