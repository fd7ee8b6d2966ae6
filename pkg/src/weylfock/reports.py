"""Deterministic JSON reports: fixed key order, floats at 17 significant digits.

The stdlib encoder prints floats with shortest round-trip repr, which is not
byte-stable across value provenance; suite reports must rerun byte-identically
under a fixed seed, so numbers are formatted explicitly here.
"""

from __future__ import annotations

import json
from pathlib import Path

__all__ = ["dumps", "write_report"]


def _fmt(value, indent: int) -> str:
    pad = " " * indent
    inner = " " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f'{inner}{json.dumps(str(k))}: {_fmt(v, indent + 1)}'
                 for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{inner}{_fmt(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"unsupported report value type {type(value)!r}")


def dumps(obj: dict) -> str:
    """Render a report dict; dict insertion order is preserved verbatim."""
    return _fmt(obj, 0) + "\n"


def write_report(path: str | Path, obj: dict) -> None:
    Path(path).write_text(dumps(obj))
