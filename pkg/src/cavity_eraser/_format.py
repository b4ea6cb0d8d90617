"""Shared numeric formatting for every emitted data file."""
from __future__ import annotations

import json
from pathlib import Path

SIG_DIGITS = 12


def fmt(x) -> str:
    """12 significant digits, '.' decimal point, no locale."""
    if isinstance(x, (bool, int)) and not isinstance(x, float):
        return str(int(x))
    return format(float(x), f".{SIG_DIGITS}g")


def rounded(obj):
    """Recursively round floats to 12 significant digits for JSON output."""
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {str(k): rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(v) for v in obj]
    return obj


def write_lines(path, lines) -> Path:
    path = Path(path)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def write_json(path, obj) -> Path:
    path = Path(path)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        json.dump(rounded(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
