"""Deterministic text serialization helpers.

All floating-point output is printed with 17 significant digits so that
serialized values round-trip bit exactly and repeated runs with the same
seed produce byte-identical files.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np


def fmt_float(x: float) -> str:
    """Format a float with 17 significant digits ('nan'/'inf' spelled out)."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _encode(obj, pieces: list[str]) -> None:
    if obj is None:
        pieces.append("null")
    elif obj is True:
        pieces.append("true")
    elif obj is False:
        pieces.append("false")
    elif isinstance(obj, (int, np.integer)):
        pieces.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no nan/inf literals; emit them as strings.
        pieces.append(fmt_float(x) if math.isfinite(x) else f'"{fmt_float(x)}"')
    elif isinstance(obj, str):
        pieces.append(
            '"' + obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'
        )
    elif isinstance(obj, dict):
        pieces.append("{")
        for i, (key, val) in enumerate(obj.items()):
            if i:
                pieces.append(", ")
            _encode(str(key), pieces)
            pieces.append(": ")
            _encode(val, pieces)
        pieces.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        pieces.append("[")
        for i, val in enumerate(seq):
            if i:
                pieces.append(", ")
            _encode(val, pieces)
        pieces.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with deterministic float formatting (insertion-ordered keys)."""
    pieces: list[str] = []
    _encode(obj, pieces)
    return "".join(pieces)


def dump_to(path: str | Path, obj) -> None:
    Path(path).write_text(dumps(obj) + "\n", encoding="utf-8")
