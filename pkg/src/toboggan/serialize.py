"""Deterministic JSON and CSV output.

Floats are written with 15 significant digits in lowercase scientific
notation and ``-0.0`` is written as ``0``, so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import numbers
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np


def format_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x!r}")
    if x == 0:
        return "0.00000000000000e+00"
    return "%.14e" % x


def _plain(obj: Any) -> Any:
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def _encode(obj: Any, level: int, out: list[str]) -> None:
    obj = _plain(obj)
    pad = "  " * (level + 1)
    if obj is None or isinstance(obj, (bool, str)):
        out.append(json.dumps(obj))
    elif isinstance(obj, numbers.Integral):
        out.append(str(int(obj)))
    elif isinstance(obj, numbers.Real):
        out.append(format_float(obj))
    elif isinstance(obj, complex):
        _encode([obj.real, obj.imag], level, out)
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, val) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(str(key))}: ")
            _encode(val, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append("  " * level + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        if all(not isinstance(_plain(v), (dict, list, tuple)) for v in obj):
            out.append("[")
            for i, v in enumerate(obj):
                _encode(v, level, out)
                if i < len(obj) - 1:
                    out.append(", ")
            out.append("]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad)
            _encode(v, level + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append("  " * level + "]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """JSON text with fixed float formatting; dict order is preserved."""
    out: list[str] = []
    _encode(obj, 0, out)
    return "".join(out) + "\n"


def _cell(v: Any) -> str:
    v = _plain(v)
    if v is None:
        return ""
    if isinstance(v, bool) or isinstance(v, str):
        return str(v).lower() if isinstance(v, bool) else v
    if isinstance(v, numbers.Integral):
        return str(int(v))
    if isinstance(v, numbers.Real):
        return format_float(v)
    return str(v)


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()
