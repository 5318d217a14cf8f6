"""
JSON encoding of complex matrices and deterministic report serialization.

Matrix documents look like::

    {"rows": 2, "cols": 2, "data": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]}

where ``data`` holds ``[re, im]`` pairs in row-major order.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import MatrixFormatError


def matrix_to_dict(M) -> dict:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise MatrixFormatError(f"expected a 2-D matrix, got shape {M.shape}")
    rows, cols = M.shape
    data = [[float(z.real), float(z.imag)] for z in M.reshape(-1)]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_dict(doc) -> np.ndarray:
    try:
        rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    except (KeyError, TypeError) as exc:
        raise MatrixFormatError(f"matrix document is missing a field: {exc}") from None
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 0 or cols < 0:
        raise MatrixFormatError("rows and cols must be nonnegative integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        n = len(data) if isinstance(data, list) else "non-list"
        raise MatrixFormatError(f"data has {n} entries, expected rows*cols = {rows * cols}")
    out = np.empty(rows * cols, dtype=complex)
    for k, entry in enumerate(data):
        if isinstance(entry, (int, float)) and not isinstance(entry, bool):
            re, im = float(entry), 0.0
        elif isinstance(entry, list) and len(entry) == 2:
            re, im = float(entry[0]), float(entry[1])
        else:
            raise MatrixFormatError(f"entry {k} is not a [re, im] pair")
        if not (math.isfinite(re) and math.isfinite(im)):
            raise MatrixFormatError(f"entry {k} is not finite")
        out[k] = complex(re, im)
    return out.reshape(rows, cols)


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(f"{path}: invalid JSON ({exc})") from None
    return matrix_from_dict(doc)


def save_matrix(path, M) -> None:
    Path(path).write_text(dumps(matrix_to_dict(M)) + "\n")


def _format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    if x == 0.0:
        return "0.0"
    s = format(x, ".17g")
    if not any(c in s for c in ".eE"):
        s += ".0"
    return s


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        # numeric leaves stay on one line to keep matrices readable
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        if all(isinstance(v, (list, tuple)) and len(v) <= 2
               and all(not isinstance(w, (dict, list, tuple)) for w in v) for v in seq):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """
    Deterministic JSON: insertion-ordered keys and floats at 17 significant
    digits, so equal inputs always give byte-identical output and every double
    round-trips exactly.
    """
    return _encode(obj, indent, 0)


def complex_list(values) -> list:
    return [[float(np.real(z)), float(np.imag(z))] for z in values]
