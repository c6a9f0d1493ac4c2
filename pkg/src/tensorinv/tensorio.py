"""Tensor JSON files.

Format: ``{"m": 2, "n": 2, "entries": {"T[i,j,k]": "p/q", ...}}``.  A file
without ``entries`` describes the symbolic tensor of that shape.  Rationals
are accepted in any form and normalized to lowest terms on load; omitted
entries are zero.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .action import TensorValues
from .linalg import RatMatrix
from .pencil import FormatError

_ENTRY_RE = re.compile(r"^T\[(\d+),(\d+),(\d+)\]$")


def tensor_values_from_entries(m: int, n: int, entries: dict[str, str]) -> TensorValues:
    X = [[Fraction(0)] * n for _ in range(m)]
    Y = [[Fraction(0)] * n for _ in range(m)]
    for key, raw in entries.items():
        match = _ENTRY_RE.match(key)
        if not match:
            raise FormatError(f"bad tensor entry key {key!r}")
        i, j, k = (int(g) for g in match.groups())
        if not (1 <= i <= m and 1 <= j <= n and k in (1, 2)):
            raise FormatError(f"tensor entry {key!r} out of range for {m}x{n}x2")
        (X if k == 1 else Y)[i - 1][j - 1] = Fraction(str(raw))
    return TensorValues(RatMatrix(X), RatMatrix(Y))


def parse_tensor_json(data: dict) -> tuple[int, int, TensorValues | None]:
    try:
        m, n = int(data["m"]), int(data["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"tensor JSON must carry integer m and n: {exc}") from exc
    if m < 1 or n < 1:
        raise FormatError("tensor dimensions must be positive")
    if "entries" not in data or data["entries"] is None:
        return m, n, None
    return m, n, tensor_values_from_entries(m, n, data["entries"])


def load_tensor(path: str | Path) -> tuple[int, int, TensorValues | None]:
    with open(path) as fh:
        return parse_tensor_json(json.load(fh))


def tensor_to_json(t: TensorValues) -> dict:
    entries: dict[str, str] = {}
    for k, M in ((1, t.X), (2, t.Y)):
        for i in range(t.m):
            for j in range(t.n):
                v = M[i, j]
                if v != 0:
                    entries[f"T[{i + 1},{j + 1},{k}]"] = str(v)
    return {"m": t.m, "n": t.n, "entries": entries}


def save_tensor(t: TensorValues, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(tensor_to_json(t), fh, indent=2, sort_keys=True)
        fh.write("\n")
