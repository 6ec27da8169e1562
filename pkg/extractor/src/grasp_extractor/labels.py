"""The `image_file,p0..p4` soft-label CSV that drives an extraction run.

One output feature row per label row, in order; listing a file twice
simply extracts it twice. `#` lines are comments.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

from .errors import LabelFormatError

LABELS_HEADER = ["image_file", "p0", "p1", "p2", "p3", "p4"]
SUM_TOLERANCE = 1e-9


def _probs(path, cells: list[str]) -> tuple[float, ...]:
    try:
        vals = [float(c) for c in cells]
    except ValueError:
        raise LabelFormatError(f"{path}: non-numeric probability in {cells}") from None
    out = []
    for v in vals:
        if not math.isfinite(v):
            raise LabelFormatError(f"{path}: non-finite probability {v}")
        if v < -1e-12:
            raise LabelFormatError(f"{path}: negative probability {v}")
        out.append(max(v, 0.0))
    if abs(math.fsum(out) - 1.0) > SUM_TOLERANCE:
        raise LabelFormatError(f"{path}: probabilities sum to {math.fsum(out)!r}")
    return tuple(out)


def read_labels(path: str | Path) -> list[tuple[str, tuple[float, ...]]]:
    with open(path, newline="") as fh:
        rows = [
            r for r in csv.reader(fh)
            if r and not r[0].lstrip().startswith("#")
        ]
    if not rows or rows[0] != LABELS_HEADER:
        raise LabelFormatError(
            f"{path}: expected header {','.join(LABELS_HEADER)}"
        )
    out = []
    for row in rows[1:]:
        if len(row) != 6 or not row[0]:
            raise LabelFormatError(f"{path}: bad label row {row!r}")
        out.append((row[0], _probs(path, row[1:])))
    return out
