"""Writer for the GFEA feature container.

Layout: magic ``GFEA``, little-endian u16 format version, u32 row count,
u32 feature dim, then rows x dim little-endian f32. The sidecar
``<path>.manifest.csv`` (header ``row,image_id,p0..p4``) carries ids and
labels; ``#`` lines on top record provenance. This mirrors what the
training toolkit reads, byte for byte, without importing it.
"""

from __future__ import annotations

import csv
import struct
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ExtractorError

GFEA_MAGIC = b"GFEA"
GFEA_FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHII")
MANIFEST_HEADER = ["row", "image_id", "p0", "p1", "p2", "p3", "p4"]


def manifest_path(path: str | Path) -> Path:
    return Path(f"{path}.manifest.csv")


def write_gfea(
    path: str | Path,
    features: np.ndarray,
    image_ids: Sequence[str],
    labels: Sequence[tuple[float, ...]],
    comments: Sequence[str] = (),
) -> None:
    feats = np.ascontiguousarray(features, dtype="<f4")
    if feats.ndim != 2:
        raise ExtractorError(f"features must be 2-D, got ndim={feats.ndim}")
    rows, dim = feats.shape
    if not (len(image_ids) == rows == len(labels)):
        raise ExtractorError(
            f"misaligned output: {len(image_ids)} ids, {rows} rows, "
            f"{len(labels)} labels"
        )
    if dim < 1:
        raise ExtractorError("feature dim must be positive")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(GFEA_MAGIC, GFEA_FORMAT_VERSION, rows, dim))
        fh.write(feats.tobytes())
    with open(manifest_path(path), "w", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_HEADER)
        for i, (image_id, label) in enumerate(zip(image_ids, labels)):
            writer.writerow([i, image_id] + [repr(p) for p in label])
