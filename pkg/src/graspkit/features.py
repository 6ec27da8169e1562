"""Feature datasets and their binary on-disk container.

A feature file starts with the magic ``GFEA``, a little-endian u16 format
version, u32 row count, and u32 feature dim, followed by the rows as
little-endian f32. A CSV manifest next to it (``<path>.manifest.csv``,
header ``row,image_id,p0,p1,p2,p3,p4``) carries the image id and soft label
for each row; lines starting with ``#`` are comments, so producers may
record provenance there.

Features live as f32 on disk and f64 in memory.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .core import GraspDistribution, _open_csv_rows, validate_distribution
from .errors import (
    BadMagicError,
    GraspKitError,
    InvalidInputError,
    LengthMismatchError,
    ManifestMismatchError,
    ShapeMismatchError,
    UnsupportedVersionError,
)

FEATURE_MAGIC = b"GFEA"
FEATURE_FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHII")
MANIFEST_HEADER = ["row", "image_id", "p0", "p1", "p2", "p3", "p4"]


def manifest_path(path: str | Path) -> Path:
    return Path(f"{path}.manifest.csv")


@dataclass(frozen=True)
class FeatureDataset:
    """Aligned rows of (image_id, feature vector, soft label)."""

    image_ids: tuple[str, ...]
    features: np.ndarray  # (n, F) float64
    labels: tuple[GraspDistribution, ...]

    def __post_init__(self) -> None:
        feats = np.asarray(self.features, dtype=np.float64)
        if feats.ndim != 2:
            raise ShapeMismatchError(
                f"features must be 2-D (rows, dim), got ndim={feats.ndim}"
            )
        if not (len(self.image_ids) == feats.shape[0] == len(self.labels)):
            raise ShapeMismatchError(
                f"misaligned dataset: {len(self.image_ids)} ids, "
                f"{feats.shape[0]} feature rows, {len(self.labels)} labels"
            )
        if feats.size and not np.all(np.isfinite(feats)):
            raise InvalidInputError("features contain non-finite values")
        object.__setattr__(self, "features", feats)

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def feature_dim(self) -> int:
        return int(self.features.shape[1])

    def __iter__(self) -> Iterator[tuple[str, np.ndarray, GraspDistribution]]:
        for i in range(len(self)):
            yield self.image_ids[i], self.features[i], self.labels[i]

    def subset(self, indices: Sequence[int]) -> "FeatureDataset":
        idx = list(indices)
        return FeatureDataset(
            image_ids=tuple(self.image_ids[i] for i in idx),
            features=self.features[idx].reshape(len(idx), self.feature_dim),
            labels=tuple(self.labels[i] for i in idx),
        )


def write_feature_file(
    path: str | Path, dataset: FeatureDataset, comments: Sequence[str] = ()
) -> None:
    """Write the binary container plus its sidecar manifest.

    Comment strings land as `# ...` lines atop the manifest; producers use
    them to record provenance such as the generator seed or backbone name.
    """
    rows, dim = dataset.features.shape
    payload = np.ascontiguousarray(dataset.features, dtype="<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(FEATURE_MAGIC, FEATURE_FORMAT_VERSION, rows, dim))
        fh.write(payload)
    with open(manifest_path(path), "w", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_HEADER)
        for i, (image_id, _feat, label) in enumerate(dataset):
            writer.writerow([i, image_id] + [repr(p) for p in label])


def read_feature_file(path: str | Path) -> FeatureDataset:
    """Read a feature file, validating header, payload, and manifest."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise BadMagicError(f"{path}: too short to hold a feature header")
    magic, version, rows, dim = _HEADER.unpack_from(blob)
    if magic != FEATURE_MAGIC:
        raise BadMagicError(f"{path}: bad magic {magic!r}")
    if version != FEATURE_FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"{path}: format version {version}, expected {FEATURE_FORMAT_VERSION}"
        )
    payload = blob[_HEADER.size :]
    expected = rows * dim * 4
    if len(payload) != expected:
        raise LengthMismatchError(
            f"{path}: payload is {len(payload)} bytes, "
            f"header implies {expected} ({rows} rows x {dim} dims)"
        )
    feats = np.frombuffer(payload, dtype="<f4").reshape(rows, dim).astype(np.float64)

    mpath = manifest_path(path)
    if not mpath.exists():
        raise ManifestMismatchError(f"{path}: missing manifest {mpath}")
    try:
        mrows = _open_csv_rows(mpath, MANIFEST_HEADER)
    except GraspKitError as exc:
        raise ManifestMismatchError(str(exc)) from exc
    if len(mrows) != rows:
        raise ManifestMismatchError(
            f"{mpath}: {len(mrows)} manifest rows, header says {rows}"
        )
    image_ids = []
    labels = []
    for i, row in enumerate(mrows):
        if len(row) != 7 or int(row[0]) != i:
            raise ManifestMismatchError(f"{mpath}: bad manifest row {row!r}")
        image_ids.append(row[1])
        labels.append(validate_distribution(float(x) for x in row[2:]))
    return FeatureDataset(
        image_ids=tuple(image_ids), features=feats, labels=tuple(labels)
    )
