"""Grasp categories, probability distributions, and annotator-label aggregation.

A grasp distribution is the currency every other module trades in: labels,
head predictions, and fused decisions are all probability vectors over the
same five grasp types. Ground-truth distributions are built by counting how
many annotators picked each grasp as their top choice for an object.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    GraspKitError,
    InvalidAnnotationError,
    NegativeEntryError,
    SumNotOneError,
    WrongArityError,
)

N_GRASPS = 5

# |sum - 1| tolerance: wide enough for double roundoff in means of valid
# distributions, tight enough to catch genuinely unnormalized vectors.
SUM_TOLERANCE = 1e-9

# entries in [-1e-12, 0) are treated as roundoff and clamped to zero
NEGATIVE_TOLERANCE = -1e-12


class GraspType(IntEnum):
    """The five grasp categories, with stable integer codes 0..4."""

    OPEN_PALM = 0
    MEDIUM_WRAP = 1
    POWER_SPHERE = 2
    PARALLEL_EXTENSION = 3
    PALMAR_PINCH = 4

    @classmethod
    def parse(cls, text: str) -> "GraspType":
        """Parse an integer code or a canonical name (any common casing)."""
        s = text.strip()
        if not s:
            raise GraspKitError("empty grasp type field")
        try:
            return cls(int(s))
        except ValueError:
            pass
        key = s.replace(" ", "").replace("_", "").replace("-", "").casefold()
        try:
            return _NAME_TO_GRASP[key]
        except KeyError:
            raise GraspKitError(f"unknown grasp type: {text!r}") from None


_NAME_TO_GRASP = {g.name.replace("_", "").casefold(): g for g in GraspType}


@dataclass(frozen=True)
class GraspDistribution:
    """Probability vector over the five grasp types.

    Construction enforces the invariants: exactly five entries, all
    non-negative (entries within -1e-12 of zero are clamped), summing to one
    within 1e-9.
    """

    p: tuple[float, float, float, float, float]

    def __post_init__(self) -> None:
        entries = tuple(float(x) for x in self.p)
        if len(entries) != N_GRASPS:
            raise WrongArityError(
                f"expected {N_GRASPS} probabilities, got {len(entries)}"
            )
        cleaned = []
        for i, x in enumerate(entries):
            if not math.isfinite(x) or x < NEGATIVE_TOLERANCE:
                raise NegativeEntryError(f"entry {i} is negative: {x!r}")
            cleaned.append(0.0 if x < 0.0 else x)
        total = math.fsum(cleaned)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise SumNotOneError(f"entries sum to {total!r}, not 1")
        object.__setattr__(self, "p", tuple(cleaned))

    def __iter__(self) -> Iterator[float]:
        return iter(self.p)

    def __len__(self) -> int:
        return N_GRASPS

    def __getitem__(self, i: int) -> float:
        return self.p[i]

    def as_array(self) -> np.ndarray:
        return np.array(self.p, dtype=np.float64)

    @classmethod
    def uniform(cls) -> "GraspDistribution":
        return cls((0.2, 0.2, 0.2, 0.2, 0.2))

    @classmethod
    def one_hot(cls, grasp: GraspType | int) -> "GraspDistribution":
        p = [0.0] * N_GRASPS
        p[int(grasp)] = 1.0
        return cls(tuple(p))


def validate_distribution(values: Iterable[float]) -> GraspDistribution:
    """Validate a raw 5-vector as a grasp distribution.

    Raises WrongArityError, NegativeEntryError, or SumNotOneError naming the
    violated invariant.
    """
    return GraspDistribution(tuple(values))


@dataclass(frozen=True)
class AnnotationSet:
    """Top-choice grasp annotations for one object, one choice per annotator."""

    object_id: str
    choices: tuple[GraspType, ...]
    annotator_count: int = -1  # -1: derive from len(choices)

    def __post_init__(self) -> None:
        choices = tuple(GraspType(c) for c in self.choices)
        object.__setattr__(self, "choices", choices)
        n = self.annotator_count
        if n == -1:
            n = len(choices)
            object.__setattr__(self, "annotator_count", n)
        if n < 1 or not choices:
            raise InvalidAnnotationError(
                f"object {self.object_id!r} has no annotations"
            )
        if n != len(choices):
            raise InvalidAnnotationError(
                f"object {self.object_id!r}: annotator_count {n} != "
                f"{len(choices)} choices"
            )


def aggregate_annotations(annotations: AnnotationSet) -> GraspDistribution:
    """Build the ground-truth distribution from annotator top choices.

    Each grasp's probability is the fraction of annotators that chose it.
    """
    if not annotations.choices:
        raise InvalidAnnotationError("empty choices list")
    counts = [0] * N_GRASPS
    for choice in annotations.choices:
        counts[int(choice)] += 1
    n = annotations.annotator_count
    return GraspDistribution(tuple(c / n for c in counts))


def argmax_grasp(dist: GraspDistribution) -> GraspType:
    """Most probable grasp; ties broken by lowest integer code."""
    best = 0
    for i in range(1, N_GRASPS):
        if dist[i] > dist[best]:
            best = i
    return GraspType(best)


# ---------------------------------------------------------------------------
# CSV interchange

ANNOTATION_HEADER = ["object_id", "annotator_id", "choice"]
LABEL_HEADER = ["object_id", "p0", "p1", "p2", "p3", "p4"]


def _open_csv_rows(path: str | Path, expected_header: list[str]) -> list[list[str]]:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise GraspKitError(f"{path}: empty CSV")
    header = [c.strip() for c in rows[0]]
    if header != expected_header:
        raise GraspKitError(
            f"{path}: expected header {','.join(expected_header)}, "
            f"got {','.join(header)}"
        )
    return rows[1:]


def read_annotations(path: str | Path) -> list[AnnotationSet]:
    """Read a `object_id,annotator_id,choice` CSV into per-object sets.

    Objects appear in the output in first-seen order; one row per annotator
    per object.
    """
    grouped: dict[str, list[GraspType]] = {}
    for row in _open_csv_rows(path, ANNOTATION_HEADER):
        if len(row) != 3:
            raise GraspKitError(f"{path}: malformed annotation row {row!r}")
        object_id, _annotator_id, choice = row
        grouped.setdefault(object_id, []).append(GraspType.parse(choice))
    return [
        AnnotationSet(object_id=oid, choices=tuple(choices))
        for oid, choices in grouped.items()
    ]


def write_labels(
    path: str | Path, labels: Sequence[tuple[str, GraspDistribution]]
) -> None:
    """Write `object_id,p0..p4` rows with full-precision floats."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(LABEL_HEADER)
        for object_id, dist in labels:
            writer.writerow([object_id] + [repr(x) for x in dist])


def read_labels(path: str | Path) -> list[tuple[str, GraspDistribution]]:
    """Read a label CSV written by write_labels (or by hand)."""
    out = []
    for row in _open_csv_rows(path, LABEL_HEADER):
        if len(row) != 6:
            raise GraspKitError(f"{path}: malformed label row {row!r}")
        out.append((row[0], validate_distribution(float(x) for x in row[1:])))
    return out
