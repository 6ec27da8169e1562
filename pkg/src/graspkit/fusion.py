"""Combine vision and EMG grasp distributions and smooth decisions in time.

Fusion is a convex combination, the simplest rule closed over the
distribution simplex. Decisions are smoothed by averaging over a FIFO
window sized as fps x window seconds (60 samples at the default 30 fps
over 2 s); until the window has filled once, decisions are provisional.
"""

from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .core import (
    GraspDistribution,
    GraspType,
    _open_csv_rows,
    argmax_grasp,
    validate_distribution,
)
from .errors import GraspKitError, InvalidInputError

STREAM_HEADER = ["t", "p0", "p1", "p2", "p3", "p4"]
DECISION_HEADER = ["t", "decision", "window_full", "p0", "p1", "p2", "p3", "p4"]


@dataclass(frozen=True)
class FusionWeights:
    """Convex weights for the two sources; w_emg is the complement."""

    w_vision: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.w_vision <= 1.0):
            raise InvalidInputError(
                f"w_vision must lie in [0, 1], got {self.w_vision}"
            )

    @property
    def w_emg(self) -> float:
        return 1.0 - self.w_vision


def fuse(
    vision: GraspDistribution, emg: GraspDistribution, w: FusionWeights
) -> GraspDistribution:
    """Elementwise convex combination; valid by construction."""
    return GraspDistribution(
        tuple(w.w_vision * v + w.w_emg * e for v, e in zip(vision, emg))
    )


@dataclass
class DecisionWindow:
    """FIFO of the most recent distributions. Single-writer mutable state;
    readers may take snapshot() concurrently."""

    capacity: int = 60
    buffer: deque = field(init=False)

    def __post_init__(self) -> None:
        if self.capacity < 1:
            raise InvalidInputError("window capacity must be >= 1")
        self.buffer = deque(maxlen=self.capacity)

    @classmethod
    def from_rate(cls, fps: float = 30.0, window_s: float = 2.0) -> "DecisionWindow":
        if fps <= 0 or window_s <= 0:
            raise InvalidInputError("fps and window length must be positive")
        return cls(capacity=round(fps * window_s))

    def __len__(self) -> int:
        return len(self.buffer)

    def snapshot(self) -> tuple[GraspDistribution, ...]:
        return tuple(self.buffer)


class WindowDecision(NamedTuple):
    average: GraspDistribution
    decision: GraspType
    window_full: bool  # False while the buffer is still filling: provisional


def push_and_decide(win: DecisionWindow, sample: GraspDistribution) -> WindowDecision:
    """Append a sample (evicting the oldest at capacity) and decide.

    Returns the mean of the buffered distributions, its most probable
    grasp, and whether the window holds a full `capacity` of samples.
    """
    win.buffer.append(sample)
    stacked = np.stack([d.as_array() for d in win.buffer])
    average = GraspDistribution(tuple(stacked.mean(axis=0)))
    return WindowDecision(
        average=average,
        decision=argmax_grasp(average),
        window_full=len(win.buffer) == win.capacity,
    )


# ---------------------------------------------------------------------------
# stream and decision CSV I/O

def read_stream(path: str | Path) -> list[tuple[float, GraspDistribution]]:
    """Read a `t,p0..p4` per-frame distribution stream."""
    out = []
    for row in _open_csv_rows(path, STREAM_HEADER):
        if len(row) != 6:
            raise GraspKitError(f"{path}: malformed stream row {row!r}")
        out.append((float(row[0]), validate_distribution(float(x) for x in row[1:])))
    return out


def write_stream(
    path: str | Path, rows: Sequence[tuple[float, GraspDistribution]]
) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(STREAM_HEADER)
        for t, dist in rows:
            writer.writerow([repr(t)] + [repr(p) for p in dist])


def write_decisions(
    path: str | Path,
    rows: Sequence[tuple[float, WindowDecision]],
    comments: Sequence[str] = (),
) -> None:
    """Per-frame decision CSV: time, grasp code, full flag, window mean."""
    with open(path, "w", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(DECISION_HEADER)
        for t, wd in rows:
            writer.writerow(
                [repr(t), int(wd.decision), int(wd.window_full)]
                + [repr(p) for p in wd.average]
            )


def read_decisions(path: str | Path) -> list[tuple[float, WindowDecision]]:
    out = []
    for row in _open_csv_rows(path, DECISION_HEADER):
        if len(row) != 8:
            raise GraspKitError(f"{path}: malformed decision row {row!r}")
        avg = validate_distribution(float(x) for x in row[3:])
        out.append(
            (
                float(row[0]),
                WindowDecision(
                    average=avg,
                    decision=GraspType(int(row[1])),
                    window_full=bool(int(row[2])),
                ),
            )
        )
    return out
