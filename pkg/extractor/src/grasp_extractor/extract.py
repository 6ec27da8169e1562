"""Run images through a pooled backbone and write the GFEA file."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from .backbones import build_backbone, get_spec
from .errors import MissingImageError, MissingLabelError
from .gfea import write_gfea
from .images import read_image
from .labels import read_labels

PREPROCESSING_ID = "bilinear-resize;scale[-1,1]"


def _check_coverage(image_dir: Path, rows) -> None:
    present = {p.name for ext in ("*.ppm", "*.pgm") for p in image_dir.glob(ext)}
    labeled = {fname for fname, _ in rows}
    unlabeled = sorted(present - labeled)
    if unlabeled:
        raise MissingLabelError(
            f"{image_dir}: images without a label row: {', '.join(unlabeled[:5])}"
        )
    missing = sorted(labeled - present)
    if missing:
        raise MissingImageError(
            f"{image_dir}: label rows without an image: {', '.join(missing[:5])}"
        )


def _preprocess(pixels: np.ndarray, size: int):
    import tensorflow as tf

    x = tf.image.resize(
        tf.constant(pixels, dtype=tf.float32), (size, size), method="bilinear"
    )
    return x / 127.5 - 1.0


def extract(
    image_dir: str | Path,
    labels_path: str | Path,
    backbone: str,
    out_path: str | Path,
    weights: str = "auto",
) -> tuple[int, str]:
    """Extract one pooled feature row per label row.

    Returns (row count, weights mode actually used). Inference runs one
    image at a time: rows stay bit-identical no matter what neighbors
    they share a file with, so duplicate inputs give duplicate rows.
    """
    image_dir = Path(image_dir)
    rows = read_labels(labels_path)
    spec = get_spec(backbone)
    _check_coverage(image_dir, rows)

    comments = [
        f"backbone = {backbone}",
        f"feature_dim = {spec.feature_dim}",
        f"input = {spec.input_size}x{spec.input_size}",
        f"preprocessing = {PREPROCESSING_ID}",
    ]
    if not rows:
        write_gfea(
            out_path,
            np.zeros((0, spec.feature_dim), dtype=np.float32),
            [],
            [],
            comments=comments + ["weights = none (no rows)"],
        )
        return 0, "none"

    model, used = build_backbone(backbone, weights)
    feats = np.zeros((len(rows), spec.feature_dim), dtype=np.float32)
    for i, (fname, _) in enumerate(rows):
        x = _preprocess(read_image(image_dir / fname), spec.input_size)
        feats[i] = model(x[None, ...], training=False).numpy()[0]
    write_gfea(
        out_path,
        feats,
        [fname for fname, _ in rows],
        [probs for _, probs in rows],
        comments=comments + [f"weights = {used}"],
    )
    return len(rows), used
