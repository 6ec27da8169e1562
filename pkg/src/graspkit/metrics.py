"""Distribution comparison metrics: angular similarity and cross-entropy.

Angular similarity scores a predicted grasp distribution against the ground
truth by the angle between them: 1 for parallel vectors, 0 for orthogonal
ones. Unlike hard-classification accuracy it rewards getting the whole
distribution right, and 1 minus the similarity is a proper distance.

The cross-entropy here is the binary-style form averaged over the five
categories, with a (1-y)log(1-p) term per category, so its gradient through
a softmax is not the usual (p - y).
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .core import GraspDistribution
from .errors import (
    EmptyDatasetError,
    InvalidInputError,
    ShapeMismatchError,
    ZeroVectorError,
)

# probabilities are clamped to [LOG_EPS, 1 - LOG_EPS] before taking logs;
# labels contain exact zeros and ones, which would otherwise hit log(0)
LOG_EPS = 1e-12


def angular_similarity(u: Sequence[float], v: Sequence[float]) -> float:
    """Similarity in [0, 1] derived from the angle between two vectors.

    Computed as 1 - 2*theta/pi where theta is the angle between u and v.
    Inputs must be non-negative with positive norm (they need not be
    normalized). The angle is recovered from the chord between the unit
    vectors rather than arccos of the cosine, which is the same function but
    does not lose half the significand when the vectors are nearly parallel.
    """
    ua = np.asarray(u, dtype=np.float64)
    va = np.asarray(v, dtype=np.float64)
    if ua.shape != va.shape:
        raise ShapeMismatchError(f"vector shapes differ: {ua.shape} vs {va.shape}")
    if not (np.all(np.isfinite(ua)) and np.all(np.isfinite(va))):
        raise InvalidInputError("similarity inputs must be finite")
    nu = float(np.linalg.norm(ua))
    nv = float(np.linalg.norm(va))
    if nu == 0.0:
        raise ZeroVectorError("first vector has zero norm")
    if nv == 0.0:
        raise ZeroVectorError("second vector has zero norm")
    chord = float(np.linalg.norm(ua / nu - va / nv))
    theta = 2.0 * math.asin(min(1.0, 0.5 * chord))
    return 1.0 - 2.0 * theta / math.pi


def _clamped_cross_entropy(pred: np.ndarray, truth: np.ndarray) -> float:
    """Mean-over-categories cross entropy with probabilities clamped.

    Shared with the training code so the loss it reports is exactly the
    metric defined here. Operates on the last axis; leading axes are batch.
    """
    p = np.clip(pred, LOG_EPS, 1.0 - LOG_EPS)
    terms = truth * np.log(p) + (1.0 - truth) * np.log(1.0 - p)
    return float(np.mean(-np.mean(terms, axis=-1)))


def cross_entropy(pred: GraspDistribution, truth: GraspDistribution) -> float:
    """Cross-entropy loss between a predicted and a ground-truth distribution.

    loss = -(1/5) * sum_i [ y_i*log(p_i) + (1-y_i)*log(1-p_i) ]

    with y the truth and p the prediction, p clamped to [1e-12, 1 - 1e-12].
    Non-negative, finite, and minimized over p at p == y.
    """
    return _clamped_cross_entropy(pred.as_array(), truth.as_array())


def mean_angular_similarity(
    preds: Sequence[GraspDistribution], truths: Sequence[GraspDistribution]
) -> float:
    """Arithmetic mean of pairwise angular similarities."""
    if len(preds) != len(truths):
        raise ShapeMismatchError(
            f"{len(preds)} predictions vs {len(truths)} ground truths"
        )
    if not preds:
        raise EmptyDatasetError("no prediction/truth pairs")
    total = math.fsum(
        angular_similarity(p.as_array(), t.as_array())
        for p, t in zip(preds, truths)
    )
    return total / len(preds)
