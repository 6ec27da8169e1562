"""From-scratch dense prediction head over fixed feature vectors.

Topology is (F, 256, 128, 5): two ReLU hidden layers, softmax output.
Training minimizes the five-way cross entropy with complement terms (the
same quantity metrics.cross_entropy reports). Because of those complement
terms the logit gradient is not the textbook softmax shortcut p - y; it is
derived through the clamped objective below and checked against finite
differences in the tests.

Everything is plain numpy and deterministic for a fixed seed: the split,
the init, and every epoch's shuffle derive from named seed lanes.
"""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import N_GRASPS, GraspDistribution, _open_csv_rows
from .errors import (
    BadMagicError,
    EmptyBatchError,
    FeatureFileError,
    GraspKitError,
    InsufficientDataError,
    InvalidInputError,
    LengthMismatchError,
    ShapeMismatchError,
    UnsupportedVersionError,
)
from .features import FeatureDataset
from .metrics import LOG_EPS, _clamped_cross_entropy, mean_angular_similarity

HIDDEN_DIMS = (256, 128)

CHECKPOINT_MAGIC = b"GHED"
CHECKPOINT_FORMAT_VERSION = 1
_CHECKPOINT_HEADER = struct.Struct("<4sH4I")

HISTORY_HEADER = ["epoch", "phase", "train_loss", "val_angular_similarity"]


def layer_dims(feature_dim: int) -> tuple[tuple[int, int], ...]:
    """(out, in) shapes of the three weight matrices for a given F."""
    dims = (feature_dim, *HIDDEN_DIMS, N_GRASPS)
    return tuple((dims[i + 1], dims[i]) for i in range(3))


@dataclass(frozen=True)
class DenseHead:
    """Three dense layers; weights (out, in), ReLU hidden, softmax output.

    Parameters are copied and frozen read-only at construction, so a head
    can be shared across threads for prediction.
    """

    weights: tuple[np.ndarray, np.ndarray, np.ndarray]
    biases: tuple[np.ndarray, np.ndarray, np.ndarray]

    def __post_init__(self) -> None:
        if len(self.weights) != 3 or len(self.biases) != 3:
            raise ShapeMismatchError("head has exactly three layers")
        ws = tuple(np.array(w, dtype=np.float64) for w in self.weights)
        bs = tuple(np.array(b, dtype=np.float64) for b in self.biases)
        expected = layer_dims(ws[0].shape[1] if ws[0].ndim == 2 else -1)
        for i, (w, b) in enumerate(zip(ws, bs)):
            if w.ndim != 2 or w.shape != expected[i]:
                raise ShapeMismatchError(
                    f"layer {i}: weight shape {w.shape}, expected {expected[i]}"
                )
            if b.shape != (expected[i][0],):
                raise ShapeMismatchError(
                    f"layer {i}: bias shape {b.shape}, expected ({expected[i][0]},)"
                )
        for arr in ws + bs:
            if not np.all(np.isfinite(arr)):
                raise InvalidInputError("head parameters must be finite")
            arr.setflags(write=False)
        object.__setattr__(self, "weights", ws)
        object.__setattr__(self, "biases", bs)

    @property
    def feature_dim(self) -> int:
        return self.weights[0].shape[1]

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.feature_dim, *HIDDEN_DIMS, N_GRASPS)

    def params(self) -> tuple[np.ndarray, ...]:
        """Flat (W1, b1, W2, b2, W3, b3) view used by the optimizer."""
        w, b = self.weights, self.biases
        return (w[0], b[0], w[1], b[1], w[2], b[2])

    @classmethod
    def from_params(cls, params: Sequence[np.ndarray]) -> "DenseHead":
        return cls(
            weights=(params[0], params[2], params[4]),
            biases=(params[1], params[3], params[5]),
        )


def xavier_layer(
    fan_in: int, fan_out: int, rng: np.random.Generator
) -> np.ndarray:
    """Weights uniform on +/- sqrt(6 / (fan_in + fan_out)), shape (out, in)."""
    bound = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=(fan_out, fan_in))


def xavier_init(
    feature_dim: int, seed: int | np.random.SeedSequence
) -> DenseHead:
    """Fresh head: Xavier-uniform weights, zero biases, seeded."""
    if feature_dim < 1:
        raise InvalidInputError("feature_dim must be >= 1")
    ss = (
        seed
        if isinstance(seed, np.random.SeedSequence)
        else np.random.SeedSequence([seed])
    )
    rng = np.random.default_rng(ss)
    weights, biases = [], []
    for out_dim, in_dim in layer_dims(feature_dim):
        weights.append(xavier_layer(in_dim, out_dim, rng))
        biases.append(np.zeros(out_dim))
    return DenseHead(weights=tuple(weights), biases=tuple(biases))


def _forward_arrays(
    weights: Sequence[np.ndarray], biases: Sequence[np.ndarray], xs: np.ndarray
) -> tuple[np.ndarray, tuple[np.ndarray, ...]]:
    """Batched forward pass; returns probabilities plus backprop cache."""
    z1 = xs @ weights[0].T + biases[0]
    a1 = np.maximum(z1, 0.0)
    z2 = a1 @ weights[1].T + biases[1]
    a2 = np.maximum(z2, 0.0)
    logits = a2 @ weights[2].T + biases[2]
    logits = logits - logits.max(axis=1, keepdims=True)  # softmax stability
    exp = np.exp(logits)
    probs = exp / exp.sum(axis=1, keepdims=True)
    return probs, (xs, z1, a1, z2, a2)


def forward(head: DenseHead, x: Sequence[float]) -> GraspDistribution:
    """Single-sample prediction as a validated distribution."""
    xv = np.asarray(x, dtype=np.float64)
    if xv.shape != (head.feature_dim,):
        raise ShapeMismatchError(
            f"input shape {xv.shape}, head expects ({head.feature_dim},)"
        )
    if not np.all(np.isfinite(xv)):
        raise InvalidInputError("input contains non-finite values")
    probs, _ = _forward_arrays(head.weights, head.biases, xv[None, :])
    return GraspDistribution(tuple(probs[0]))


def _loss_and_grads(
    weights: Sequence[np.ndarray],
    biases: Sequence[np.ndarray],
    xs: np.ndarray,
    ys: np.ndarray,
) -> tuple[float, tuple[np.ndarray, ...]]:
    """Batch-mean loss and its analytic gradients in flat param order.

    With g_i = dL/dp_i of the complement-term objective (zero where the
    probability clamp is active), the softmax chain gives
    dL/dz_k = p_k * (g_k - sum_i g_i p_i).
    """
    batch = xs.shape[0]
    probs, (xs, z1, a1, z2, a2) = _forward_arrays(weights, biases, xs)
    loss = _clamped_cross_entropy(probs, ys)
    q = np.clip(probs, LOG_EPS, 1.0 - LOG_EPS)
    live = (probs > LOG_EPS) & (probs < 1.0 - LOG_EPS)
    g = np.where(live, -(ys / q - (1.0 - ys) / (1.0 - q)), 0.0)
    g /= N_GRASPS * batch
    gz3 = probs * (g - (g * probs).sum(axis=1, keepdims=True))
    gw3 = gz3.T @ a2
    gb3 = gz3.sum(axis=0)
    gz2 = (gz3 @ weights[2]) * (z2 > 0.0)
    gw2 = gz2.T @ a1
    gb2 = gz2.sum(axis=0)
    gz1 = (gz2 @ weights[1]) * (z1 > 0.0)
    gw1 = gz1.T @ xs
    gb1 = gz1.sum(axis=0)
    return loss, (gw1, gb1, gw2, gb2, gw3, gb3)


def loss_and_gradients(
    head: DenseHead,
    batch: Sequence[tuple[Sequence[float], GraspDistribution]],
) -> tuple[float, tuple[np.ndarray, ...]]:
    """Loss and parameter gradients, both averaged over the batch.

    Gradients come back in the flat (W1, b1, W2, b2, W3, b3) order of
    DenseHead.params().
    """
    if len(batch) == 0:
        raise EmptyBatchError("loss requested on an empty batch")
    rows = [np.asarray(x, dtype=np.float64) for x, _ in batch]
    if any(r.shape != (head.feature_dim,) for r in rows):
        raise ShapeMismatchError(
            f"every batch row must have shape ({head.feature_dim},)"
        )
    xs = np.stack(rows)
    if not np.all(np.isfinite(xs)):
        raise InvalidInputError("batch contains non-finite features")
    ys = np.stack([y.as_array() for _, y in batch])
    return _loss_and_grads(head.weights, head.biases, xs, ys)


# ---------------------------------------------------------------------------
# optimizer

@dataclass(frozen=True)
class AdamState:
    """Per-parameter moment accumulators plus the step counter."""

    m: tuple[np.ndarray, ...]
    v: tuple[np.ndarray, ...]
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self) -> None:
        if len(self.m) != len(self.v):
            raise ShapeMismatchError("moment accumulator counts differ")
        if self.t < 0:
            raise InvalidInputError("step counter must be >= 0")


def init_adam_state(
    params: Sequence[np.ndarray],
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> AdamState:
    return AdamState(
        m=tuple(np.zeros_like(p) for p in params),
        v=tuple(np.zeros_like(p) for p in params),
        t=0,
        beta1=beta1,
        beta2=beta2,
        eps=eps,
    )


def adam_step(
    params: Sequence[np.ndarray],
    grads: Sequence[np.ndarray],
    state: AdamState,
    lr: float,
) -> tuple[tuple[np.ndarray, ...], AdamState]:
    """One bias-corrected update; returns new parameters and state."""
    if not (len(params) == len(grads) == len(state.m)):
        raise ShapeMismatchError("params, grads, and state counts differ")
    t = state.t + 1
    new_params, new_m, new_v = [], [], []
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if p.shape != g.shape or p.shape != m.shape:
            raise ShapeMismatchError(
                f"shape mismatch: param {p.shape}, grad {g.shape}, moment {m.shape}"
            )
        m = state.beta1 * m + (1.0 - state.beta1) * g
        v = state.beta2 * v + (1.0 - state.beta2) * (g * g)
        m_hat = m / (1.0 - state.beta1**t)
        v_hat = v / (1.0 - state.beta2**t)
        new_params.append(p - lr * m_hat / (np.sqrt(v_hat) + state.eps))
        new_m.append(m)
        new_v.append(v)
    return tuple(new_params), replace(state, m=tuple(new_m), v=tuple(new_v), t=t)


# ---------------------------------------------------------------------------
# training

@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 32
    epochs_per_phase: int = 50
    lr_phase1: float = 1e-3
    lr_phase2: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0
    split_fraction: float = 0.8

    def __post_init__(self) -> None:
        if self.batch_size < 1 or self.epochs_per_phase < 1:
            raise InvalidInputError("batch_size and epochs_per_phase must be >= 1")
        # zero learning rates are allowed (they make training a no-op)
        if self.lr_phase1 < 0 or self.lr_phase2 < 0 or self.eps <= 0:
            raise InvalidInputError("learning rates must be >= 0 and eps > 0")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise InvalidInputError("betas must lie in [0, 1)")
        if not (0.0 < self.split_fraction < 1.0):
            raise InvalidInputError("split_fraction must lie in (0, 1)")


@dataclass(frozen=True)
class TrainingHistory:
    """Per-epoch curves. val_loss is kept for callers but is not part of
    the history-file contract, so files read back carry None there."""

    phases: tuple[int, ...]
    train_loss: tuple[float, ...]
    val_angular_similarity: tuple[float, ...]
    val_loss: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        lengths = {len(self.phases), len(self.train_loss),
                   len(self.val_angular_similarity)}
        if self.val_loss is not None:
            lengths.add(len(self.val_loss))
        if len(lengths) != 1:
            raise ShapeMismatchError("history columns must have equal length")

    def __len__(self) -> int:
        return len(self.phases)


def split_indices(n: int, cfg: TrainConfig) -> tuple[list[int], list[int]]:
    """Seeded random train/validation partition of n rows.

    Shared by train() and by anything that must reconstruct the same split
    from the same config (the train CLI re-emits the validation rows).
    """
    if n < 2:
        raise InsufficientDataError(f"need at least 2 samples, got {n}")
    n_train = round(n * cfg.split_fraction)
    if n_train < 1 or n_train >= n:
        raise InsufficientDataError(
            f"split {cfg.split_fraction} of {n} samples leaves an empty side"
        )
    split_rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 0]))
    order = split_rng.permutation(n)
    return [int(i) for i in order[:n_train]], [int(i) for i in order[n_train:]]


def train(data: FeatureDataset, cfg: TrainConfig) -> tuple[DenseHead, TrainingHistory]:
    """Two-phase training over a seeded 80/20 split of the dataset.

    Runs epochs_per_phase epochs at lr_phase1, then the same number at
    lr_phase2 on the same parameters. Per-epoch training loss is the
    sample-weighted mean of minibatch losses (parameters move between
    batches); validation similarity is measured after each epoch.
    Bit-reproducible for a fixed cfg: split, init, and shuffles all derive
    from named seed lanes.
    """
    train_idx, val_idx = split_indices(len(data), cfg)
    n_train = len(train_idx)
    train_set = data.subset(train_idx)
    val_set = data.subset(val_idx)

    head = xavier_init(data.feature_dim, np.random.SeedSequence([cfg.seed, 1]))
    params = head.params()
    state = init_adam_state(params, beta1=cfg.beta1, beta2=cfg.beta2, eps=cfg.eps)

    xs = train_set.features
    ys = np.stack([label.as_array() for label in train_set.labels])

    phases, train_losses, val_losses, val_sims = [], [], [], []
    for epoch in range(2 * cfg.epochs_per_phase):
        if epoch < cfg.epochs_per_phase:
            phase, lr = 1, cfg.lr_phase1
        else:
            phase, lr = 2, cfg.lr_phase2
        erng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 2, epoch]))
        shuffle = erng.permutation(n_train)
        loss_sum = 0.0
        for start in range(0, n_train, cfg.batch_size):
            idx = shuffle[start : start + cfg.batch_size]
            weights = (params[0], params[2], params[4])
            biases = (params[1], params[3], params[5])
            loss, grads = _loss_and_grads(weights, biases, xs[idx], ys[idx])
            params, state = adam_step(params, grads, state, lr)
            loss_sum += loss * len(idx)

        epoch_head = DenseHead.from_params(params)
        val_probs, _ = _forward_arrays(
            epoch_head.weights, epoch_head.biases, val_set.features
        )
        phases.append(phase)
        train_losses.append(loss_sum / n_train)
        val_losses.append(
            _clamped_cross_entropy(
                val_probs, np.stack([y.as_array() for y in val_set.labels])
            )
        )
        val_sims.append(evaluate(epoch_head, val_set))

    history = TrainingHistory(
        phases=tuple(phases),
        train_loss=tuple(train_losses),
        val_angular_similarity=tuple(val_sims),
        val_loss=tuple(val_losses),
    )
    return DenseHead.from_params(params), history


def predict(head: DenseHead, data: FeatureDataset) -> list[GraspDistribution]:
    """Batched forward over a dataset, order preserved."""
    if len(data) == 0:
        return []
    if data.feature_dim != head.feature_dim:
        raise ShapeMismatchError(
            f"dataset dim {data.feature_dim}, head expects {head.feature_dim}"
        )
    probs, _ = _forward_arrays(head.weights, head.biases, data.features)
    return [GraspDistribution(tuple(row)) for row in probs]


def evaluate(head: DenseHead, data: FeatureDataset) -> float:
    """Mean angular similarity of head predictions against dataset labels."""
    return mean_angular_similarity(predict(head, data), data.labels)


# ---------------------------------------------------------------------------
# checkpoint and history files

def write_checkpoint(path: str | Path, head: DenseHead) -> None:
    """Binary head snapshot: magic, version, dims, f64 params in flat order."""
    with open(path, "wb") as fh:
        fh.write(
            _CHECKPOINT_HEADER.pack(
                CHECKPOINT_MAGIC, CHECKPOINT_FORMAT_VERSION, *head.dims
            )
        )
        for arr in head.params():
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def read_checkpoint(path: str | Path) -> DenseHead:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _CHECKPOINT_HEADER.size:
        raise BadMagicError(f"{path}: too short to hold a checkpoint header")
    magic, version, *dims = _CHECKPOINT_HEADER.unpack_from(blob)
    if magic != CHECKPOINT_MAGIC:
        raise BadMagicError(f"{path}: bad magic {magic!r}")
    if version != CHECKPOINT_FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"{path}: format version {version}, expected {CHECKPOINT_FORMAT_VERSION}"
        )
    if tuple(dims[1:]) != (*HIDDEN_DIMS, N_GRASPS):
        raise FeatureFileError(f"{path}: unsupported head topology {dims}")
    shapes = []
    for out_dim, in_dim in layer_dims(dims[0]):
        shapes.append((out_dim, in_dim))
        shapes.append((out_dim,))
    expected = sum(math.prod(s) for s in shapes) * 8
    payload = blob[_CHECKPOINT_HEADER.size :]
    if len(payload) != expected:
        raise LengthMismatchError(
            f"{path}: payload is {len(payload)} bytes, dims imply {expected}"
        )
    flat = np.frombuffer(payload, dtype="<f8")
    params, offset = [], 0
    for shape in shapes:
        size = math.prod(shape)
        params.append(flat[offset : offset + size].reshape(shape).astype(np.float64))
        offset += size
    return DenseHead.from_params(params)


def write_history(
    path: str | Path, history: TrainingHistory, comments: Sequence[str] = ()
) -> None:
    """Write the `epoch,phase,train_loss,val_angular_similarity` CSV."""
    with open(path, "w", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(HISTORY_HEADER)
        for i in range(len(history)):
            writer.writerow(
                [
                    i,
                    history.phases[i],
                    repr(history.train_loss[i]),
                    repr(history.val_angular_similarity[i]),
                ]
            )


def read_history(path: str | Path) -> TrainingHistory:
    phases, train_loss, val_sim = [], [], []
    for i, row in enumerate(_open_csv_rows(Path(path), HISTORY_HEADER)):
        if len(row) != 4 or int(row[0]) != i:
            raise GraspKitError(f"{path}: bad history row {row!r}")
        phases.append(int(row[1]))
        train_loss.append(float(row[2]))
        val_sim.append(float(row[3]))
    return TrainingHistory(
        phases=tuple(phases),
        train_loss=tuple(train_loss),
        val_angular_similarity=tuple(val_sim),
    )
