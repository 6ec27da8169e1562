"""Release acceptance gate. One test per shipped criterion; run with -v to
get one pass/fail line each. Each test also prints an [ACCEPTANCE] detail
line (visible with -s or on failure).

Oracles here are written from scratch on purpose: loop-based FLOP counting,
an O(n^2) dominance scan, central finite differences, dense 2-D convolution,
and sliding-window means recomputed per frame.
"""

import math
import time

import numpy as np

from graspkit import fusion
from graspkit.augment import (
    AugmentConfig,
    PixelGrid,
    SegmentedObject,
    augment_dataset,
    synthetic_toy_dataset,
)
from graspkit.cli import run
from graspkit.core import GraspDistribution
from graspkit.flops import (
    Activation,
    Conv2D,
    Dense,
    DepthwiseConv2D,
    ElementwiseAdd,
    GlobalAvgPool2D,
    MaxPool2D,
    Softmax,
    layer_flops,
)
from graspkit.head import TrainConfig, loss_and_gradients, train, xavier_init
from graspkit.metrics import angular_similarity
from graspkit.pareto import bundled_cards, pareto_frontier

from test_flops import loop_count
from test_head import finite_difference, sample_coords
from test_pareto import brute_force_frontier, random_card_set

FRONTIER = [
    "mobilenet_v1_0.25",
    "mobilenet_v1_0.50",
    "mobilenet_v2_1.0",
    "mobilenet_v2_1.4",
    "inception_v3",
    "nasnet_a_large",
]


# --------------------------------------------------------------------------
# criterion 1: the published two-decimal similarity table, within 0.01

GOLDEN_TABLE = [
    ((1.00, 0.00, 0.0, 0.0, 0.0), 1.0),
    ((0.87, 0.13, 0.0, 0.0, 0.0), 0.9),
    ((0.76, 0.24, 0.0, 0.0, 0.0), 0.8),
    ((0.67, 0.34, 0.0, 0.0, 0.0), 0.7),
    ((0.58, 0.42, 0.0, 0.0, 0.0), 0.6),
    ((0.50, 0.50, 0.0, 0.0, 0.0), 0.5),
    ((0.00, 1.00, 0.0, 0.0, 0.0), 0.0),
    ((0.20, 0.20, 0.2, 0.2, 0.2), 0.3),
]

REFERENCE = (1.0, 0.0, 0.0, 0.0, 0.0)


def test_criterion_1_golden_similarity_table():
    worst = 0.0
    for vec, published in GOLDEN_TABLE:
        got = angular_similarity(vec, REFERENCE)
        worst = max(worst, abs(got - published))
        assert abs(got - published) <= 0.01, (vec, got, published)
    # the one four-decimal analytic value quoted alongside the table
    spot = angular_similarity((0.87, 0.13, 0.0, 0.0, 0.0), REFERENCE)
    assert abs(spot - 0.9056) <= 5e-5, spot
    print(f"[ACCEPTANCE] criterion 1: max |sim - published| = {worst:.4f} "
          f"over {len(GOLDEN_TABLE)} rows (tol 0.01)")


# --------------------------------------------------------------------------
# criterion 2: metric properties over >= 10,000 random non-negative vectors

def test_criterion_2_similarity_properties_bulk():
    rng = np.random.default_rng(2024)
    n = 10_000
    slack = 1e-9
    for i in range(n):
        u = rng.uniform(0.0, 1.0, size=5)
        v = rng.uniform(0.0, 1.0, size=5)
        t = rng.uniform(0.0, 1.0, size=5)
        s = angular_similarity(u, v)
        assert -slack <= s <= 1.0 + slack, (i, s)
        assert abs(s - angular_similarity(v, u)) <= slack, i
        a, b = rng.uniform(0.1, 10.0, size=2)
        assert abs(s - angular_similarity(a * u, b * v)) <= slack, i
        assert abs(angular_similarity(u, u) - 1.0) <= slack, i
        # 1 - sim is a scaled angle, so it obeys the triangle inequality
        d_uv = 1.0 - s
        d_vt = 1.0 - angular_similarity(v, t)
        d_ut = 1.0 - angular_similarity(u, t)
        assert d_ut <= d_uv + d_vt + slack, i
    print(f"[ACCEPTANCE] criterion 2: symmetry, range, scale invariance, "
          f"self-similarity, and the 1-sim triangle inequality held for "
          f"{n} random triples (slack {slack})")


# --------------------------------------------------------------------------
# criterion 3: analytic gradients vs central differences, 100 instances

def rel_err(a, f):
    # absolute floor keeps dead coordinates (both sides ~0, probe noise
    # ~1e-10) from turning into a 0/0; anything real is >= 1e-4 here
    return abs(a - f) / max(abs(a), abs(f), 1e-4)


def check_instance(head, batch, coords):
    _, grads = loss_and_gradients(head, batch)
    numeric = finite_difference(head, batch, coords)
    return max(
        rel_err(grads[t].flat[i], fd) for (t, i), fd in zip(coords, numeric)
    )


def test_criterion_3_gradients_match_finite_differences():
    rng = np.random.default_rng(303)
    tol = 1e-4

    def rand_label():
        v = rng.uniform(0.05, 1.0, size=5)
        return GraspDistribution(tuple(v / v.sum()))

    # instance 0: every coordinate of every tensor, F = 5
    head = xavier_init(5, seed=1)
    batch = [(rng.standard_normal(5), rand_label()) for _ in range(4)]
    all_coords = [
        (t, i) for t, p in enumerate(head.params()) for i in range(p.size)
    ]
    worst = check_instance(head, batch, all_coords)
    n_exhaustive = len(all_coords)

    # instances 1..99: random F <= 10, random batches, sampled coordinates
    for k in range(1, 100):
        feature_dim = int(rng.integers(2, 11))
        head = xavier_init(feature_dim, seed=int(rng.integers(0, 10_000)))
        size = int(rng.integers(1, 9))
        if k % 7 == 0:
            labels = [GraspDistribution.one_hot(int(rng.integers(0, 5)))
                      for _ in range(size)]
        else:
            labels = [rand_label() for _ in range(size)]
        batch = [(rng.standard_normal(feature_dim), y) for y in labels]
        coords = sample_coords(rng, head.params(), per_tensor=6)
        worst = max(worst, check_instance(head, batch, coords))

    assert worst < tol, worst
    print(f"[ACCEPTANCE] criterion 3: max relative gradient error "
          f"{worst:.3e} over 100 instances ({n_exhaustive} exhaustive "
          f"coords + 99 sampled heads, F <= 10; tol {tol})")


# --------------------------------------------------------------------------
# criterion 4: default training run on the synthetic set clears 0.95

def test_criterion_4_toy_training_run():
    data = synthetic_toy_dataset(2000, 64, temperature=1.0, seed=0)
    t0 = time.perf_counter()
    _, history = train(data, TrainConfig())
    elapsed = time.perf_counter() - t0
    final_sim = history.val_angular_similarity[-1]
    first_loss, last_loss = history.train_loss[0], history.train_loss[-1]
    assert final_sim >= 0.95, final_sim
    assert last_loss < first_loss, (first_loss, last_loss)
    assert elapsed < 300.0, elapsed
    print(f"[ACCEPTANCE] criterion 4: final val similarity {final_sim:.6f} "
          f"(bar 0.95), train loss {first_loss:.4f} -> {last_loss:.4f}, "
          f"{elapsed:.1f}s (limit 300s)")


# --------------------------------------------------------------------------
# criterion 5: bundled frontier is exactly the six, oracle agrees on 1,000 sets

def test_criterion_5_bundled_frontier_and_oracle():
    front = pareto_frontier(bundled_cards())
    assert [c.name for c in front] == FRONTIER

    rng = np.random.default_rng(505)
    for i in range(1000):
        cards = random_card_set(rng)
        got = [c.name for c in pareto_frontier(cards)]
        want = [c.name for c in brute_force_frontier(cards)]
        assert got == want, i
    print("[ACCEPTANCE] criterion 5: bundled frontier == the six target "
          "models; 1000 random card sets (n <= 50) match the O(n^2) oracle")


# --------------------------------------------------------------------------
# criterion 6: FLOP counts vs a naive loop counter; published cost ratio

def small_layer(rng):
    # every dimension <= 8
    d = lambda lo=1, hi=9: int(rng.integers(lo, hi))
    kind = rng.integers(0, 8)
    if kind == 0:
        return Dense(d(), d())
    if kind == 1:
        k = d(1, 4)
        return Conv2D(d(k, 9), d(k, 9), d(), d(), k, d(1, 3), d(0, 2))
    if kind == 2:
        k = d(1, 4)
        return DepthwiseConv2D(d(k, 9), d(k, 9), d(), k, d(1, 3), d(0, 2), d(1, 3))
    if kind == 3:
        return GlobalAvgPool2D(d(), d(), d())
    if kind == 4:
        k = d(1, 4)
        return MaxPool2D(d(k, 9), d(k, 9), d(), k, d(1, 3))
    if kind == 5:
        return Activation(d())
    if kind == 6:
        return Softmax(d())
    return ElementwiseAdd(d())


def test_criterion_6_flop_counter_vs_loop_oracle():
    rng = np.random.default_rng(606)
    for i in range(500):
        layer = small_layer(rng)
        assert layer_flops(layer) == loop_count(layer), (i, layer)

    by_name = {c.name: c for c in bundled_cards()}
    ratio = by_name["mobilenet_v2_1.4"].flops / by_name["inception_v3"].flops
    assert abs(ratio - 0.20) <= 0.02, ratio
    print(f"[ACCEPTANCE] criterion 6: 500 random layers (dims <= 8) match "
          f"the loop counter exactly; mobilenet_v2_1.4 / inception_v3 = "
          f"{ratio:.4f} (0.20 +/- 0.02)")


# --------------------------------------------------------------------------
# criterion 7: 413 objects x 10 copies, bit-identical, per-stage oracles

def build_objects(rng, n=413):
    objects = []
    for i in range(n):
        h, w = int(rng.integers(2, 7)), int(rng.integers(2, 7))
        ch = 3 if i % 3 else 1
        img = PixelGrid(rng.integers(0, 256, size=(h, w, ch), dtype=np.uint8))
        mask = np.where(rng.random((h, w, 1)) < 0.5, 255, 0).astype(np.uint8)
        mask[h // 2, w // 2, 0] = 255
        if i % 11 == 0:
            mask[0, 0, 0] = 128  # non-255 values count as background
        objects.append((SegmentedObject(image=img, mask=PixelGrid(mask)),
                        GraspDistribution.one_hot(i % 5)))
    return objects


def blur_oracle(pixels, sigma):
    radius = math.ceil(3.0 * sigma)
    off = np.arange(-radius, radius + 1, dtype=np.float64)
    k1 = np.exp(-(off ** 2) / (2.0 * sigma * sigma))
    k1 /= k1.sum()
    k2 = np.outer(k1, k1)
    src = pixels.astype(np.float64)
    padded = np.pad(src, ((radius, radius), (radius, radius), (0, 0)), mode="edge")
    h, w, ch = src.shape
    out = np.zeros_like(src)
    for r in range(h):
        for c in range(w):
            window = padded[r : r + 2 * radius + 1, c : c + 2 * radius + 1]
            out[r, c] = np.tensordot(k2, window, axes=([0, 1], [0, 1]))
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def reconstruct_copy(obj, cfg, obj_idx, copy_idx):
    """Replays one (object, copy) lane with independent stage math."""
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, obj_idx, copy_idx]))
    sigma = rng.uniform(*cfg.blur_sigma_range)
    variance = rng.uniform(*cfg.noise_variance_range)
    ch = obj.image.channels
    blurred = blur_oracle(obj.image.pixels, sigma)
    samples = rng.normal(128.0, math.sqrt(variance),
                         size=(cfg.output_h, cfg.output_w, ch))
    out = np.clip(np.rint(samples), 0, 255).astype(np.uint8)
    rows, cols = np.nonzero(obj.mask.pixels[:, :, 0] == 255)
    top, left = rows.min(), cols.min()
    bh, bw = rows.max() - top + 1, cols.max() - left + 1
    x = int(rng.integers(0, cfg.output_w - bw + 1))
    y = int(rng.integers(0, cfg.output_h - bh + 1))
    for r, c in zip(rows, cols):
        out[y + r - top, x + c - left] = blurred[r, c]
    return out


def test_criterion_7_augmentation_determinism_and_oracles():
    cfg = AugmentConfig(output_w=12, output_h=10, copies_per_object=10, seed=42)
    objects = build_objects(np.random.default_rng(413))
    first = augment_dataset(objects, cfg)
    assert len(first) == 4130

    second = augment_dataset(objects, cfg)
    for (img_a, dist_a), (img_b, dist_b) in zip(first, second):
        assert np.array_equal(img_a.pixels, img_b.pixels)
        assert dist_a.p == dist_b.p
    for i, (_, dist) in enumerate(first):
        assert dist.p == objects[i // 10][1].p

    rng = np.random.default_rng(7)
    picks = {(0, 0), (0, 9), (412, 0), (412, 9)}
    while len(picks) < 12:
        picks.add((int(rng.integers(0, 413)), int(rng.integers(0, 10))))
    for obj_idx, copy_idx in sorted(picks):
        want = reconstruct_copy(objects[obj_idx][0], cfg, obj_idx, copy_idx)
        got = first[obj_idx * 10 + copy_idx][0].pixels
        assert np.array_equal(got, want), (obj_idx, copy_idx)
    print(f"[ACCEPTANCE] criterion 7: 413 objects x 10 copies = {len(first)} "
          f"images, bit-identical on rerun; {len(picks)} copies rebuilt "
          f"through independent blur/noise/composite oracles")


# --------------------------------------------------------------------------
# criterion 8: decision window semantics over 1,000 frames

def test_criterion_8_fusion_window_oracle():
    # constant input is a fixed point from the very first frame
    win = fusion.DecisionWindow(capacity=60)
    probe = GraspDistribution((0.4, 0.3, 0.2, 0.05, 0.05))
    for i in range(70):
        wd = fusion.push_and_decide(win, probe)
        # averaging n copies of 0.4 lands within 1 ulp, not bitwise equal
        assert max(abs(a - b) for a, b in zip(wd.average.p, probe.p)) <= 1e-12
        assert wd.decision.value == 0
        assert wd.window_full == (i >= 59)

    # FIFO eviction: the oldest sample leaves first
    win = fusion.DecisionWindow(capacity=3)
    for code in range(4):
        fusion.push_and_decide(win, GraspDistribution.one_hot(code))
    assert win.snapshot() == tuple(GraspDistribution.one_hot(c) for c in (1, 2, 3))

    # sliding mean over 1,000 random frames against a per-frame recomputation
    rng = np.random.default_rng(808)
    win = fusion.DecisionWindow(capacity=60)
    seen = []
    worst = 0.0
    for i in range(1000):
        v = rng.uniform(0.01, 1.0, size=5)
        d = GraspDistribution(tuple(v / v.sum()))
        seen.append(d)
        wd = fusion.push_and_decide(win, d)
        tail = seen[-60:]
        want = [math.fsum(s.p[j] for s in tail) / len(tail) for j in range(5)]
        worst = max(worst, max(abs(a - b) for a, b in zip(wd.average.p, want)))
        assert wd.window_full == (len(seen) >= 60)
        assert wd.decision.value == max(range(5), key=lambda j: (wd.average.p[j], -j))
    assert worst <= 1e-12, worst
    print(f"[ACCEPTANCE] criterion 8: fixed point, FIFO eviction, and "
          f"1000-frame sliding mean (capacity 60) within {worst:.2e} "
          f"of the oracle (tol 1e-12)")


# --------------------------------------------------------------------------
# criterion 9: repeated training with one seed is byte-identical

def test_criterion_9_training_reproducibility(tmp_path, capsys):
    feats = tmp_path / "toy.gfea"
    assert run(["toy-data", "--n", "64", "--feature-dim", "8", "--seed", "5",
                "--out", str(feats)]) == 0
    args = ["train", "--features", str(feats), "--seed", "3",
            "--epochs-per-phase", "3", "--batch-size", "16"]
    d1, d2 = tmp_path / "run1", tmp_path / "run2"
    assert run(args + ["--out-dir", str(d1)]) == 0
    assert run(args + ["--out-dir", str(d2)]) == 0
    capsys.readouterr()
    ck1 = (d1 / "checkpoint.ghed").read_bytes()
    assert ck1 == (d2 / "checkpoint.ghed").read_bytes()
    h1 = (d1 / "history.csv").read_bytes()
    assert h1 == (d2 / "history.csv").read_bytes()
    print(f"[ACCEPTANCE] criterion 9: repeated train runs produced "
          f"byte-identical checkpoint ({len(ck1)} bytes) and history "
          f"({len(h1)} bytes)")
