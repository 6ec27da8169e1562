"""Pixel-level dataset augmentation and a synthetic feature-space toy set.

The image chain mirrors how the training corpus was built: take a segmented
object, blur it, drop it onto a fresh Gaussian-noise background at a random
location, keep the soft label unchanged. Ten copies per object turns 413
segmented objects into 4130 training images.

The toy generator skips pixels entirely and emits feature vectors with a
hidden-linear-map softmax labeling, sized so the dense head can be trained
to high validation similarity in seconds.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import GraspDistribution, _open_csv_rows, validate_distribution
from .errors import (
    GraspKitError,
    InvalidInputError,
    PlacementOutOfBoundsError,
    ShapeMismatchError,
)
from .features import FeatureDataset


@dataclass(frozen=True)
class PixelGrid:
    """8-bit image, shape (height, width, channels), channels 1 or 3."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        px = np.asarray(self.pixels)
        if px.dtype != np.uint8:
            raise InvalidInputError(f"pixels must be uint8, got {px.dtype}")
        if px.ndim != 3 or px.shape[2] not in (1, 3):
            raise ShapeMismatchError(
                f"pixels must be (h, w, 1|3), got shape {px.shape}"
            )
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise InvalidInputError("image extent must be positive")
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]


@dataclass(frozen=True)
class SegmentedObject:
    """An object image plus its binary cutout mask (255 = object pixel)."""

    image: PixelGrid
    mask: PixelGrid

    def __post_init__(self) -> None:
        if self.mask.channels != 1:
            raise ShapeMismatchError("mask must be single-channel")
        if (self.mask.height, self.mask.width) != (self.image.height, self.image.width):
            raise ShapeMismatchError(
                f"mask extent {self.mask.height}x{self.mask.width} does not "
                f"match image {self.image.height}x{self.image.width}"
            )

    def bounding_box(self) -> tuple[int, int, int, int]:
        """(top, left, height, width) of the mask's object pixels."""
        ys, xs = np.nonzero(self.mask.pixels[:, :, 0] == 255)
        if ys.size == 0:
            raise InvalidInputError("mask has no object pixels")
        top, left = int(ys.min()), int(xs.min())
        return top, left, int(ys.max()) - top + 1, int(xs.max()) - left + 1


@dataclass(frozen=True)
class AugmentConfig:
    output_w: int
    output_h: int
    blur_sigma_range: tuple[float, float] = (0.5, 2.0)
    noise_variance_range: tuple[float, float] = (25.0, 400.0)
    copies_per_object: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if self.output_w < 1 or self.output_h < 1:
            raise InvalidInputError("output extent must be positive")
        if self.copies_per_object < 1:
            raise InvalidInputError("copies_per_object must be >= 1")
        for name in ("blur_sigma_range", "noise_variance_range"):
            lo, hi = getattr(self, name)
            if not (0 < lo <= hi):
                raise InvalidInputError(f"{name} must satisfy 0 < lo <= hi")


def gaussian_noise_background(
    w: int,
    h: int,
    variance: float,
    rng: np.random.Generator,
    channels: int = 1,
) -> PixelGrid:
    """Mid-gray Gaussian noise: every sample ~ N(128, sqrt(variance))."""
    if w < 1 or h < 1:
        raise InvalidInputError("background extent must be positive")
    if variance <= 0:
        raise InvalidInputError("variance must be positive")
    samples = rng.normal(128.0, math.sqrt(variance), size=(h, w, channels))
    return PixelGrid(np.clip(np.rint(samples), 0, 255).astype(np.uint8))


def _gaussian_kernel(sigma: float) -> np.ndarray:
    # half-width 3 sigma covers 99.7% of the mass; normalized to sum 1
    radius = math.ceil(3.0 * sigma)
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(offsets**2) / (2.0 * sigma * sigma))
    return kernel / kernel.sum()


def _convolve_axis(arr: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    radius = len(kernel) // 2
    n = arr.shape[axis]
    # clamp-to-edge: out-of-range taps read the nearest border sample
    idx = np.clip(np.arange(-radius, n + radius), 0, n - 1)
    padded = np.take(arr, idx, axis=axis)
    out = np.zeros(arr.shape, dtype=np.float64)
    window = [slice(None)] * arr.ndim
    for i, weight in enumerate(kernel):
        window[axis] = slice(i, i + n)
        out += weight * padded[tuple(window)]
    return out


def gaussian_blur(img: PixelGrid, sigma: float) -> PixelGrid:
    """Separable Gaussian blur with clamp-to-edge borders, same extent out."""
    if sigma <= 0:
        raise InvalidInputError("sigma must be positive")
    kernel = _gaussian_kernel(sigma)
    smooth = img.pixels.astype(np.float64)
    smooth = _convolve_axis(smooth, kernel, axis=1)
    smooth = _convolve_axis(smooth, kernel, axis=0)
    return PixelGrid(np.clip(np.rint(smooth), 0, 255).astype(np.uint8))


def composite(obj: SegmentedObject, bg: PixelGrid, x: int, y: int) -> PixelGrid:
    """Paste the object's masked pixels onto bg, bounding box at (x, y).

    Binary masking: background survives wherever the mask is not 255. An
    all-background mask pastes nothing.
    """
    if obj.image.channels != bg.channels:
        raise ShapeMismatchError(
            f"object has {obj.image.channels} channels, background {bg.channels}"
        )
    out = bg.pixels.copy()
    mask_plane = obj.mask.pixels[:, :, 0] == 255
    if not mask_plane.any():
        return PixelGrid(out)
    top, left, bh, bw = obj.bounding_box()
    if x < 0 or y < 0 or x + bw > bg.width or y + bh > bg.height:
        raise PlacementOutOfBoundsError(
            f"{bw}x{bh} object box at ({x}, {y}) exceeds "
            f"{bg.width}x{bg.height} background"
        )
    box_mask = mask_plane[top : top + bh, left : left + bw]
    box_img = obj.image.pixels[top : top + bh, left : left + bw]
    region = out[y : y + bh, x : x + bw]
    region[box_mask] = box_img[box_mask]
    return PixelGrid(out)


def augment_dataset(
    objects: Sequence[tuple[SegmentedObject, GraspDistribution]],
    cfg: AugmentConfig,
) -> list[tuple[PixelGrid, GraspDistribution]]:
    """Blur, re-background, and randomly place every object, copies times.

    Each (object, copy) pair gets its own generator derived from
    (cfg.seed, object index, copy index), so outputs are reproducible and
    order-independent of any internal batching.
    """
    out: list[tuple[PixelGrid, GraspDistribution]] = []
    for obj_idx, (obj, label) in enumerate(objects):
        top, left, bh, bw = obj.bounding_box()
        if bw > cfg.output_w or bh > cfg.output_h:
            raise PlacementOutOfBoundsError(
                f"object {obj_idx}: {bw}x{bh} box cannot fit "
                f"{cfg.output_w}x{cfg.output_h} output"
            )
        for copy_idx in range(cfg.copies_per_object):
            rng = np.random.default_rng(
                np.random.SeedSequence([cfg.seed, obj_idx, copy_idx])
            )
            sigma = rng.uniform(*cfg.blur_sigma_range)
            variance = rng.uniform(*cfg.noise_variance_range)
            blurred = SegmentedObject(
                image=gaussian_blur(obj.image, sigma), mask=obj.mask
            )
            bg = gaussian_noise_background(
                cfg.output_w,
                cfg.output_h,
                variance,
                rng,
                channels=obj.image.channels,
            )
            x = int(rng.integers(0, cfg.output_w - bw + 1))
            y = int(rng.integers(0, cfg.output_h - bh + 1))
            out.append((composite(blurred, bg, x, y), label))
    return out


TOY_LOGIT_SLOPES = (-4.0, -2.0, 0.0, 2.0, 4.0)


def synthetic_toy_dataset(
    n_samples: int,
    feature_dim: int,
    temperature: float = 1.0,
    seed: int = 0,
) -> FeatureDataset:
    """Feature rows with softmax(M x / temperature) soft labels.

    M is a rank-one hidden map: row i equals TOY_LOGIT_SLOPES[i] times one
    shared unit direction drawn from the seeded generator, so all five
    logits are fixed multiples of a single scalar projection of x. Inputs
    are standard normal. Along that axis labels sweep from one one-hot
    corner through exact uniform (projection zero) to the opposite corner;
    lower temperature makes the sweep sharper. The label field having one
    intrinsic degree of freedom is what lets a small dense head interpolate
    it to high validation similarity from a few thousand samples, while a
    full-rank map at the same sharpness stalls near 0.94.
    """
    if n_samples < 10:
        raise InvalidInputError("need at least 10 samples")
    if feature_dim < 5:
        raise InvalidInputError("feature_dim must be >= 5")
    if temperature <= 0:
        raise InvalidInputError("temperature must be positive")
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    direction = rng.standard_normal(feature_dim)
    direction /= math.sqrt(float(direction @ direction))
    hidden_map = np.outer(np.asarray(TOY_LOGIT_SLOPES), direction)
    xs = rng.standard_normal((n_samples, feature_dim))
    logits = xs @ hidden_map.T / temperature
    logits -= logits.max(axis=1, keepdims=True)
    probs = np.exp(logits)
    probs /= probs.sum(axis=1, keepdims=True)
    return FeatureDataset(
        image_ids=tuple(f"toy-{i:05d}" for i in range(n_samples)),
        features=xs,
        labels=tuple(GraspDistribution(tuple(row)) for row in probs),
    )


AUGMENT_MANIFEST_HEADER = ["image_file", "p0", "p1", "p2", "p3", "p4"]


def write_augment_manifest(
    path: str | Path,
    rows: Sequence[tuple[str, GraspDistribution]],
    comments: Sequence[str] = (),
) -> None:
    """Map each emitted image file to its soft label."""
    with open(path, "w", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(AUGMENT_MANIFEST_HEADER)
        for image_file, dist in rows:
            writer.writerow([image_file] + [repr(p) for p in dist])


def read_augment_manifest(
    path: str | Path,
) -> list[tuple[str, GraspDistribution]]:
    out = []
    for row in _open_csv_rows(path, AUGMENT_MANIFEST_HEADER):
        if len(row) != 6:
            raise GraspKitError(f"{path}: malformed manifest row {row!r}")
        out.append((row[0], validate_distribution(float(x) for x in row[1:])))
    return out


# ---------------------------------------------------------------------------
# netpbm image I/O: P5 for single-channel, P6 for three-channel

def write_image(path: str | Path, img: PixelGrid) -> None:
    magic = b"P5" if img.channels == 1 else b"P6"
    with open(path, "wb") as fh:
        fh.write(magic + b"\n%d %d\n255\n" % (img.width, img.height))
        fh.write(img.pixels.tobytes())


def read_image(path: str | Path) -> PixelGrid:
    with open(path, "rb") as fh:
        blob = fh.read()
    # header: magic, width, height, maxval as whitespace-separated tokens,
    # '#' comments allowed, one whitespace byte before the raster
    header = re.match(
        rb"(P[56])\s+(?:#[^\n]*\n\s*)*(\d+)\s+(?:#[^\n]*\n\s*)*(\d+)"
        rb"\s+(?:#[^\n]*\n\s*)*(\d+)\s",
        blob,
    )
    if header is None:
        raise GraspKitError(f"{path}: not a binary PGM/PPM file")
    magic, w, h, maxval = (
        header.group(1),
        int(header.group(2)),
        int(header.group(3)),
        int(header.group(4)),
    )
    if maxval != 255:
        raise GraspKitError(f"{path}: only maxval 255 supported, got {maxval}")
    channels = 1 if magic == b"P5" else 3
    raster = blob[header.end() :]
    expected = w * h * channels
    if len(raster) != expected:
        raise GraspKitError(
            f"{path}: raster is {len(raster)} bytes, expected {expected}"
        )
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(h, w, channels)
    return PixelGrid(pixels.copy())
