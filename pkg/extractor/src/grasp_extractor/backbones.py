"""The five supported backbones and their documented pooled widths.

Names match the model cards of the training toolkit. `feature_dim` is the
channel count after global average pooling of the last feature map:
1024 * alpha for MobileNetV1, the divisible-by-8 rounding of 1280 * alpha
for MobileNetV2 (1280 at 1.0, 1792 at 1.4), and 2048 for InceptionV3.
Building a model re-checks this and fails loudly on disagreement.

TensorFlow imports are deferred to build time so that metadata queries,
label parsing, and `--help` stay instant.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import FeatureWidthError, UnknownBackboneError, WeightsUnavailableError

WEIGHTS_MODES = ("auto", "imagenet", "random")


@dataclass(frozen=True)
class BackboneSpec:
    keras_name: str  # attribute looked up on tf.keras.applications
    feature_dim: int  # documented post-pool width
    input_size: int  # published default input resolution (square)
    alpha: float | None = None  # width multiplier, where the family has one


BACKBONES: dict[str, BackboneSpec] = {
    "inception_v3": BackboneSpec("InceptionV3", 2048, 299),
    "mobilenet_v1_0.25": BackboneSpec("MobileNet", 256, 224, alpha=0.25),
    "mobilenet_v1_0.50": BackboneSpec("MobileNet", 512, 224, alpha=0.5),
    "mobilenet_v2_1.0": BackboneSpec("MobileNetV2", 1280, 224, alpha=1.0),
    "mobilenet_v2_1.4": BackboneSpec("MobileNetV2", 1792, 224, alpha=1.4),
}


def get_spec(name: str) -> BackboneSpec:
    try:
        return BACKBONES[name]
    except KeyError:
        known = ", ".join(sorted(BACKBONES))
        raise UnknownBackboneError(f"unknown backbone {name!r}; known: {known}") from None


def _make_model(spec: BackboneSpec, weights: str | None):
    os.environ.setdefault("TF_CPP_MIN_LOG_LEVEL", "3")
    import tensorflow as tf

    factory = getattr(tf.keras.applications, spec.keras_name)
    kwargs = dict(
        include_top=False,
        pooling="avg",
        weights=weights,
        input_shape=(spec.input_size, spec.input_size, 3),
    )
    if spec.alpha is not None:
        kwargs["alpha"] = spec.alpha
    return factory(**kwargs)


def build_backbone(name: str, weights: str = "auto"):
    """Build the pooled feature model; returns (model, weights actually used).

    "auto" tries the pretrained checkpoint and falls back to random
    initialization when it cannot be fetched (callers can warn by comparing
    the returned mode against the request).
    """
    spec = get_spec(name)
    if weights not in WEIGHTS_MODES:
        raise WeightsUnavailableError(
            f"weights mode {weights!r}, expected one of {', '.join(WEIGHTS_MODES)}"
        )
    if weights == "random":
        model, used = _make_model(spec, None), "random"
    elif weights == "imagenet":
        try:
            model, used = _make_model(spec, "imagenet"), "imagenet"
        except Exception as exc:
            raise WeightsUnavailableError(
                f"{name}: imagenet checkpoint unavailable ({exc})"
            ) from exc
    else:
        try:
            model, used = _make_model(spec, "imagenet"), "imagenet"
        except Exception:
            model, used = _make_model(spec, None), "random"
    width = int(model.output_shape[-1])
    if width != spec.feature_dim:
        raise FeatureWidthError(
            f"{name}: model pools to {width} channels, documented {spec.feature_dim}"
        )
    return model, used
