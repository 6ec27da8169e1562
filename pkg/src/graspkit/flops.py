"""Floating-point operation counts for symbolic network descriptions.

Counts one FLOP per scalar multiply, add, divide, exp, or comparison, so a
multiply-accumulate costs 2. Published model tables disagree on this
convention (several report multiply-adds); the bundled model-card data uses
this one consistently. These counts support relative comparisons between
architectures and are not a substitute for measuring execution time on a
deployment target.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Union

from .errors import InvalidLayerError, ShapeMismatchError


@dataclass(frozen=True)
class Conv2D:
    in_h: int
    in_w: int
    in_ch: int
    out_ch: int
    kernel: int
    stride: int = 1
    padding: int = 0


@dataclass(frozen=True)
class DepthwiseConv2D:
    in_h: int
    in_w: int
    channels: int
    kernel: int
    stride: int = 1
    padding: int = 0
    depth_multiplier: int = 1


@dataclass(frozen=True)
class Dense:
    in_dim: int
    out_dim: int


@dataclass(frozen=True)
class GlobalAvgPool2D:
    in_h: int
    in_w: int
    channels: int


@dataclass(frozen=True)
class Activation:
    size: int


@dataclass(frozen=True)
class Softmax:
    size: int


@dataclass(frozen=True)
class MaxPool2D:
    in_h: int
    in_w: int
    channels: int
    kernel: int
    stride: int = 1


@dataclass(frozen=True)
class ElementwiseAdd:
    size: int


LayerSpec = Union[
    Conv2D,
    DepthwiseConv2D,
    Dense,
    GlobalAvgPool2D,
    Activation,
    Softmax,
    MaxPool2D,
    ElementwiseAdd,
]

_LAYER_KINDS: dict[str, type] = {
    cls.__name__: cls
    for cls in (
        Conv2D,
        DepthwiseConv2D,
        Dense,
        GlobalAvgPool2D,
        Activation,
        Softmax,
        MaxPool2D,
        ElementwiseAdd,
    )
}


@dataclass(frozen=True)
class NetworkSpec:
    name: str
    layers: tuple[LayerSpec, ...]


def _check_positive(layer: LayerSpec) -> None:
    for f in fields(layer):
        value = getattr(layer, f.name)
        minimum = 0 if f.name == "padding" else 1
        if not isinstance(value, int) or value < minimum:
            raise InvalidLayerError(
                f"{type(layer).__name__}.{f.name} must be an integer >= "
                f"{minimum}, got {value!r}"
            )


def _window_out(size: int, kernel: int, stride: int, padding: int) -> int:
    out = (size + 2 * padding - kernel) // stride + 1
    if out < 1:
        raise InvalidLayerError(
            f"kernel {kernel} (stride {stride}, padding {padding}) does not "
            f"fit input extent {size}"
        )
    return out


def layer_flops(layer: LayerSpec) -> int:
    """FLOPs for one layer, bias included, multiply-accumulate counted as 2."""
    _check_positive(layer)
    if isinstance(layer, Dense):
        return 2 * layer.in_dim * layer.out_dim + layer.out_dim
    if isinstance(layer, Conv2D):
        out_h = _window_out(layer.in_h, layer.kernel, layer.stride, layer.padding)
        out_w = _window_out(layer.in_w, layer.kernel, layer.stride, layer.padding)
        per_position = 2 * layer.kernel**2 * layer.in_ch + 1
        return out_h * out_w * layer.out_ch * per_position
    if isinstance(layer, DepthwiseConv2D):
        out_h = _window_out(layer.in_h, layer.kernel, layer.stride, layer.padding)
        out_w = _window_out(layer.in_w, layer.kernel, layer.stride, layer.padding)
        per_position = 2 * layer.kernel**2 + 1
        return out_h * out_w * layer.channels * layer.depth_multiplier * per_position
    if isinstance(layer, GlobalAvgPool2D):
        return layer.channels * layer.in_h * layer.in_w + layer.channels
    if isinstance(layer, Activation):
        return layer.size
    if isinstance(layer, Softmax):
        # per element: max-subtract, exp, sum-add, divide
        return 4 * layer.size
    if isinstance(layer, MaxPool2D):
        out_h = _window_out(layer.in_h, layer.kernel, layer.stride, 0)
        out_w = _window_out(layer.in_w, layer.kernel, layer.stride, 0)
        return out_h * out_w * layer.channels * (layer.kernel**2 - 1)
    if isinstance(layer, ElementwiseAdd):
        return layer.size
    raise InvalidLayerError(f"unknown layer kind: {type(layer).__name__}")


def _input_shape(layer: LayerSpec) -> tuple[int, ...]:
    """Declared input shape: (h, w, c) for spatial layers, (n,) for flat."""
    if isinstance(layer, Conv2D):
        return (layer.in_h, layer.in_w, layer.in_ch)
    if isinstance(layer, (DepthwiseConv2D, GlobalAvgPool2D, MaxPool2D)):
        return (layer.in_h, layer.in_w, layer.channels)
    if isinstance(layer, Dense):
        return (layer.in_dim,)
    return (layer.size,)


def _output_shape(layer: LayerSpec) -> tuple[int, ...]:
    if isinstance(layer, Conv2D):
        out_h = _window_out(layer.in_h, layer.kernel, layer.stride, layer.padding)
        out_w = _window_out(layer.in_w, layer.kernel, layer.stride, layer.padding)
        return (out_h, out_w, layer.out_ch)
    if isinstance(layer, DepthwiseConv2D):
        out_h = _window_out(layer.in_h, layer.kernel, layer.stride, layer.padding)
        out_w = _window_out(layer.in_w, layer.kernel, layer.stride, layer.padding)
        return (out_h, out_w, layer.channels * layer.depth_multiplier)
    if isinstance(layer, MaxPool2D):
        out_h = _window_out(layer.in_h, layer.kernel, layer.stride, 0)
        out_w = _window_out(layer.in_w, layer.kernel, layer.stride, 0)
        return (out_h, out_w, layer.channels)
    if isinstance(layer, GlobalAvgPool2D):
        return (layer.channels,)
    if isinstance(layer, Dense):
        return (layer.out_dim,)
    return (layer.size,)


def _flat_size(shape: tuple[int, ...]) -> int:
    n = 1
    for d in shape:
        n *= d
    return n


def _compatible(prev_out: tuple[int, ...], layer: LayerSpec) -> bool:
    expected = _input_shape(layer)
    if len(expected) == 1:
        # dense and elementwise layers accept any shape of matching flat size
        return _flat_size(prev_out) == expected[0]
    return prev_out == expected


def network_flops(network: NetworkSpec) -> int:
    """Total FLOPs over all layers, validating shape chaining."""
    total = 0
    prev_out: tuple[int, ...] | None = None
    for index, layer in enumerate(network.layers):
        _check_positive(layer)
        if prev_out is not None and not _compatible(prev_out, layer):
            raise ShapeMismatchError(
                f"{network.name}: layer {index} ({type(layer).__name__}) "
                f"expects input {_input_shape(layer)}, but previous layer "
                f"produces {prev_out}"
            )
        total += layer_flops(layer)
        prev_out = _output_shape(layer)
    return total


def head_spec(feature_h: int, feature_w: int, feature_ch: int) -> NetworkSpec:
    """The replacement top: GAP, then FC 256 / 128 / 5 with ReLU and softmax."""
    if feature_h < 1 or feature_w < 1 or feature_ch < 1:
        raise InvalidLayerError("feature map dimensions must be positive")
    return NetworkSpec(
        name=f"grasp-head-{feature_h}x{feature_w}x{feature_ch}",
        layers=(
            GlobalAvgPool2D(feature_h, feature_w, feature_ch),
            Dense(feature_ch, 256),
            Activation(256),
            Dense(256, 128),
            Activation(128),
            Dense(128, 5),
            Softmax(5),
        ),
    )


# ---------------------------------------------------------------------------
# JSON interchange: {"name": str, "layers": [{"kind": str, ...dims}]}

def layer_to_dict(layer: LayerSpec) -> dict:
    d = {"kind": type(layer).__name__}
    for f in fields(layer):
        d[f.name] = getattr(layer, f.name)
    return d


def layer_from_dict(d: dict) -> LayerSpec:
    if "kind" not in d:
        raise InvalidLayerError(f"layer entry missing 'kind': {d!r}")
    kind = d["kind"]
    cls = _LAYER_KINDS.get(kind)
    if cls is None:
        raise InvalidLayerError(f"unknown layer kind: {kind!r}")
    args = {k: v for k, v in d.items() if k != "kind"}
    try:
        layer = cls(**args)
    except TypeError as exc:
        raise InvalidLayerError(f"bad fields for {kind}: {exc}") from None
    _check_positive(layer)
    return layer


def read_network_spec(path: str | Path) -> NetworkSpec:
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "name" not in doc or "layers" not in doc:
        raise InvalidLayerError(f"{path}: expected object with 'name' and 'layers'")
    layers = tuple(layer_from_dict(entry) for entry in doc["layers"])
    return NetworkSpec(name=str(doc["name"]), layers=layers)


def write_network_spec(path: str | Path, network: NetworkSpec) -> None:
    doc = {"name": network.name, "layers": [layer_to_dict(l) for l in network.layers]}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
