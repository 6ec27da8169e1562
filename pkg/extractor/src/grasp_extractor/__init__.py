"""Feature exporter: pretrained Keras backbones in, GFEA feature files out.

Couples to the training toolkit only through the file format.
"""

from .backbones import BACKBONES, BackboneSpec, build_backbone, get_spec
from .errors import (
    ExtractorError,
    FeatureWidthError,
    LabelFormatError,
    MissingImageError,
    MissingLabelError,
    UndecodableImageError,
    UnknownBackboneError,
    WeightsUnavailableError,
)
from .extract import PREPROCESSING_ID, extract
from .gfea import GFEA_FORMAT_VERSION, GFEA_MAGIC, manifest_path, write_gfea
from .images import read_image
from .labels import LABELS_HEADER, read_labels

__version__ = "0.1.0"

__all__ = [
    "BACKBONES",
    "BackboneSpec",
    "ExtractorError",
    "FeatureWidthError",
    "GFEA_FORMAT_VERSION",
    "GFEA_MAGIC",
    "LABELS_HEADER",
    "LabelFormatError",
    "MissingImageError",
    "MissingLabelError",
    "PREPROCESSING_ID",
    "UndecodableImageError",
    "UnknownBackboneError",
    "WeightsUnavailableError",
    "build_backbone",
    "extract",
    "get_spec",
    "manifest_path",
    "read_image",
    "read_labels",
    "write_gfea",
    "__version__",
]
