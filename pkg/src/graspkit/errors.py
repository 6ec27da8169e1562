"""Exception types raised by the toolkit.

Every error the library raises deliberately derives from GraspKitError so
callers (and the CLI) can distinguish toolkit failures from programming
mistakes.
"""

from __future__ import annotations


class GraspKitError(Exception):
    """Base class for all toolkit errors."""


# ---------------------------------------------------------------------------
# distributions / annotations

class DistributionError(GraspKitError):
    """A raw vector failed grasp-distribution validation."""


class WrongArityError(DistributionError):
    """Vector does not have exactly five entries."""


class NegativeEntryError(DistributionError):
    """Vector has an entry below the negative tolerance."""


class SumNotOneError(DistributionError):
    """Vector entries do not sum to one within tolerance."""


class InvalidAnnotationError(GraspKitError):
    """Annotation set is empty or inconsistent."""


# ---------------------------------------------------------------------------
# metrics / shapes

class ZeroVectorError(GraspKitError):
    """Similarity requested for a vector with zero norm."""


class ShapeMismatchError(GraspKitError):
    """Two containers that must agree in shape do not."""


class EmptyDatasetError(GraspKitError):
    """An operation that needs at least one sample got none."""


class InvalidInputError(GraspKitError):
    """Input is outside the operation's accepted domain (non-finite, empty,
    or out of range)."""


# ---------------------------------------------------------------------------
# flops / pareto

class InvalidLayerError(GraspKitError):
    """Layer dimensions do not describe a computable layer."""


class EmptyInputError(GraspKitError):
    """Frontier or selection requested over an empty card set."""


# ---------------------------------------------------------------------------
# training

class EmptyBatchError(GraspKitError):
    """Gradient computation requested on an empty batch."""


class InsufficientDataError(GraspKitError):
    """Dataset too small to produce both train and validation splits."""


# ---------------------------------------------------------------------------
# augmentation

class PlacementOutOfBoundsError(GraspKitError):
    """Object placement does not fit inside the background."""


# ---------------------------------------------------------------------------
# feature files / checkpoints / config

class FeatureFileError(GraspKitError):
    """Base class for feature-file and checkpoint format errors."""


class BadMagicError(FeatureFileError):
    """File does not start with the expected magic bytes."""


class UnsupportedVersionError(FeatureFileError):
    """File format version is not supported by this reader."""


class LengthMismatchError(FeatureFileError):
    """Payload length disagrees with the header."""


class ManifestMismatchError(FeatureFileError):
    """Sidecar manifest disagrees with the binary payload."""


class ConfigError(GraspKitError):
    """Flat config file is malformed."""
