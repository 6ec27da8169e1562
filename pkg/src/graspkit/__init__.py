"""graspkit: soft grasp-type distributions, metrics, training, selection.

The package turns annotator votes into probability labels over five grasp
types, measures predictions with an angular similarity metric, trains a
small dense head on fixed feature vectors, counts network FLOPs, picks
Pareto-efficient backbones, augments segmented-object images, and fuses
per-frame decisions over a sliding window.
"""

from .augment import (
    AugmentConfig,
    PixelGrid,
    SegmentedObject,
    augment_dataset,
    composite,
    gaussian_blur,
    gaussian_noise_background,
    read_image,
    synthetic_toy_dataset,
    write_image,
)
from .core import (
    AnnotationSet,
    GraspDistribution,
    GraspType,
    N_GRASPS,
    aggregate_annotations,
    argmax_grasp,
    read_annotations,
    read_labels,
    validate_distribution,
    write_labels,
)
from .errors import GraspKitError
from .features import FeatureDataset, read_feature_file, write_feature_file
from .flops import NetworkSpec, head_spec, layer_flops, network_flops
from .fusion import DecisionWindow, FusionWeights, fuse, push_and_decide
from .head import (
    AdamState,
    DenseHead,
    TrainConfig,
    TrainingHistory,
    adam_step,
    evaluate,
    forward,
    loss_and_gradients,
    predict,
    read_checkpoint,
    train,
    write_checkpoint,
    xavier_init,
)
from .metrics import angular_similarity, cross_entropy, mean_angular_similarity
from .pareto import (
    CardSet,
    ModelCard,
    bundled_cards,
    dominates,
    pareto_frontier,
    select_for_budget,
)

__version__ = "0.1.0"

__all__ = [
    "AdamState",
    "AnnotationSet",
    "AugmentConfig",
    "CardSet",
    "DecisionWindow",
    "DenseHead",
    "FeatureDataset",
    "FusionWeights",
    "GraspDistribution",
    "GraspKitError",
    "GraspType",
    "ModelCard",
    "N_GRASPS",
    "NetworkSpec",
    "PixelGrid",
    "SegmentedObject",
    "TrainConfig",
    "TrainingHistory",
    "adam_step",
    "aggregate_annotations",
    "angular_similarity",
    "argmax_grasp",
    "augment_dataset",
    "bundled_cards",
    "composite",
    "cross_entropy",
    "dominates",
    "evaluate",
    "forward",
    "fuse",
    "gaussian_blur",
    "gaussian_noise_background",
    "head_spec",
    "layer_flops",
    "loss_and_gradients",
    "mean_angular_similarity",
    "network_flops",
    "pareto_frontier",
    "predict",
    "push_and_decide",
    "read_annotations",
    "read_checkpoint",
    "read_feature_file",
    "read_image",
    "read_labels",
    "select_for_budget",
    "synthetic_toy_dataset",
    "train",
    "validate_distribution",
    "write_checkpoint",
    "write_feature_file",
    "write_image",
    "write_labels",
    "xavier_init",
]
