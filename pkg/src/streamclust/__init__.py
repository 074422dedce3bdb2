"""Streaming short-text clustering with inverted-index candidate selection
and adaptive similarity thresholds."""

from .clusters import ClusterFeatureVector, ClusterStore, StoreStats
from .datasets import (
    Component,
    DuplicateGraph,
    LabeledDataset,
    LabeledItem,
    build_so_dataset,
    connected_components,
    load_dataset,
    save_dataset,
    shuffle,
)
from .engine import (
    AssignmentRecord,
    Decision,
    EngineConfig,
    ExhaustiveEngine,
    StreamEngine,
    decide,
    similarity,
)
from .evaluation import TrialReport, TrialResult, compare_speed, nmi, run_trials
from .features import FeatureKind, TextVector, extract_features, tokenize
from .index import PostingIndex
from .synthetic import separable_dataset

__version__ = "0.1.0"

__all__ = [
    "AssignmentRecord",
    "ClusterFeatureVector",
    "ClusterStore",
    "Component",
    "Decision",
    "DuplicateGraph",
    "EngineConfig",
    "ExhaustiveEngine",
    "FeatureKind",
    "LabeledDataset",
    "LabeledItem",
    "PostingIndex",
    "StoreStats",
    "StreamEngine",
    "TextVector",
    "TrialReport",
    "TrialResult",
    "build_so_dataset",
    "compare_speed",
    "connected_components",
    "decide",
    "extract_features",
    "load_dataset",
    "nmi",
    "run_trials",
    "save_dataset",
    "separable_dataset",
    "shuffle",
    "similarity",
    "tokenize",
    "__version__",
]
