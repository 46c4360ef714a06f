"""Surrogate-model development pipeline for expensive simulation codes."""

from .dataset import Dataset, extract_fold, load_dataset, save_dataset, split_holdout
from .featsel import (CorrelationMap, FeatureSelection, correlation_map,
                      select_features)
from .forest import ForestRegressor
from .harness import (CaseTriplet, FinalReport, ModelBundle, evaluate_holdout,
                      make_report, rank_cases, train_final, train_from_report)
from .manifest import Manifest, default_manifest, load_manifest, save_manifest
from .metrics import mse
from .mlp import MlpRegressor
from .pca import PcaTransform
from .pipeline import FeaturePipeline, PcaConfig
from .preprocessing import Standardizer
from .search import (Candidate, Discrete, IntRange, LogUniform, ParamSpace,
                     default_forest_space, default_mlp_space, derive_seed,
                     sample_candidates)
from .synthetic import SyntheticSpec, generate_synthetic
from .tuning import CvReport, cross_validate, nested_cv, select_best
from .validation import ParseError, ValidationError

__version__ = "0.1.0"

__all__ = [
    "CaseTriplet", "Candidate", "CorrelationMap", "CvReport", "Dataset",
    "Discrete", "FeaturePipeline", "FeatureSelection", "FinalReport",
    "ForestRegressor", "IntRange", "LogUniform", "Manifest", "MlpRegressor",
    "ModelBundle", "ParamSpace", "ParseError", "PcaConfig", "PcaTransform",
    "Standardizer", "SyntheticSpec", "ValidationError", "correlation_map",
    "cross_validate", "default_forest_space", "default_manifest",
    "default_mlp_space", "derive_seed", "evaluate_holdout", "extract_fold",
    "generate_synthetic", "load_dataset", "load_manifest", "make_report",
    "mse", "nested_cv", "rank_cases", "sample_candidates", "save_dataset",
    "save_manifest", "select_best", "select_features", "split_holdout",
    "train_final", "train_from_report",
]
