"""Learning stack: z-score normalization, SVM classifier, random-forest
regressor, feature selection, cross-validation, metrics and model files."""

from .cv import SplitError, kfold_indices, train_test_split_indices
from .io import ModelFormatError, load_model, save_model
from .metrics import (
    ClassificationMetrics,
    EvalReport,
    MetricsError,
    auc_score,
    classification_metrics,
    delta_table,
    discrimination_delta,
    r_squared,
    roc_points,
)
from .models import (
    TrainingError,
    gini_importance,
    rf_regress_train,
    svm_decision,
    svm_predict,
    svm_train,
)
from .normalize import ZScoreStats, zscore_apply, zscore_fit
from .pipeline import (
    KIND_CLASSIFIER,
    KIND_REGRESSOR,
    TrainedModel,
    cross_validate_classifier,
    cross_validate_regressor,
    repeated_split_r2,
    train_model,
)
from .select import SelectionError, filter_select, rfe_select, select_mask

__all__ = [
    "ClassificationMetrics",
    "EvalReport",
    "KIND_CLASSIFIER",
    "KIND_REGRESSOR",
    "MetricsError",
    "ModelFormatError",
    "SelectionError",
    "SplitError",
    "TrainedModel",
    "TrainingError",
    "ZScoreStats",
    "auc_score",
    "classification_metrics",
    "cross_validate_classifier",
    "cross_validate_regressor",
    "delta_table",
    "discrimination_delta",
    "filter_select",
    "gini_importance",
    "kfold_indices",
    "load_model",
    "r_squared",
    "repeated_split_r2",
    "rfe_select",
    "rf_regress_train",
    "roc_points",
    "save_model",
    "select_mask",
    "svm_decision",
    "svm_predict",
    "svm_train",
    "train_model",
    "train_test_split_indices",
    "zscore_apply",
    "zscore_fit",
]
