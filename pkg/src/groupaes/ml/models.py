"""Model wrappers: RBF-kernel SVM classifier, random-forest regressor and
the impurity-based importance forest. Estimators come from scikit-learn,
pinned to the published hyperparameters and seeded for determinism."""

from __future__ import annotations

import numpy as np
from sklearn.ensemble import RandomForestClassifier, RandomForestRegressor
from sklearn.svm import SVC

from ..config import MlConfig


class TrainingError(ValueError):
    """Raised for data that cannot be trained on (single class, too few rows)."""


def svm_train(x: np.ndarray, y: np.ndarray, cfg: MlConfig | None = None) -> SVC:
    """Soft-margin SVM with k(a,b) = exp(-gamma * ||a-b||^2).

    Labels are {0,1}; the decision function is oriented so positive values
    mean class 1 (good).
    """
    cfg = cfg or MlConfig()
    y = np.asarray(y, dtype=np.int64)
    classes = np.unique(y)
    if len(classes) < 2:
        raise TrainingError("SVM training needs both classes present")
    if not set(classes.tolist()) <= {0, 1}:
        raise TrainingError(f"labels must be 0/1, got {classes.tolist()}")
    clf = SVC(kernel="rbf", gamma=cfg.svm_gamma, C=cfg.svm_c, tol=cfg.svm_tol)
    clf.fit(np.asarray(x, dtype=np.float64), y)
    return clf


def svm_decision(clf: SVC, x: np.ndarray) -> np.ndarray:
    """Signed margin per row; also the ranking score for AUC."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != clf.n_features_in_:
        raise ValueError(f"row arity {x.shape[1]} != trained {clf.n_features_in_}")
    return clf.decision_function(x)


def svm_predict(clf: SVC, x: np.ndarray) -> np.ndarray:
    """1 (good) when the decision value is >= 0, else 0 (bad)."""
    return (svm_decision(clf, x) >= 0.0).astype(np.int64)


def rf_regress_train(
    x: np.ndarray,
    y: np.ndarray,
    cfg: MlConfig | None = None,
    seed: int | None = None,
) -> RandomForestRegressor:
    """Bootstrap forest of depth-limited CART trees, sqrt(p) features per split."""
    cfg = cfg or MlConfig()
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] < 5:
        raise TrainingError(f"regression needs at least 5 rows, got {x.shape[0]}")
    forest = RandomForestRegressor(
        n_estimators=cfg.rf_trees,
        max_depth=cfg.rf_depth,
        max_features="sqrt",
        bootstrap=True,
        random_state=cfg.seed if seed is None else seed,
        n_jobs=1,
    )
    forest.fit(x, np.asarray(y, dtype=np.float64))
    return forest


def gini_importance(
    x: np.ndarray,
    y01: np.ndarray,
    cfg: MlConfig | None = None,
    seed: int | None = None,
) -> np.ndarray:
    """Mean impurity decrease per feature from a dedicated classification
    forest on binarized labels, normalized to sum to 1."""
    cfg = cfg or MlConfig()
    y01 = np.asarray(y01, dtype=np.int64)
    if len(np.unique(y01)) < 2:
        raise TrainingError("importance forest needs both classes present")
    forest = RandomForestClassifier(
        n_estimators=cfg.gini_trees,
        max_depth=cfg.gini_depth,
        max_features="sqrt",
        bootstrap=True,
        random_state=cfg.seed if seed is None else seed,
        n_jobs=1,
    )
    forest.fit(np.asarray(x, dtype=np.float64), y01)
    importance = forest.feature_importances_.astype(np.float64)
    total = importance.sum()
    if total <= 0.0:
        return np.full_like(importance, 1.0 / len(importance))
    return importance / total


def rf_regressor_importance(
    x: np.ndarray, y: np.ndarray, cfg: MlConfig | None = None, seed: int | None = None
) -> np.ndarray:
    """Impurity importance of the regression forest (used by RFE on scores)."""
    forest = rf_regress_train(x, y, cfg, seed)
    importance = forest.feature_importances_.astype(np.float64)
    total = importance.sum()
    if total <= 0.0:
        return np.full_like(importance, 1.0 / len(importance))
    return importance / total
