"""Feature selection: a single-feature filter and recursive elimination.

The filter ranks columns by their solo cross-validated score (accuracy for
classification, R^2 for regression); RFE repeatedly drops the feature a
forest finds least important until k remain.
"""

from __future__ import annotations

import numpy as np
from sklearn.ensemble import RandomForestRegressor

from ..config import MlConfig
from .cv import kfold_indices
from .metrics import MetricsError, r_squared
from .models import gini_importance, rf_regressor_importance, svm_train, svm_predict
from .normalize import zscore_apply, zscore_fit


class SelectionError(ValueError):
    """Raised for infeasible selection requests."""


_FILTER_REGRESSION_TREES = 30  # small forest keeps 90x per-feature CV quick


def _check_k(k: int, n_features: int) -> None:
    if k < 1 or k > n_features:
        raise SelectionError(f"k must be in [1,{n_features}], got {k}")


def _single_feature_score_classify(
    col: np.ndarray, y: np.ndarray, folds: int, cfg: MlConfig, seed: int
) -> float:
    accs = []
    for train, test in kfold_indices(len(y), folds, seed, stratify=y):
        stats = zscore_fit(col[train])
        clf = svm_train(zscore_apply(stats, col[train]), y[train], cfg)
        pred = svm_predict(clf, zscore_apply(stats, col[test]))
        accs.append(float((pred == y[test]).mean()))
    return float(np.mean(accs))


def _single_feature_score_regress(
    col: np.ndarray, y: np.ndarray, folds: int, cfg: MlConfig, seed: int
) -> float:
    scores = []
    for train, test in kfold_indices(len(y), folds, seed):
        forest = RandomForestRegressor(
            n_estimators=_FILTER_REGRESSION_TREES,
            max_depth=cfg.rf_depth,
            max_features=1.0,
            random_state=seed,
            n_jobs=1,
        )
        forest.fit(col[train], y[train])
        try:
            scores.append(r_squared(forest.predict(col[test]), y[test]))
        except MetricsError:
            scores.append(0.0)
    return float(np.mean(scores))


def filter_select(
    x: np.ndarray,
    y: np.ndarray,
    k: int,
    task: str = "classify",
    cfg: MlConfig | None = None,
    seed: int | None = None,
) -> np.ndarray:
    """Boolean mask keeping the k best single-feature performers."""
    cfg = cfg or MlConfig()
    seed = cfg.seed if seed is None else seed
    x = np.asarray(x, dtype=np.float64)
    _check_k(k, x.shape[1])
    scores = np.empty(x.shape[1])
    for j in range(x.shape[1]):
        col = x[:, j : j + 1]
        if task == "classify":
            scores[j] = _single_feature_score_classify(col, y, cfg.filter_folds, cfg, seed)
        elif task == "regress":
            scores[j] = _single_feature_score_regress(col, y, cfg.filter_folds, cfg, seed)
        else:
            raise SelectionError(f"unknown task {task!r}")
    keep = np.argsort(-scores, kind="stable")[:k]
    mask = np.zeros(x.shape[1], dtype=bool)
    mask[keep] = True
    return mask


def rfe_select(
    x: np.ndarray,
    y: np.ndarray,
    k: int,
    task: str = "classify",
    cfg: MlConfig | None = None,
    seed: int | None = None,
    importance_fn=None,
) -> np.ndarray:
    """Backward elimination with forest importance as the ranking estimator."""
    cfg = cfg or MlConfig()
    seed = cfg.seed if seed is None else seed
    x = np.asarray(x, dtype=np.float64)
    _check_k(k, x.shape[1])
    if importance_fn is None:
        if task == "classify":
            importance_fn = lambda xs, ys: gini_importance(xs, ys, cfg, seed)
        elif task == "regress":
            importance_fn = lambda xs, ys: rf_regressor_importance(xs, ys, cfg, seed)
        else:
            raise SelectionError(f"unknown task {task!r}")
    remaining = list(range(x.shape[1]))
    while len(remaining) > k:
        importance = np.asarray(importance_fn(x[:, remaining], y))
        remaining.pop(int(importance.argmin()))
    mask = np.zeros(x.shape[1], dtype=bool)
    mask[remaining] = True
    return mask


def select_mask(
    method: str,
    x: np.ndarray,
    y: np.ndarray,
    k: int,
    task: str,
    cfg: MlConfig | None = None,
    seed: int | None = None,
) -> np.ndarray:
    """Dispatch on the CLI-facing method name (none|filter|rfe)."""
    if method == "none":
        return np.ones(x.shape[1], dtype=bool)
    if method == "filter":
        return filter_select(x, y, k, task, cfg, seed)
    if method == "rfe":
        return rfe_select(x, y, k, task, cfg, seed)
    raise SelectionError(f"unknown selection method {method!r}")
