"""Training pipelines tying normalization, selection, models and CV together.

Fold hygiene: inside cross-validation both the z-score statistics and the
selection mask are re-fitted on each fold's training rows only, so reported
fold metrics never leak test information. The final saved model is fitted
on all rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..config import MlConfig
from .cv import kfold_indices, train_test_split_indices
from .metrics import ClassificationMetrics, classification_metrics, r_squared
from .models import rf_regress_train, svm_decision, svm_train, TrainingError
from .normalize import ZScoreStats, zscore_apply, zscore_fit
from .select import select_mask

KIND_CLASSIFIER = "svm-classifier"
KIND_REGRESSOR = "rf-regressor"


@dataclass
class TrainedModel:
    """A fitted predictor plus everything needed to score raw 90-vectors."""

    kind: str
    feature_names: tuple[str, ...]
    mask: np.ndarray
    zscore: ZScoreStats
    estimator: Any
    config: MlConfig
    selection: str = "none"

    def __post_init__(self) -> None:
        if self.kind not in (KIND_CLASSIFIER, KIND_REGRESSOR):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.mask.sum() < 1:
            raise ValueError("selected mask must keep at least one feature")

    def _transform(self, rows: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
        if rows.shape[1] != len(self.feature_names):
            raise ValueError(
                f"expected {len(self.feature_names)} features, got {rows.shape[1]}"
            )
        return zscore_apply(self.zscore, rows)[:, self.mask]

    def decision(self, rows: np.ndarray) -> np.ndarray:
        """Classifier margin (ranking score)."""
        if self.kind != KIND_CLASSIFIER:
            raise ValueError("decision values exist only for the classifier")
        return svm_decision(self.estimator, self._transform(rows))

    def predict(self, rows: np.ndarray) -> np.ndarray:
        """Class 0/1 for the classifier, aesthetic score for the regressor."""
        transformed = self._transform(rows)
        if self.kind == KIND_CLASSIFIER:
            return (svm_decision(self.estimator, transformed) >= 0.0).astype(np.int64)
        return self.estimator.predict(transformed)


def _fit_fold(
    x: np.ndarray,
    y: np.ndarray,
    task: str,
    selection: str,
    k: int,
    cfg: MlConfig,
    seed: int,
):
    """Fit stats, mask and estimator on training rows only."""
    stats = zscore_fit(x)
    z = zscore_apply(stats, x)
    mask = select_mask(selection, z, y, k, task, cfg, seed)
    if task == "classify":
        estimator = svm_train(z[:, mask], y.astype(np.int64), cfg)
    else:
        estimator = rf_regress_train(z[:, mask], y, cfg, seed)
    return stats, mask, estimator


def cross_validate_classifier(
    x: np.ndarray,
    y: np.ndarray,
    cfg: MlConfig | None = None,
    selection: str = "none",
    k_features: int | None = None,
) -> list[dict]:
    """Stratified k-fold metrics; selection and z-score refit per fold."""
    cfg = cfg or MlConfig()
    k_features = cfg.select_k if k_features is None else k_features
    y = np.asarray(y, dtype=np.int64)
    records = []
    for fold, (train, test) in enumerate(
        kfold_indices(len(y), cfg.cv_folds, cfg.seed, stratify=y)
    ):
        stats, mask, clf = _fit_fold(
            x[train], y[train], "classify", selection, k_features, cfg, cfg.seed + fold
        )
        scores = svm_decision(clf, zscore_apply(stats, x[test])[:, mask])
        metrics = classification_metrics(scores, y[test])
        records.append(
            {"fold": fold, "metrics": metrics, "mask": mask, "zscore": stats}
        )
    return records


def cross_validate_regressor(
    x: np.ndarray,
    y: np.ndarray,
    cfg: MlConfig | None = None,
    selection: str = "none",
    k_features: int | None = None,
) -> list[dict]:
    cfg = cfg or MlConfig()
    k_features = cfg.select_k if k_features is None else k_features
    y = np.asarray(y, dtype=np.float64)
    records = []
    for fold, (train, test) in enumerate(kfold_indices(len(y), cfg.cv_folds, cfg.seed)):
        stats, mask, forest = _fit_fold(
            x[train], y[train], "regress", selection, k_features, cfg, cfg.seed + fold
        )
        pred = forest.predict(zscore_apply(stats, x[test])[:, mask])
        records.append(
            {
                "fold": fold,
                "r2": r_squared(pred, y[test]),
                "mask": mask,
                "zscore": stats,
            }
        )
    return records


def train_model(
    x: np.ndarray,
    y: np.ndarray,
    task: str,
    feature_names: tuple[str, ...],
    cfg: MlConfig | None = None,
    selection: str = "none",
    k_features: int | None = None,
) -> TrainedModel:
    """Fit the final model on all rows (selection included)."""
    cfg = cfg or MlConfig()
    k_features = cfg.select_k if k_features is None else k_features
    if task not in ("classify", "regress"):
        raise ValueError(f"unknown task {task!r}")
    stats, mask, estimator = _fit_fold(
        np.asarray(x, dtype=np.float64), y, task, selection, k_features, cfg, cfg.seed
    )
    return TrainedModel(
        kind=KIND_CLASSIFIER if task == "classify" else KIND_REGRESSOR,
        feature_names=tuple(feature_names),
        mask=mask,
        zscore=stats,
        estimator=estimator,
        config=cfg,
        selection=selection,
    )


def repeated_split_r2(
    x: np.ndarray,
    y: np.ndarray,
    mask: np.ndarray,
    cfg: MlConfig | None = None,
    splits: int = 100,
    test_fraction: float = 0.2,
) -> dict:
    """The repeated random-split regression protocol.

    Keeps the already-selected feature subset fixed, retrains the forest on
    each 80/20 split and aggregates R^2 over all runs.
    """
    cfg = cfg or MlConfig()
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    r2s = []
    for i in range(splits):
        train, test = train_test_split_indices(len(y), test_fraction, cfg.seed + i)
        if len(test) == 0 or len(train) < 5:
            raise TrainingError("split leaves too few rows to train or test")
        stats = zscore_fit(x[train])
        forest = rf_regress_train(
            zscore_apply(stats, x[train])[:, mask], y[train], cfg, cfg.seed + i
        )
        pred = forest.predict(zscore_apply(stats, x[test])[:, mask])
        r2s.append(r_squared(pred, y[test]))
    return {
        "splits": splits,
        "mean_r2": float(np.mean(r2s)),
        "max_r2": float(np.max(r2s)),
        "all_r2": r2s,
    }
