"""Evaluation metrics: ROC/AUC with rank-averaged ties, threshold metrics,
the coefficient of determination, and score-difference tables."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class MetricsError(ValueError):
    """Raised when a metric is undefined for the given inputs."""


def roc_points(scores: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """ROC curve (fpr, tpr) sweeping thresholds from high to low.

    Tied scores advance in one step, which makes the trapezoid area equal
    the rank-average (Mann-Whitney) AUC.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise MetricsError("scores and labels must be equal-length vectors")
    n_pos = int((labels == 1).sum())
    n_neg = int((labels == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise MetricsError("AUC undefined: both classes must be present")
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_labels = labels[order]
    fpr = [0.0]
    tpr = [0.0]
    tp = fp = 0
    i = 0
    n = len(sorted_scores)
    while i < n:
        j = i
        while j < n and sorted_scores[j] == sorted_scores[i]:
            j += 1
        block = sorted_labels[i:j]
        tp += int((block == 1).sum())
        fp += int((block == 0).sum())
        tpr.append(tp / n_pos)
        fpr.append(fp / n_neg)
        i = j
    return np.array(fpr), np.array(tpr)


def auc_score(scores: np.ndarray, labels: np.ndarray) -> float:
    fpr, tpr = roc_points(scores, labels)
    return float(np.trapezoid(tpr, fpr))


@dataclass(frozen=True)
class ClassificationMetrics:
    auc: float
    accuracy: float
    precision: float
    recall: float
    f1: float
    roc: tuple[np.ndarray, np.ndarray] = field(repr=False)

    def to_jsonable(self) -> dict:
        return {
            "auc": self.auc,
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def classification_metrics(
    scores: np.ndarray, labels: np.ndarray, threshold: float = 0.0
) -> ClassificationMetrics:
    """Ranking AUC plus hard metrics with predictions = (score >= threshold)."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    roc = roc_points(scores, labels)
    auc = float(np.trapezoid(roc[1], roc[0]))
    pred = (scores >= threshold).astype(np.int64)
    tp = int(((pred == 1) & (labels == 1)).sum())
    fp = int(((pred == 1) & (labels == 0)).sum())
    fn = int(((pred == 0) & (labels == 1)).sum())
    accuracy = float((pred == labels).mean())
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return ClassificationMetrics(
        auc=auc, accuracy=accuracy, precision=precision, recall=recall, f1=f1, roc=roc
    )


def r_squared(predictions: np.ndarray, labels: np.ndarray) -> float:
    """1 - residual sum of squares over total sum of squares."""
    predictions = np.asarray(predictions, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if predictions.shape != labels.shape or predictions.ndim != 1:
        raise MetricsError("predictions and labels must be equal-length vectors")
    total = float(((labels - labels.mean()) ** 2).sum())
    if total == 0.0:
        raise MetricsError("R^2 undefined for constant labels")
    residual = float(((predictions - labels) ** 2).sum())
    return 1.0 - residual / total


def discrimination_delta(score_standard: float, score_other: float) -> float:
    """Plain score difference standard - other."""
    return score_standard - score_other


def delta_table(
    standard: tuple[str, float], others: list[tuple[str, float]]
) -> list[dict]:
    """Per-variant rows of the standard-vs-other comparison."""
    _, s_std = standard
    return [
        {"other": name, "score": score, "delta": discrimination_delta(s_std, score)}
        for name, score in others
    ]


@dataclass(frozen=True)
class EvalReport:
    """Bundle of every evaluation product a model run can emit.

    Classification fills ``classification``; regression fills ``r2`` (and
    the split aggregates when the repeated protocol ran); ``importance``
    and ``deltas`` are attached by the corresponding commands.
    """

    classification: ClassificationMetrics | None = None
    r2: float | None = None
    mean_r2: float | None = None
    max_r2: float | None = None
    importance: np.ndarray | None = None
    deltas: list[dict] | None = None

    def __post_init__(self) -> None:
        m = self.classification
        if m is not None:
            for name, value in (("auc", m.auc), ("precision", m.precision),
                                ("recall", m.recall), ("f1", m.f1)):
                if not 0.0 <= value <= 1.0:
                    raise MetricsError(f"{name} out of [0,1]: {value}")
        for name, value in (("r2", self.r2), ("mean_r2", self.mean_r2),
                            ("max_r2", self.max_r2)):
            if value is not None and value > 1.0:
                raise MetricsError(f"{name} cannot exceed 1: {value}")
        if self.importance is not None and not np.isclose(self.importance.sum(), 1.0):
            raise MetricsError("importance must be normalized to sum 1")

    def to_jsonable(self) -> dict:
        out: dict = {}
        if self.classification is not None:
            out.update(self.classification.to_jsonable())
        for key in ("r2", "mean_r2", "max_r2"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        if self.importance is not None:
            out["importance"] = self.importance.tolist()
        if self.deltas is not None:
            out["deltas"] = self.deltas
        return out
