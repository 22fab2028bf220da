"""Z-score normalization with population statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ZScoreStats:
    """Per-column mean/std; constant columns are flagged and map to 0."""

    mean: np.ndarray
    std: np.ndarray
    constant: np.ndarray

    def to_jsonable(self) -> dict:
        return {
            "mean": self.mean.tolist(),
            "std": self.std.tolist(),
            "constant": self.constant.astype(int).tolist(),
        }

    @classmethod
    def from_jsonable(cls, data: dict) -> "ZScoreStats":
        return cls(
            mean=np.asarray(data["mean"], dtype=np.float64),
            std=np.asarray(data["std"], dtype=np.float64),
            constant=np.asarray(data["constant"], dtype=bool),
        )


def zscore_fit(x: np.ndarray) -> ZScoreStats:
    """Population (divide-by-N) statistics per column."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("zscore_fit needs a non-empty 2-D matrix")
    mean = x.mean(axis=0)
    std = x.std(axis=0)  # population
    constant = std == 0.0
    return ZScoreStats(mean=mean, std=std, constant=constant)


def zscore_apply(stats: ZScoreStats, x: np.ndarray) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != stats.mean.shape[0]:
        raise ValueError(
            f"row arity {x.shape[1]} does not match fitted {stats.mean.shape[0]}"
        )
    safe_std = np.where(stats.constant, 1.0, stats.std)
    z = (x - stats.mean) / safe_std
    z[:, stats.constant] = 0.0
    return z
