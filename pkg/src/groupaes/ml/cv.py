"""Seeded k-fold splitting, stratified for classification."""

from __future__ import annotations

import numpy as np


class SplitError(ValueError):
    """Raised for infeasible fold requests."""


def kfold_indices(
    n: int, k: int, seed: int, stratify: np.ndarray | None = None
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Disjoint, exhaustive train/test index pairs.

    With ``stratify`` given, each class is shuffled separately and dealt
    round-robin so fold class balance tracks the dataset.
    """
    if k < 2:
        raise SplitError("need at least 2 folds")
    if k > n:
        raise SplitError(f"cannot make {k} folds from {n} rows")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(n, dtype=np.int64)
    if stratify is None:
        order = rng.permutation(n)
        for pos, row in enumerate(order):
            fold_of[row] = pos % k
    else:
        stratify = np.asarray(stratify)
        if stratify.shape[0] != n:
            raise SplitError("stratify labels must match row count")
        offset = 0
        for value in np.unique(stratify):
            rows = np.flatnonzero(stratify == value)
            rows = rows[rng.permutation(len(rows))]
            for pos, row in enumerate(rows):
                fold_of[row] = (offset + pos) % k
            offset += len(rows)
    folds = []
    everything = np.arange(n)
    for fold in range(k):
        test = everything[fold_of == fold]
        train = everything[fold_of != fold]
        folds.append((train, test))
    return folds


def train_test_split_indices(
    n: int, test_fraction: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """One shuffled split; test size rounds to the nearest row."""
    if not 0.0 <= test_fraction <= 1.0:
        raise SplitError(f"test_fraction out of [0,1]: {test_fraction}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    n_test = int(round(n * test_fraction))
    return np.sort(order[n_test:]), np.sort(order[:n_test])
