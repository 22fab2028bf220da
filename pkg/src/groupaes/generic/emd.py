"""Colorfulness as the earth mover's distance between the image's LUV bin
histogram and a uniform one, solved exactly as a transportation problem."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog

from .preprocess import PreprocessedImage

BINS_PER_AXIS = 4
N_BINS = BINS_PER_AXIS**3

# Nominal LUV extents used for fixed, image-independent bin edges.
LUV_RANGES = ((0.0, 100.0), (-134.0, 220.0), (-140.0, 122.0))


def bin_centers() -> np.ndarray:
    """(64, 3) centers of the 4x4x4 LUV grid."""
    axes = []
    for lo, hi in LUV_RANGES:
        width = (hi - lo) / BINS_PER_AXIS
        axes.append(lo + width * (np.arange(BINS_PER_AXIS) + 0.5))
    grid = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grid], axis=1)


def ground_distance() -> np.ndarray:
    """(64, 64) Euclidean distances between bin centers."""
    centers = bin_centers()
    diff = centers[:, None, :] - centers[None, :, :]
    return np.sqrt((diff**2).sum(axis=2))


def luv_histogram(luv: np.ndarray) -> np.ndarray:
    """Normalized 64-bin histogram of LUV pixels (values clipped into range)."""
    pixels = luv.reshape(-1, 3)
    idx = np.zeros(pixels.shape[0], dtype=np.int64)
    for axis, (lo, hi) in enumerate(LUV_RANGES):
        scaled = (pixels[:, axis] - lo) / (hi - lo) * BINS_PER_AXIS
        axis_bin = np.clip(np.floor(scaled).astype(np.int64), 0, BINS_PER_AXIS - 1)
        idx = idx * BINS_PER_AXIS + axis_bin
    counts = np.bincount(idx, minlength=N_BINS).astype(np.float64)
    return counts / counts.sum()


def emd(h1: np.ndarray, h2: np.ndarray, cost: np.ndarray | None = None) -> float:
    """Exact EMD between two histograms of equal total mass.

    Solves min <cost, flow> subject to row sums = h1 and column sums = h2
    with the HiGHS LP solver; both histograms are normalized first.
    """
    a = np.asarray(h1, dtype=np.float64)
    b = np.asarray(h2, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("histograms must be 1-D with matching length")
    if a.sum() <= 0 or b.sum() <= 0:
        raise ValueError("histograms must have positive mass")
    a = a / a.sum()
    b = b / b.sum()
    n = a.shape[0]
    if cost is None:
        if n != N_BINS:
            raise ValueError(f"default cost matrix expects {N_BINS} bins")
        cost = ground_distance()

    n_rows = n
    a_eq = np.zeros((2 * n, n * n), dtype=np.float64)
    for i in range(n_rows):
        a_eq[i, i * n : (i + 1) * n] = 1.0
        a_eq[n_rows + i, i::n] = 1.0
    b_eq = np.concatenate([a, b])
    result = linprog(cost.ravel(), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if not result.success:
        raise RuntimeError(f"transportation solve failed: {result.message}")
    return float(result.fun)


def colorfulness(p: PreprocessedImage) -> float:
    """f55: EMD between the image's LUV histogram and the uniform one."""
    uniform = np.full(N_BINS, 1.0 / N_BINS)
    return emd(luv_histogram(p.luv), uniform)
