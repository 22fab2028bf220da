"""Texture features: three-level Haar wavelet stats, the low depth-of-field
ratios built on the same coefficients, and gray-level co-occurrence stats.

Channels enter as H, S, V each scaled to [0,1] so values are comparable
across channels.
"""

from __future__ import annotations

import numpy as np

from .preprocess import PreprocessedImage, central_third_slice

GLCM_LEVELS = 16
WAVELET_LEVELS = 3


def haar_level(plane: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """One orthonormal Haar step: (LL, LH, HL, HH), each half-size."""
    rows_lo = (plane[:, 0::2] + plane[:, 1::2]) / np.sqrt(2.0)
    rows_hi = (plane[:, 0::2] - plane[:, 1::2]) / np.sqrt(2.0)
    ll = (rows_lo[0::2, :] + rows_lo[1::2, :]) / np.sqrt(2.0)
    hl = (rows_lo[0::2, :] - rows_lo[1::2, :]) / np.sqrt(2.0)
    lh = (rows_hi[0::2, :] + rows_hi[1::2, :]) / np.sqrt(2.0)
    hh = (rows_hi[0::2, :] - rows_hi[1::2, :]) / np.sqrt(2.0)
    return ll, lh, hl, hh


def haar_details(plane: np.ndarray, levels: int = WAVELET_LEVELS) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Detail triples (LH, HL, HH) for each decomposition level."""
    details = []
    current = plane
    for _ in range(levels):
        current, lh, hl, hh = haar_level(current)
        details.append((lh, hl, hh))
    return details


def _level_texture(detail: tuple[np.ndarray, np.ndarray, np.ndarray]) -> float:
    total = sum(np.abs(d).sum() for d in detail)
    count = sum(d.size for d in detail)
    return float(total / count)


def wavelet_texture(p: PreprocessedImage) -> np.ndarray:
    """f14-f25: per-level mean detail magnitude per channel plus channel sums."""
    per_level: list[float] = []
    sums: list[float] = []
    for c in range(3):
        details = haar_details(p.hsv[:, :, c])
        level_values = [_level_texture(d) for d in details]
        per_level.extend(level_values)
        sums.append(sum(level_values))
    return np.array(per_level + sums, dtype=np.float64)


def low_dof(p: PreprocessedImage) -> np.ndarray:
    """f49-f51: share of level-3 detail magnitude inside the central third.

    An all-flat channel has no detail anywhere, and the 0/0 case is 0 by
    convention.
    """
    values = []
    for c in range(3):
        lh, hl, hh = haar_details(p.hsv[:, :, c])[-1]
        window = central_third_slice(lh.shape[0])
        inner = sum(np.abs(d)[window, window].sum() for d in (lh, hl, hh))
        total = sum(np.abs(d).sum() for d in (lh, hl, hh))
        values.append(0.0 if total == 0.0 else float(inner / total))
    return np.array(values, dtype=np.float64)


def quantize_levels(channel01: np.ndarray, levels: int = GLCM_LEVELS) -> np.ndarray:
    """Map [0,1] values onto integer gray levels 0..levels-1."""
    q = np.floor(channel01 * levels).astype(np.int64)
    return np.clip(q, 0, levels - 1)


def glcm_matrix(quantized: np.ndarray, levels: int = GLCM_LEVELS) -> np.ndarray:
    """Symmetric, normalized co-occurrence matrix for the right-neighbor offset."""
    left = quantized[:, :-1].ravel()
    right = quantized[:, 1:].ravel()
    matrix = np.zeros((levels, levels), dtype=np.float64)
    np.add.at(matrix, (left, right), 1.0)
    matrix = matrix + matrix.T
    total = matrix.sum()
    if total > 0:
        matrix /= total
    return matrix


def glcm_stats(matrix: np.ndarray) -> tuple[float, float, float, float]:
    """(contrast, correlation, homogeneity, energy) of a normalized GLCM.

    Energy is the angular second moment (sum of squared cell masses);
    correlation of a zero-variance channel is 0 by convention.
    """
    levels = matrix.shape[0]
    idx = np.arange(levels, dtype=np.float64)
    i = idx[:, None]
    j = idx[None, :]
    contrast = float((matrix * (i - j) ** 2).sum())
    homogeneity = float((matrix / (1.0 + (i - j) ** 2)).sum())
    energy = float((matrix**2).sum())
    pi = matrix.sum(axis=1)
    pj = matrix.sum(axis=0)
    mu_i = float((idx * pi).sum())
    mu_j = float((idx * pj).sum())
    var_i = float(((idx - mu_i) ** 2 * pi).sum())
    var_j = float(((idx - mu_j) ** 2 * pj).sum())
    if var_i <= 0.0 or var_j <= 0.0:
        correlation = 0.0
    else:
        covariance = float((matrix * (i - mu_i) * (j - mu_j)).sum())
        correlation = covariance / np.sqrt(var_i * var_j)
    return contrast, correlation, homogeneity, energy


def glcm_features(p: PreprocessedImage) -> np.ndarray:
    """f72-f83: contrast/correlation/homogeneity/energy per H, S, V channel."""
    values: list[float] = []
    for c in range(3):
        matrix = glcm_matrix(quantize_levels(p.hsv[:, :, c]))
        values.extend(glcm_stats(matrix))
    return np.array(values, dtype=np.float64)
