"""Regional features over the K-means clustering: connected-component count,
per-region HSV means and area ratios for the five largest regions."""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .preprocess import PreprocessedImage
from .color import circular_hue_mean_deg

TOP_REGIONS = 5
_FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


def connected_regions(labels: np.ndarray) -> np.ndarray:
    """4-connected components across the cluster map, ids 1..n."""
    out = np.zeros_like(labels)
    next_id = 0
    for cluster in np.unique(labels):
        comp, n = ndimage.label(labels == cluster, structure=_FOUR_CONNECTED)
        out[comp > 0] = comp[comp > 0] + next_id
        next_id += n
    return out


def region_features(p: PreprocessedImage, min_area_fraction: float = 0.01) -> np.ndarray:
    """f28-f48.

    f28 counts components covering at least ``min_area_fraction`` of the
    image; the five largest components (by area, ties by lower id) supply
    HSV means (hue circular, in degrees) and area ratios, zero-padded when
    fewer than five exist.
    """
    regions = connected_regions(p.kmeans_labels)
    ids, areas = np.unique(regions, return_counts=True)
    n_pixels = regions.size
    significant = int((areas >= min_area_fraction * n_pixels).sum())

    order = np.lexsort((ids, -areas))
    top = [(int(ids[i]), int(areas[i])) for i in order[:TOP_REGIONS]]

    hsv_means = np.zeros((TOP_REGIONS, 3), dtype=np.float64)
    ratios = np.zeros(TOP_REGIONS, dtype=np.float64)
    for rank, (region_id, area) in enumerate(top):
        mask = regions == region_id
        hsv_means[rank, 0] = circular_hue_mean_deg(p.hsv[:, :, 0][mask])
        hsv_means[rank, 1] = float(p.hsv[:, :, 1][mask].mean())
        hsv_means[rank, 2] = float(p.hsv[:, :, 2][mask].mean())
        ratios[rank] = area / n_pixels

    return np.concatenate([[float(significant)], hsv_means.ravel(), ratios])
