"""Line-dynamics features: straight segments from a Sobel edge map via the
probabilistic Hough transform, split into static (near-horizontal or
near-vertical) and dynamic (oblique) groups."""

from __future__ import annotations

import math

import numpy as np
from skimage.filters import sobel
from skimage.transform import probabilistic_hough_line

from .preprocess import PreprocessedImage, SIDE
from ..config import GenericConfig

Segment = tuple[tuple[int, int], tuple[int, int]]

_DIAGONAL = SIDE * math.sqrt(2.0)


def detect_segments(p: PreprocessedImage, cfg: GenericConfig) -> list[Segment]:
    """Hough segments over brightness edges above the gradient percentile."""
    magnitude = sobel(p.hsv[:, :, 2])
    cutoff = float(np.percentile(magnitude, cfg.edge_percentile))
    edges = magnitude > cutoff
    if not edges.any():
        return []
    return probabilistic_hough_line(
        edges,
        threshold=cfg.hough_threshold,
        line_length=cfg.hough_line_length,
        line_gap=cfg.hough_line_gap,
        rng=np.random.default_rng(cfg.seed),
    )


def segment_angle_deg(seg: Segment) -> float:
    """Undirected angle in [0,180) degrees."""
    (x0, y0), (x1, y1) = seg
    return math.degrees(math.atan2(y1 - y0, x1 - x0)) % 180.0


def abs_angle_deg(angle: float) -> float:
    """Fold an undirected angle into [0,90] (0 horizontal, 90 vertical)."""
    return min(angle, 180.0 - angle)


def is_static(angle: float, window_deg: float) -> bool:
    folded = abs_angle_deg(angle)
    return folded <= window_deg or abs(folded - 90.0) <= window_deg


def _group_stats(angles: list[float], lengths: list[float]) -> tuple[float, float, float]:
    if not angles:
        return 0.0, 0.0, 0.0
    mean_abs = float(np.mean([abs_angle_deg(a) for a in angles]))
    diffs = []
    for i in range(len(angles)):
        for j in range(i + 1, len(angles)):
            d = abs(angles[i] - angles[j]) % 180.0
            diffs.append(min(d, 180.0 - d))
    mean_rel = float(np.mean(diffs)) if diffs else 0.0
    total_length = float(sum(lengths)) / _DIAGONAL
    return mean_abs, mean_rel, total_length


def dynamics_lines(p: PreprocessedImage, cfg: GenericConfig | None = None) -> np.ndarray:
    """f84-f89: (mean abs angle, mean pairwise angle, total length) for the
    static group then the dynamic group; all zeros when no lines are found."""
    cfg = cfg or GenericConfig()
    static_angles: list[float] = []
    static_lengths: list[float] = []
    dynamic_angles: list[float] = []
    dynamic_lengths: list[float] = []
    for seg in detect_segments(p, cfg):
        (x0, y0), (x1, y1) = seg
        angle = segment_angle_deg(seg)
        length = math.hypot(x1 - x0, y1 - y0)
        if is_static(angle, cfg.static_angle_window_deg):
            static_angles.append(angle)
            static_lengths.append(length)
        else:
            dynamic_angles.append(angle)
            dynamic_lengths.append(length)
    return np.array(
        _group_stats(static_angles, static_lengths)
        + _group_stats(dynamic_angles, dynamic_lengths),
        dtype=np.float64,
    )
