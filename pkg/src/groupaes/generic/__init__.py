"""Generic aesthetic features f8-f90: preprocessing plus color, texture,
regional and composition groups, assembled into one 83-value vector."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..config import GenericConfig
from ..vector import N_GENERIC
from .color import color_names, color_stats, emotion_pad
from .emd import colorfulness
from .lines import dynamics_lines
from .preprocess import (
    ImageDecodeError,
    ImageSizeError,
    PreprocessedImage,
    preprocess,
)
from .regions import region_features
from .texture import glcm_features, low_dof, wavelet_texture

__all__ = [
    "GenericFeatures",
    "ImageDecodeError",
    "ImageSizeError",
    "PreprocessedImage",
    "extract_generic",
    "extract_from_preprocessed",
    "image_size_features",
    "preprocess",
]


def image_size_features(original_w: int, original_h: int) -> np.ndarray:
    """f26-f27: side-length sum and width/height ratio of the original image."""
    return np.array(
        [float(original_w + original_h), original_w / original_h], dtype=np.float64
    )


@dataclass(frozen=True)
class GenericFeatures:
    """Slots f8-f90 for one photo."""

    values: np.ndarray

    def __post_init__(self) -> None:
        if self.values.shape != (N_GENERIC,):
            raise ValueError(f"expected {N_GENERIC} generic features")
        if not np.isfinite(self.values).all():
            raise ValueError("generic features contain NaN or Inf")


def extract_from_preprocessed(
    p: PreprocessedImage, config: GenericConfig | None = None
) -> GenericFeatures:
    cfg = config or GenericConfig()
    values = np.concatenate(
        [
            color_stats(p),                                    # f8-f13
            wavelet_texture(p),                                # f14-f25
            image_size_features(p.original_w, p.original_h),   # f26-f27
            region_features(p, cfg.region_min_area_fraction),  # f28-f48
            low_dof(p),                                        # f49-f51
            emotion_pad(p),                                    # f52-f54
            [colorfulness(p)],                                 # f55
            color_names(p),                                    # f56-f71
            glcm_features(p),                                  # f72-f83
            dynamics_lines(p, cfg),                            # f84-f89
            [float(p.n_segments)],                             # f90
        ]
    )
    return GenericFeatures(values)


def extract_generic(data: bytes, config: GenericConfig | None = None) -> GenericFeatures:
    """Full pipeline: preprocess the image bytes and compute f8-f90.

    Deterministic for fixed (bytes, config) including the seeded K-means
    and Hough stages.
    """
    cfg = config or GenericConfig()
    return extract_from_preprocessed(preprocess(data, cfg), cfg)
