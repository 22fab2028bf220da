"""Color features: HSV means (whole image and center), PAD emotion scores
and the named-color histogram."""

from __future__ import annotations

import numpy as np

from .preprocess import PreprocessedImage, central_third_slice
from ..vector import COLOR_NAME_ORDER

# Pleasure/Arousal/Dominance as linear functions of mean brightness and
# saturation (Valdez-Mehrabian coefficients).
PAD_COEFFICIENTS = {
    "pleasure": (0.69, 0.22),
    "arousal": (-0.31, 0.60),
    "dominance": (0.76, 0.32),
}

# 16 basic web palette colors, order matches the f56-f71 slots.
PALETTE_RGB = np.array(
    [
        (0, 0, 0),        # black
        (192, 192, 192),  # silver
        (128, 128, 128),  # gray
        (255, 255, 255),  # white
        (128, 0, 0),      # maroon
        (255, 0, 0),      # red
        (128, 0, 128),    # purple
        (255, 0, 255),    # fuchsia
        (0, 128, 0),      # green
        (0, 255, 0),      # lime
        (128, 128, 0),    # olive
        (255, 255, 0),    # yellow
        (0, 0, 128),      # navy
        (0, 0, 255),      # blue
        (0, 128, 128),    # teal
        (0, 255, 255),    # aqua
    ],
    dtype=np.float64,
)


def circular_hue_mean_deg(hue01: np.ndarray) -> float:
    """Vector-average hue (input in [0,1] turns) reported in degrees [0,360).

    Avoids the 0/360 seam; a perfectly balanced hue set falls back to 0.
    """
    angles = hue01.ravel() * 2.0 * np.pi
    s = float(np.sin(angles).mean())
    c = float(np.cos(angles).mean())
    if s == 0.0 and c == 0.0:
        return 0.0
    deg = float(np.degrees(np.arctan2(s, c))) % 360.0
    return deg


def color_stats(p: PreprocessedImage) -> np.ndarray:
    """f8-f13: mean V, S, H over the image and over the central third."""
    hsv = p.hsv
    center = central_third_slice(hsv.shape[0])
    crop = hsv[center, center, :]
    return np.array(
        [
            hsv[:, :, 2].mean(),
            hsv[:, :, 1].mean(),
            circular_hue_mean_deg(hsv[:, :, 0]),
            crop[:, :, 2].mean(),
            crop[:, :, 1].mean(),
            circular_hue_mean_deg(crop[:, :, 0]),
        ],
        dtype=np.float64,
    )


def emotion_pad(p: PreprocessedImage) -> np.ndarray:
    """f52-f54: pleasure, arousal, dominance from mean brightness/saturation."""
    v_mean = float(p.hsv[:, :, 2].mean())
    s_mean = float(p.hsv[:, :, 1].mean())
    return np.array(
        [a * v_mean + b * s_mean for a, b in PAD_COEFFICIENTS.values()],
        dtype=np.float64,
    )


def color_names(p: PreprocessedImage) -> np.ndarray:
    """f56-f71: fraction of pixels nearest each basic palette color.

    Fractions partition the image, so the 16 slots sum to 1; argmin breaks
    ties toward the lower palette index.
    """
    pixels = p.rgb.reshape(-1, 3) * 255.0
    d2 = ((pixels[:, None, :] - PALETTE_RGB[None, :, :]) ** 2).sum(axis=2)
    nearest = d2.argmin(axis=1)
    counts = np.bincount(nearest, minlength=len(COLOR_NAME_ORDER))
    return counts.astype(np.float64) / pixels.shape[0]
