"""Image preprocessing: decode, 128x128 resize, HSV/LUV planes, K-means
color clustering and the waterfall-style segmentation.

K-means is hand-rolled so the empty-cluster rule (re-seed from the farthest
point) and bit-for-bit determinism under a fixed seed are guaranteed.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError
from skimage import color as skcolor
from skimage.filters import sobel
from skimage.morphology import local_minima
from skimage.segmentation import watershed
from scipy import ndimage

from ..config import GenericConfig

SIDE = 128
MIN_INPUT_SIDE = 8


class ImageDecodeError(ValueError):
    """Input bytes are not a decodable raster image."""


class ImageSizeError(ValueError):
    """Input image is too small to preprocess."""


@dataclass(frozen=True)
class PreprocessedImage:
    """All per-image rasters the generic features read from.

    rgb / luv are (128,128,3) float64; hsv stores H,S,V each in [0,1]
    (hue features convert to degrees at reporting time). kmeans_labels and
    waterfall_segments hold 1-based ids.
    """

    rgb: np.ndarray
    hsv: np.ndarray
    luv: np.ndarray
    kmeans_labels: np.ndarray
    n_clusters: int
    kmeans_degenerate: bool
    waterfall_segments: np.ndarray
    n_segments: int
    original_w: int
    original_h: int


def decode_image(data: bytes) -> Image.Image:
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, OSError) as exc:
        raise ImageDecodeError(f"cannot decode image: {exc}") from exc
    if min(img.size) < MIN_INPUT_SIDE:
        raise ImageSizeError(
            f"image {img.size[0]}x{img.size[1]} smaller than "
            f"{MIN_INPUT_SIDE}x{MIN_INPUT_SIDE}"
        )
    return img.convert("RGB")


def _kmeans(pixels: np.ndarray, k: int, restarts: int, max_iter: int,
            rng: np.random.Generator) -> tuple[np.ndarray, int, bool]:
    """Lloyd iterations over LUV pixels; returns (labels, k_eff, degenerate).

    Empty clusters are re-seeded from the point farthest from its center;
    when even the farthest point coincides with a center (flat image) the
    cluster stays empty and the result is flagged degenerate.
    """
    n = pixels.shape[0]
    k = min(k, n)
    best_labels: np.ndarray | None = None
    best_inertia = np.inf
    for _ in range(restarts):
        centers = pixels[rng.choice(n, size=k, replace=False)].copy()
        labels = np.zeros(n, dtype=np.int64)
        for _ in range(max_iter):
            d2 = ((pixels[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
            new_labels = d2.argmin(axis=1)
            nearest = d2[np.arange(n), new_labels]
            for c in range(k):
                members = new_labels == c
                if members.any():
                    centers[c] = pixels[members].mean(axis=0)
                else:
                    far = int(nearest.argmax())
                    if nearest[far] <= 1e-12:
                        continue
                    centers[c] = pixels[far]
                    new_labels[far] = c
                    nearest[far] = 0.0
            if (new_labels == labels).all():
                labels = new_labels
                break
            labels = new_labels
        d2 = ((pixels - centers[labels]) ** 2).sum(axis=1)
        inertia = float(d2.sum())
        if inertia < best_inertia:
            best_inertia = inertia
            best_labels = labels
    assert best_labels is not None
    # collapse clusters whose centers coincide: rounding in the mean update
    # can otherwise split one duplicated color across several clusters
    used = np.unique(best_labels)
    final_centers = np.stack([pixels[best_labels == c].mean(axis=0) for c in used])
    lookup_merge = np.arange(int(best_labels.max()) + 1)
    for idx in range(len(used)):
        for jdx in range(idx):
            if ((final_centers[idx] - final_centers[jdx]) ** 2).sum() < 1e-12:
                lookup_merge[used[idx]] = lookup_merge[used[jdx]]
                break
    best_labels = lookup_merge[best_labels]
    # compress to consecutive 1-based ids
    used = np.unique(best_labels)
    remap = np.zeros(used.max() + 1, dtype=np.int64)
    remap[used] = np.arange(1, len(used) + 1)
    return remap[best_labels], len(used), len(used) < k


def _hsv_gradient(hsv: np.ndarray) -> np.ndarray:
    return np.sqrt(sum(sobel(hsv[:, :, c]) ** 2 for c in range(3)))


def _waterfall(hsv: np.ndarray) -> tuple[np.ndarray, int]:
    """Watershed over the HSV gradient plus one merge level.

    Adjacent segments whose boundary pass height (minimum of the larger
    gradient across each boundary pixel pair) falls strictly below the
    median pass height are merged.
    """
    grad = _hsv_gradient(hsv)
    markers, n_markers = ndimage.label(local_minima(grad, connectivity=1))
    if n_markers == 0:
        return np.ones(grad.shape, dtype=np.int64), 1
    segments = watershed(grad, markers, connectivity=1).astype(np.int64)

    saliency: dict[tuple[int, int], float] = {}

    def scan(a: np.ndarray, b: np.ndarray, ga: np.ndarray, gb: np.ndarray) -> None:
        different = a != b
        pairs = np.stack(
            [np.minimum(a[different], b[different]), np.maximum(a[different], b[different])],
            axis=1,
        )
        heights = np.maximum(ga[different], gb[different])
        for (p, q), h in zip(pairs, heights):
            key = (int(p), int(q))
            current = saliency.get(key)
            if current is None or h < current:
                saliency[key] = float(h)

    scan(segments[:, :-1], segments[:, 1:], grad[:, :-1], grad[:, 1:])
    scan(segments[:-1, :], segments[1:, :], grad[:-1, :], grad[1:, :])

    if saliency:
        cutoff = float(np.median(list(saliency.values())))
        parent = {label: label for label in np.unique(segments)}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (p, q), h in saliency.items():
            if h < cutoff:
                parent[find(p)] = find(q)

        lookup = np.zeros(segments.max() + 1, dtype=np.int64)
        for label in parent:
            lookup[label] = find(label)
        segments = lookup[segments]

    used = np.unique(segments)
    remap = np.zeros(used.max() + 1, dtype=np.int64)
    remap[used] = np.arange(1, len(used) + 1)
    return remap[segments], len(used)


def preprocess(data: bytes, config: GenericConfig | None = None) -> PreprocessedImage:
    """Decode and build every raster the feature extractors consume."""
    cfg = config or GenericConfig()
    img = decode_image(data)
    original_w, original_h = img.size
    resized = img.resize((SIDE, SIDE), Image.BILINEAR)
    rgb = np.asarray(resized, dtype=np.float64) / 255.0
    hsv = skcolor.rgb2hsv(rgb)
    luv = skcolor.rgb2luv(rgb)

    rng = np.random.default_rng(cfg.seed)
    labels_flat, k_eff, degenerate = _kmeans(
        luv.reshape(-1, 3), cfg.kmeans_k, cfg.kmeans_restarts, cfg.kmeans_max_iter, rng
    )
    segments, n_segments = _waterfall(hsv)

    return PreprocessedImage(
        rgb=rgb,
        hsv=hsv,
        luv=luv,
        kmeans_labels=labels_flat.reshape(SIDE, SIDE),
        n_clusters=k_eff,
        kmeans_degenerate=degenerate,
        waterfall_segments=segments,
        n_segments=n_segments,
        original_w=original_w,
        original_h=original_h,
    )


def central_third_slice(n: int) -> slice:
    """The centered slice used for "center of the picture" crops."""
    return slice(n // 3, n - n // 3)
