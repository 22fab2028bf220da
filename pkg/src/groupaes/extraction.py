"""Per-image feature extraction: fetch faces, aggregate f1-f7, compute
f8-f90 and assemble the 90-vector. Batch extraction over a directory
parallelizes across images and collects per-image failures instead of
aborting the run."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import Config
from .faces import FaceError, fetch_faces
from .generic import extract_generic
from .generic.preprocess import ImageDecodeError, ImageSizeError
from .group_features import NoFacesError, extract_group
from .vector import FeatureTable, assemble

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg", ".bmp")


@dataclass
class ExtractResult:
    image: Path
    vector: np.ndarray | None = None
    error: str | None = None
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.vector is not None


def extract_image(path: str | Path, provider, config: Config | None = None) -> ExtractResult:
    """Features for one image; failures land in the result, not exceptions."""
    cfg = config or Config()
    path = Path(path)
    try:
        faces = fetch_faces(path, provider)
        group = extract_group(faces, cfg.thresholds, cfg.group.smile_branch)
        generic = extract_generic(path.read_bytes(), cfg.generic)
    except (FaceError, NoFacesError, ImageDecodeError, ImageSizeError, OSError) as exc:
        return ExtractResult(image=path, error=f"{type(exc).__name__}: {exc}")
    vector = assemble(group.as_array(), generic.values)
    return ExtractResult(image=path, vector=vector, warnings=faces.warnings)


def list_images(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    if not directory.is_dir():
        raise NotADirectoryError(f"not a directory: {directory}")
    return sorted(
        p for p in directory.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES
    )


def extract_directory(
    directory: str | Path,
    provider,
    config: Config | None = None,
    jobs: int = 1,
) -> tuple[FeatureTable, list[ExtractResult]]:
    """Extract every image in a directory (sorted order, so output is stable
    regardless of worker count). Returns the table of successes and the
    failed results."""
    images = list_images(directory)
    if jobs <= 1:
        results = [extract_image(p, provider, config) for p in images]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda p: extract_image(p, provider, config), images))
    good = [r for r in results if r.ok]
    bad = [r for r in results if not r.ok]
    table = FeatureTable(
        ids=[r.image.name for r in good],
        features=(
            np.stack([r.vector for r in good])
            if good
            else np.empty((0, 90), dtype=np.float64)
        ),
        scores=[None] * len(good),
        labels=[None] * len(good),
    )
    return table, bad
