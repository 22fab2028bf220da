"""Dataclass configs for thresholds, seeds and model hyperparameters.

Every tunable lives here so extraction and training stay deterministic and
reproducible from a single TOML file (see ``load_config``).
"""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ConfigError(ValueError):
    """Raised when a config value is outside its documented domain."""


@dataclass(frozen=True)
class ThresholdConfig:
    """Per-face decision thresholds.

    occlusion: one threshold per face region, order
        (left eye, right eye, left cheek, right cheek, mouth, jaw, nose).
        A region counts as occluded when its degree is >= the threshold.
    blur / smile: strict > thresholds on the 0-100 detector scores.
    yaw_lo / yaw_hi: inclusive window (degrees) for "facing the camera".
    gaze_range_margin: fallback gaze window when the provider sends none,
        as a fraction of the face box added on each side.
    """

    occlusion: tuple[float, ...] = (0.6,) * 7
    blur: float = 50.0
    smile: float = 50.0
    yaw_lo: float = -30.0
    yaw_hi: float = 30.0
    gaze_range_margin: float = 0.25

    def __post_init__(self) -> None:
        if len(self.occlusion) != 7:
            raise ConfigError("occlusion thresholds must have exactly 7 entries")
        for j, theta in enumerate(self.occlusion, start=1):
            if not 0.0 <= theta <= 1.0:
                raise ConfigError(f"occlusion threshold {j} out of [0,1]: {theta}")
        if not 0.0 <= self.blur <= 100.0:
            raise ConfigError(f"blur threshold out of [0,100]: {self.blur}")
        if not 0.0 <= self.smile <= 100.0:
            raise ConfigError(f"smile threshold out of [0,100]: {self.smile}")
        if not self.yaw_lo < self.yaw_hi:
            raise ConfigError("yaw window requires lo < hi")
        if self.gaze_range_margin < 0:
            raise ConfigError("gaze_range_margin must be >= 0")


@dataclass(frozen=True)
class GroupConfig:
    """Aggregation switches for the seven group-photography features.

    smile_branch: "paper" keeps the printed no-smile branch (no smiles -> 1);
    "prose" uses the plain proportion instead.
    """

    smile_branch: str = "paper"

    def __post_init__(self) -> None:
        if self.smile_branch not in ("paper", "prose"):
            raise ConfigError(f"smile_branch must be 'paper' or 'prose', got {self.smile_branch!r}")


@dataclass(frozen=True)
class GenericConfig:
    """Seeds and knobs for the 83 generic aesthetic features."""

    seed: int = 7
    kmeans_k: int = 5
    kmeans_restarts: int = 20
    kmeans_max_iter: int = 100
    region_min_area_fraction: float = 0.01
    edge_percentile: float = 90.0
    static_angle_window_deg: float = 10.0
    hough_threshold: int = 10
    hough_line_length: int = 20
    hough_line_gap: int = 3

    def __post_init__(self) -> None:
        if self.kmeans_k < 1:
            raise ConfigError("kmeans_k must be >= 1")
        if self.kmeans_restarts < 1 or self.kmeans_max_iter < 1:
            raise ConfigError("kmeans restarts/iterations must be >= 1")
        if not 0.0 < self.edge_percentile < 100.0:
            raise ConfigError("edge_percentile must be in (0,100)")
        if not 0.0 <= self.static_angle_window_deg <= 45.0:
            raise ConfigError("static_angle_window_deg must be in [0,45]")


@dataclass(frozen=True)
class MlConfig:
    """Model hyperparameters; defaults follow the fixed published settings."""

    svm_gamma: float = 2.0
    svm_c: float = 1.0
    svm_tol: float = 1e-3
    rf_trees: int = 130
    rf_depth: int = 5
    gini_trees: int = 200
    gini_depth: int = 8
    cv_folds: int = 10
    select_k: int = 20
    filter_folds: int = 5
    seed: int = 7

    def __post_init__(self) -> None:
        if self.svm_gamma <= 0 or self.svm_c <= 0:
            raise ConfigError("svm_gamma and svm_c must be > 0")
        if self.rf_trees < 1 or self.rf_depth < 1:
            raise ConfigError("rf_trees and rf_depth must be >= 1")
        if self.cv_folds < 2:
            raise ConfigError("cv_folds must be >= 2")


@dataclass(frozen=True)
class DatasetConfig:
    """Rating aggregation policy."""

    min_raters: int = 5
    max_raters: int = 20
    good_boundary: float = 6.0

    def __post_init__(self) -> None:
        if self.min_raters < 1:
            raise ConfigError("min_raters must be >= 1")
        if self.max_raters < self.min_raters:
            raise ConfigError("max_raters must be >= min_raters")


@dataclass(frozen=True)
class Config:
    thresholds: ThresholdConfig = field(default_factory=ThresholdConfig)
    group: GroupConfig = field(default_factory=GroupConfig)
    generic: GenericConfig = field(default_factory=GenericConfig)
    ml: MlConfig = field(default_factory=MlConfig)
    dataset: DatasetConfig = field(default_factory=DatasetConfig)


_SECTIONS = {
    "faces": ("thresholds", ThresholdConfig),
    "group": ("group", GroupConfig),
    "generic": ("generic", GenericConfig),
    "ml": ("ml", MlConfig),
    "dataset": ("dataset", DatasetConfig),
}


def load_config(path: str | Path) -> Config:
    """Load a TOML config file.

    Recognised sections: [faces], [group], [generic], [ml], [dataset]; keys
    are the dataclass field names above. Unknown sections or keys are errors
    so typos fail loudly.
    """
    raw = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    kwargs: dict[str, object] = {}
    for section, values in raw.items():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown config section [{section}]")
        attr, cls = _SECTIONS[section]
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(values) - names
        if unknown:
            raise ConfigError(f"unknown key(s) in [{section}]: {sorted(unknown)}")
        if "occlusion" in values:
            values = dict(values)
            values["occlusion"] = tuple(float(x) for x in values["occlusion"])
        kwargs[attr] = cls(**values)
    return Config(**kwargs)  # type: ignore[arg-type]
