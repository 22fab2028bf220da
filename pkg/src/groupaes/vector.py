"""The 90-slot feature vector: slot names, categories and CSV interchange.

Slots f1-f7 come from the group-photography features, f8-f90 from the
generic aesthetic features. The CSV layout is ``id,f1..f90,score,label``
(id is the row key; score/label stay empty until ratings are joined in).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

N_FEATURES = 90
N_GROUP = 7
N_GENERIC = 83

COLOR_NAME_ORDER = (
    "black", "silver", "gray", "white", "maroon", "red", "purple", "fuchsia",
    "green", "lime", "olive", "yellow", "navy", "blue", "teal", "aqua",
)

_CHANNELS = ("hue", "saturation", "brightness")
_GLCM_METRICS = ("contrast", "correlation", "homogeneity", "energy")


@dataclass(frozen=True)
class SlotInfo:
    name: str        # canonical column name: f1..f90
    label: str       # what the value measures
    category: str    # group | color | regional | texture | composition


def _build_slots() -> tuple[SlotInfo, ...]:
    slots: list[SlotInfo] = []

    def add(label: str, category: str) -> None:
        slots.append(SlotInfo(f"f{len(slots) + 1}", label, category))

    add("open_eyed", "group")
    add("unoccluded_faces", "group")
    add("face_orientation", "group")
    add("gaze", "group")
    add("facial_blur", "group")
    add("smile", "group")
    add("character_center", "group")

    # f8-f13 whole-image and central means
    for region in ("mean", "center"):
        for ch in ("brightness", "saturation", "hue"):
            add(f"{region}_{ch}", "color")
    # f14-f25 wavelet textures: three levels per channel, then channel sums
    for ch in _CHANNELS:
        for level in (1, 2, 3):
            add(f"wavelet_{ch}_l{level}", "texture")
    for ch in _CHANNELS:
        add(f"wavelet_{ch}_sum", "texture")
    # f26-f27 image size
    add("size_sum", "composition")
    add("aspect_ratio", "composition")
    # f28-f48 segmentation regions
    add("region_count", "regional")
    for i in range(1, 6):
        for ch in _CHANNELS:
            add(f"region{i}_{ch}", "regional")
    for i in range(1, 6):
        add(f"region{i}_area_ratio", "regional")
    # f49-f51 low depth of field
    for ch in _CHANNELS:
        add(f"low_dof_{ch}", "composition")
    # f52-f54 emotion
    for pad in ("pleasure", "arousal", "dominance"):
        add(f"pad_{pad}", "color")
    # f55 colorfulness
    add("colorfulness_emd", "color")
    # f56-f71 named colors
    for name in COLOR_NAME_ORDER:
        add(f"color_{name}", "color")
    # f72-f83 co-occurrence texture
    for ch in _CHANNELS:
        for metric in _GLCM_METRICS:
            add(f"glcm_{ch}_{metric}", "texture")
    # f84-f89 line dynamics
    for kind in ("static", "dynamic"):
        add(f"{kind}_mean_abs_angle", "composition")
        add(f"{kind}_mean_rel_angle", "composition")
        add(f"{kind}_total_length", "composition")
    # f90 level of detail
    add("segment_count", "composition")

    assert len(slots) == N_FEATURES
    return tuple(slots)


SLOTS: tuple[SlotInfo, ...] = _build_slots()
FEATURE_NAMES: tuple[str, ...] = tuple(s.name for s in SLOTS)
CSV_HEADER: tuple[str, ...] = ("id", *FEATURE_NAMES, "score", "label")


def slot_label(name: str) -> str:
    return SLOTS[int(name[1:]) - 1].label


def assemble(group_values: np.ndarray, generic_values: np.ndarray) -> np.ndarray:
    """Concatenate f1-f7 and f8-f90 into the canonical 90-vector."""
    if group_values.shape != (N_GROUP,) or generic_values.shape != (N_GENERIC,):
        raise ValueError(
            f"expected shapes ({N_GROUP},) and ({N_GENERIC},), got "
            f"{group_values.shape} and {generic_values.shape}"
        )
    return np.concatenate([group_values, generic_values]).astype(np.float64)


@dataclass
class FeatureTable:
    """Rows of the interchange CSV: ids, 90 features, optional score/label."""

    ids: list[str]
    features: np.ndarray                 # (n, 90)
    scores: list[float | None]
    labels: list[int | None]             # 1 good, 0 bad

    def __post_init__(self) -> None:
        n = len(self.ids)
        if self.features.shape != (n, N_FEATURES):
            raise ValueError(f"feature block must be ({n}, {N_FEATURES})")
        if len(self.scores) != n or len(self.labels) != n:
            raise ValueError("scores/labels length must match ids")
        if not np.isfinite(self.features).all():
            raise ValueError("feature matrix contains NaN or Inf")

    def __len__(self) -> int:
        return len(self.ids)


def _format_value(x: float) -> str:
    # fixed 6-decimal serialization keeps reruns byte-identical
    return f"{x:.6f}"


def write_feature_csv(path: str | Path, table: FeatureTable) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for i, row_id in enumerate(table.ids):
            score = table.scores[i]
            label = table.labels[i]
            writer.writerow(
                [
                    row_id,
                    *(_format_value(v) for v in table.features[i]),
                    "" if score is None else _format_value(score),
                    "" if label is None else str(int(label)),
                ]
            )


def read_feature_csv(path: str | Path) -> FeatureTable:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty feature CSV") from None
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header[:4]}...")
        ids: list[str] = []
        rows: list[list[float]] = []
        scores: list[float | None] = []
        labels: list[int | None] = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(CSV_HEADER):
                raise ValueError(f"{path}:{lineno}: expected {len(CSV_HEADER)} fields")
            ids.append(row[0])
            rows.append([float(v) for v in row[1 : 1 + N_FEATURES]])
            score_raw = row[1 + N_FEATURES]
            label_raw = row[2 + N_FEATURES]
            scores.append(None if score_raw == "" else float(score_raw))
            labels.append(None if label_raw == "" else int(label_raw))
    features = (
        np.array(rows, dtype=np.float64)
        if rows
        else np.empty((0, N_FEATURES), dtype=np.float64)
    )
    return FeatureTable(ids=ids, features=features, scores=scores, labels=labels)
