"""Deterministic synthetic fixtures: rendered group-photo images, face
annotation sidecars, the standard-vs-variant comparison pairs, and a
score table driven by the group features for protocol experiments.

No real photographs ship with the project; everything here is generated
from seeds so tests and experiments are reproducible byte-for-byte.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from . import group_features as gf
from .faces import Rect
from .vector import FEATURE_NAMES, N_FEATURES, FeatureTable

FRAME_W = 192
FRAME_H = 144

OPEN_EYE = {"c1": 96.0, "c2": 1.0, "c3": 1.0, "c4": 1.0, "c5": 0.5, "c6": 0.5}
CLOSED_EYE = {"c1": 1.0, "c2": 1.0, "c3": 1.0, "c4": 1.0, "c5": 95.0, "c6": 1.0}

# score weights for the synthetic ground truth; gaze dominates, then
# occlusion, then centering, mirroring the qualitative importance ordering
SCORE_WEIGHTS = {
    "f1": 0.6,
    "f2": 1.4,
    "f3": 0.2,
    "f4": 2.2,
    "f5": 0.4,
    "f6": 0.3,
    "f7": 0.9,
}
SCORE_BASE = 4.0


def face_entry(
    box: Rect,
    *,
    eyes_open: bool = True,
    occluded_region: int | None = None,
    facing: bool = True,
    looking: bool = True,
    blurred: bool = False,
    smiling: bool = True,
    include_gaze: bool = True,
) -> dict:
    """One sidecar face entry with self-consistent gaze geometry.

    The gaze window is the face box itself; a "looking" face aims its gaze
    slightly downward so the junction lands inside the box, a looking-away
    face aims far to the side.
    """
    eye = OPEN_EYE if eyes_open else CLOSED_EYE
    occlusion = [0.0] * 7
    if occluded_region is not None:
        occlusion[occluded_region] = 0.95
    entry = {
        "box": {"x": box.x, "y": box.y, "w": box.w, "h": box.h},
        "left_eye": dict(eye),
        "right_eye": dict(eye),
        "smile": 80.0 if smiling else 10.0,
        "yaw": 0.0 if facing else 90.0,
        "occlusion": occlusion,
        "blur": 80.0 if blurred else 10.0,
        "gaze_range": {"x": box.x, "y": box.y, "w": box.w, "h": box.h},
    }
    if include_gaze:
        c1 = (box.x + 0.3 * box.w, box.y + 0.35 * box.h)
        c2 = (box.x + 0.7 * box.w, box.y + 0.35 * box.h)
        direction = (0.0, 0.3) if looking else (0.95, -0.3)
        entry["gaze"] = {
            "c1": list(c1),
            "c2": list(c2),
            "dl": list(direction),
            "dr": list(direction),
        }
    else:
        entry["gaze"] = None
    return entry


def corpus_document(entries: list[dict], frame_w: int = FRAME_W, frame_h: int = FRAME_H) -> dict:
    return {"frame_w": frame_w, "frame_h": frame_h, "faces": entries}


def centered_boxes(n_faces: int, frame_w: int = FRAME_W, frame_h: int = FRAME_H) -> list[Rect]:
    """Equal boxes in a row whose mean center sits at half the frame width."""
    size = min(frame_h // 3, frame_w // (n_faces + 1))
    gap = size // 4
    total = n_faces * size + (n_faces - 1) * gap
    x0 = (frame_w - total) / 2
    y = frame_h / 2 - size / 2
    return [Rect(x0 + i * (size + gap), y, size, size) for i in range(n_faces)]


def offset_boxes(n_faces: int, frame_w: int = FRAME_W, frame_h: int = FRAME_H) -> list[Rect]:
    """Small boxes packed against the left edge; mean center ratio < 0.4."""
    size = frame_h // 6
    gap = 4
    y = frame_h / 2 - size / 2
    boxes = [Rect(2 + i * (size + gap), y, size, size) for i in range(n_faces)]
    mean_ratio = sum(b.center_x() for b in boxes) / n_faces / frame_w
    assert mean_ratio < 0.4, f"off-center fixture landed at ratio {mean_ratio}"
    return boxes


def render_group_photo(seed: int, boxes: list[Rect], frame_w: int = FRAME_W,
                       frame_h: int = FRAME_H) -> Image.Image:
    """Deterministic stand-in scene: gradient sky, ground band, one blob and
    shoulder box per person, plus a few seeded accent lines."""
    rng = random.Random(seed)
    top = tuple(rng.randrange(40, 220) for _ in range(3))
    bottom = tuple(rng.randrange(40, 220) for _ in range(3))
    img = Image.new("RGB", (frame_w, frame_h))
    draw = ImageDraw.Draw(img)
    for y in range(frame_h):
        t = y / max(1, frame_h - 1)
        color = tuple(int(a + (b - a) * t) for a, b in zip(top, bottom))
        draw.line([(0, y), (frame_w, y)], fill=color)
    ground = tuple(rng.randrange(30, 120) for _ in range(3))
    draw.rectangle([0, int(frame_h * 0.75), frame_w, frame_h], fill=ground)
    for box in boxes:
        skin = tuple(rng.randrange(120, 240) for _ in range(3))
        shirt = tuple(rng.randrange(20, 200) for _ in range(3))
        x0, y0 = int(box.x), int(box.y)
        x1, y1 = int(box.x + box.w), int(box.y + box.h)
        draw.rectangle([x0, y1, x1, min(frame_h, y1 + int(box.h))], fill=shirt)
        draw.ellipse([x0, y0, x1, y1], fill=skin)
    for _ in range(4):
        x = rng.randrange(0, frame_w)
        shade = tuple(rng.randrange(0, 255) for _ in range(3))
        draw.line([(x, 0), (x, frame_h)], fill=shade, width=1)
    return img


def _write_photo(path: Path, image: Image.Image, doc: dict) -> None:
    image.save(path, format="PNG")
    sidecar = path.with_name(path.name + ".faces.json")
    sidecar.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def write_corpus(directory: str | Path, seed: int = 0) -> list[Path]:
    """Three-image corpus with sidecars: one ideal group, one with eye/smile
    defects, one off-center with an occluded face."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    boxes = centered_boxes(3)
    ideal = [face_entry(b) for b in boxes]
    path = directory / "group_ideal.png"
    _write_photo(path, render_group_photo(seed, boxes), corpus_document(ideal))
    written.append(path)

    defects = [
        face_entry(boxes[0], eyes_open=False, looking=False),
        face_entry(boxes[1], smiling=False),
        face_entry(boxes[2]),
    ]
    path = directory / "group_mixed.png"
    _write_photo(path, render_group_photo(seed + 1, boxes), corpus_document(defects))
    written.append(path)

    left = offset_boxes(3)
    shifted = [
        face_entry(left[0], occluded_region=4),
        face_entry(left[1]),
        face_entry(left[2], blurred=True),
    ]
    path = directory / "group_shifted.png"
    _write_photo(path, render_group_photo(seed + 2, left), corpus_document(shifted))
    written.append(path)
    return written


VARIANT_NAMES = ("looking_away", "occluded", "off_center")


def write_delta_pairs(directory: str | Path, seed: int = 0, groups: int = 4,
                      faces_per_group: int = 4) -> dict:
    """Standard-vs-variant fixture groups with identical pixels per group.

    Each group shares one rendered image; only the face metadata differs:
    everyone looks away, half the faces get a covered mouth, or the boxes
    move into the left fifth of the frame. Returns the manifest (also
    written as delta_manifest.json).
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest: dict = {"groups": []}
    for g in range(groups):
        boxes = centered_boxes(faces_per_group)
        image = render_group_photo(seed + 100 + g, boxes)
        entries = {
            "standard": [face_entry(b) for b in boxes],
            "looking_away": [face_entry(b, looking=False) for b in boxes],
            "occluded": [
                face_entry(b, occluded_region=4 if i < faces_per_group // 2 else None)
                for i, b in enumerate(boxes)
            ],
            "off_center": [face_entry(b) for b in offset_boxes(faces_per_group)],
        }
        group_entry = {"name": f"g{g}", "others": {}}
        for variant, faces in entries.items():
            path = directory / f"g{g}_{variant}.png"
            _write_photo(path, image, corpus_document(faces))
            if variant == "standard":
                group_entry["standard"] = str(path)
            else:
                group_entry["others"][variant] = str(path)
        manifest["groups"].append(group_entry)
    (directory / "delta_manifest.json").write_text(
        json.dumps(manifest, indent=1, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest


def synthetic_score(features: dict[str, float], noise: float = 0.0) -> float:
    raw = SCORE_BASE + sum(SCORE_WEIGHTS[k] * features[k] for k in SCORE_WEIGHTS) + noise
    return float(min(10.0, max(1.0, raw)))


def gpf_training_table(seed: int = 0, rows: int = 400) -> FeatureTable:
    """Synthetic 90-feature table whose scores follow the group features.

    Group slots come from random per-face flag draws run through the real
    aggregation formulas; generic slots are uninformative seeded noise.
    """
    rng = np.random.default_rng(seed)
    scale = rng.uniform(0.5, 20.0, size=N_FEATURES - 7)
    ids: list[str] = []
    matrix = np.empty((rows, N_FEATURES), dtype=np.float64)
    scores: list[float | None] = []
    labels: list[int | None] = []
    for i in range(rows):
        n = int(rng.integers(2, 7))
        # a good share of near-ideal rows keeps the all-pass corner of the
        # feature space populated, so tree ensembles stay sharp there
        ideal = rng.random() < 0.35

        def share() -> float:
            return float(rng.uniform(0.8, 1.0) if ideal else rng.random())

        e = rng.random(n) < share()
        h = rng.random(n) < share()
        g = e & h & (rng.random(n) < share())
        o = rng.random(n) < (rng.uniform(0.0, 0.1) if ideal else rng.random() * 0.7)
        b = rng.random(n) < (rng.uniform(0.0, 0.1) if ideal else rng.random() * 0.5)
        m = rng.random(n) < share()
        center_ratio = rng.uniform(0.4, 0.6) if ideal else rng.random()
        values = {
            "f1": gf.f1_open_eyed(list(e)),
            "f2": gf.f2_unoccluded(list(o)),
            "f3": gf.f3_face_orientation(list(h)),
            "f4": gf.f4_gaze(list(g)),
            "f5": gf.f5_facial_blur(list(b)),
            "f6": gf.f6_smile(list(m)),
            "f7": 1.0 if 0.4 <= center_ratio <= 0.6 else 0.0,
        }
        noise = float(rng.normal(0.0, 0.1))
        score = synthetic_score(values, noise)
        matrix[i, :7] = [values[f"f{j}"] for j in range(1, 8)]
        matrix[i, 7:] = rng.normal(0.0, 1.0, size=N_FEATURES - 7) * scale
        ids.append(f"synth{i:04d}")
        scores.append(round(score, 6))
        labels.append(1 if score >= 6.0 else 0)
    return FeatureTable(ids=ids, features=matrix, scores=scores, labels=labels)
