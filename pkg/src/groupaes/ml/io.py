"""Versioned model files.

Layout: one magic+version line, one JSON header line (kind, selection,
feature names, mask, z-score stats, hyperparameters, payload digest), then
the pickled estimator. The digest turns truncation or corruption into a
clean load error.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import pickle
from pathlib import Path

import numpy as np

from ..config import MlConfig
from .normalize import ZScoreStats
from .pipeline import TrainedModel

MAGIC = b"GROUPAES-MODEL"
FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    """The file is not a readable model of a supported version."""


def save_model(model: TrainedModel, path: str | Path) -> None:
    payload = pickle.dumps(model.estimator, protocol=pickle.HIGHEST_PROTOCOL)
    header = {
        "kind": model.kind,
        "selection": model.selection,
        "feature_names": list(model.feature_names),
        "mask": model.mask.astype(int).tolist(),
        "zscore": model.zscore.to_jsonable(),
        "config": dataclasses.asdict(model.config),
        "payload_sha256": hashlib.sha256(payload).hexdigest(),
        "payload_len": len(payload),
    }
    with open(path, "wb") as fh:
        fh.write(MAGIC + b" " + str(FORMAT_VERSION).encode() + b"\n")
        fh.write(json.dumps(header, sort_keys=True).encode("utf-8") + b"\n")
        fh.write(payload)


def load_model(path: str | Path) -> TrainedModel:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ModelFormatError(f"cannot read model file: {exc}") from exc
    first_break = raw.find(b"\n")
    if first_break < 0 or not raw.startswith(MAGIC + b" "):
        raise ModelFormatError(f"{path}: not a model file (bad magic)")
    version_text = raw[len(MAGIC) + 1 : first_break].decode("ascii", "replace")
    try:
        version = int(version_text)
    except ValueError:
        raise ModelFormatError(f"{path}: unreadable format version {version_text!r}")
    if version != FORMAT_VERSION:
        raise ModelFormatError(
            f"{path}: format version {version} unsupported (expected {FORMAT_VERSION})"
        )
    second_break = raw.find(b"\n", first_break + 1)
    if second_break < 0:
        raise ModelFormatError(f"{path}: truncated before header")
    try:
        header = json.loads(raw[first_break + 1 : second_break])
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: corrupt header: {exc}") from exc
    payload = raw[second_break + 1 :]
    if len(payload) != header.get("payload_len"):
        raise ModelFormatError(f"{path}: truncated payload")
    if hashlib.sha256(payload).hexdigest() != header.get("payload_sha256"):
        raise ModelFormatError(f"{path}: payload digest mismatch (corrupt file)")
    try:
        estimator = pickle.loads(payload)
    except Exception as exc:  # pickle raises a grab-bag of types
        raise ModelFormatError(f"{path}: cannot unpickle estimator: {exc}") from exc
    return TrainedModel(
        kind=header["kind"],
        feature_names=tuple(header["feature_names"]),
        mask=np.asarray(header["mask"], dtype=bool),
        zscore=ZScoreStats.from_jsonable(header["zscore"]),
        estimator=estimator,
        config=MlConfig(**header["config"]),
        selection=header.get("selection", "none"),
    )
