"""Photo registry and rating store.

Records persist as one JSON object per line (append-only, so a crash can
lose at most the line being written). Aggregation follows the collection
protocol: a photo earns its mean score once enough raters weighed in, and
the binary label is good when the mean reaches the boundary.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .config import DatasetConfig
from .vector import FeatureTable, N_FEATURES, write_feature_csv


class DatasetError(Exception):
    pass


class UnknownPhotoError(DatasetError):
    pass


class DuplicateRatingError(DatasetError):
    pass


class RatingValidationError(DatasetError):
    pass


class InsufficientRatingsError(DatasetError):
    pass


@dataclass(frozen=True)
class Rating:
    photo_id: str
    rater_id: str
    score: int
    timestamp: float = field(default_factory=time.time)

    def __post_init__(self) -> None:
        if not isinstance(self.score, int) or not 1 <= self.score <= 10:
            raise RatingValidationError(f"score must be an integer in 1..10, got {self.score!r}")
        if not self.photo_id or not self.rater_id:
            raise RatingValidationError("photo_id and rater_id must be non-empty")


SOURCES = ("self", "existing-dataset", "internet")


@dataclass(frozen=True)
class PhotoRecord:
    photo_id: str
    path: str
    source: str = "self"
    ratings: tuple[Rating, ...] = ()

    def __post_init__(self) -> None:
        if self.source not in SOURCES:
            raise DatasetError(f"unknown source tag {self.source!r}; use one of {SOURCES}")

    def rating_count(self) -> int:
        return len(self.ratings)


def aggregate(record: PhotoRecord, min_raters: int = 5) -> float:
    """Mean rating at 6-decimal precision; needs at least ``min_raters``."""
    if record.rating_count() < min_raters:
        raise InsufficientRatingsError(
            f"photo {record.photo_id} has {record.rating_count()} ratings, needs {min_raters}"
        )
    return round(sum(r.score for r in record.ratings) / record.rating_count(), 6)


def binarize(mean_score: float, boundary: float = 6.0) -> str:
    """'good' when the mean reaches the boundary (inclusive), else 'bad'."""
    return "good" if mean_score >= boundary else "bad"


def label_to_int(label: str) -> int:
    return 1 if label == "good" else 0


class RecordStore:
    """Append-only photo/rating store with copy-on-write snapshots.

    Mutations are serialized by an internal lock and flushed line-by-line;
    readers grab the current snapshot mapping without locking.
    """

    def __init__(self, path: str | Path, config: DatasetConfig | None = None) -> None:
        self.path = Path(path)
        self.config = config or DatasetConfig()
        self._lock = threading.Lock()
        self._photos: dict[str, PhotoRecord] = {}
        self._rating_keys: set[tuple[str, str]] = set()
        self._next_photo = 1
        self.flagged_over_cap: set[str] = set()
        if self.path.exists():
            self._replay()
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.touch()

    # -- persistence -------------------------------------------------------

    def _replay(self) -> None:
        with open(self.path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DatasetError(f"{self.path}:{lineno}: corrupt record: {exc}") from exc
                kind = obj.get("type")
                if kind == "photo":
                    record = PhotoRecord(
                        photo_id=obj["photo_id"], path=obj["path"], source=obj["source"]
                    )
                    self._photos[record.photo_id] = record
                elif kind == "rating":
                    rating = Rating(
                        photo_id=obj["photo_id"],
                        rater_id=obj["rater_id"],
                        score=int(obj["score"]),
                        timestamp=float(obj["timestamp"]),
                    )
                    self._attach(rating, lineno)
                else:
                    raise DatasetError(f"{self.path}:{lineno}: unknown record type {kind!r}")
        numeric = [
            int(pid[1:]) for pid in self._photos if pid.startswith("p") and pid[1:].isdigit()
        ]
        self._next_photo = max(numeric, default=0) + 1

    def _attach(self, rating: Rating, lineno: int | None = None) -> int:
        where = f"{self.path}:{lineno}: " if lineno else ""
        record = self._photos.get(rating.photo_id)
        if record is None:
            raise UnknownPhotoError(f"{where}no such photo {rating.photo_id!r}")
        key = (rating.photo_id, rating.rater_id)
        if key in self._rating_keys:
            raise DuplicateRatingError(
                f"{where}rater {rating.rater_id!r} already rated photo {rating.photo_id!r}"
            )
        self._rating_keys.add(key)
        updated = replace(record, ratings=record.ratings + (rating,))
        self._photos[rating.photo_id] = updated
        if updated.rating_count() > self.config.max_raters:
            self.flagged_over_cap.add(rating.photo_id)
        return updated.rating_count()

    def _append_line(self, obj: dict) -> None:
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(obj, sort_keys=True) + "\n")
            fh.flush()

    # -- mutations ---------------------------------------------------------

    def allocate_photo_id(self) -> str:
        """Reserve a unique id (e.g. for naming an upload before registering)."""
        with self._lock:
            photo_id = f"p{self._next_photo:04d}"
            self._next_photo += 1
            return photo_id

    def add_photo(
        self, path: str, source: str = "self", photo_id: str | None = None
    ) -> PhotoRecord:
        if photo_id is None:
            photo_id = self.allocate_photo_id()
        with self._lock:
            if photo_id in self._photos:
                raise DatasetError(f"photo id {photo_id!r} already registered")
            record = PhotoRecord(photo_id=photo_id, path=path, source=source)
            self._photos[photo_id] = record
            self._append_line(
                {"type": "photo", "photo_id": photo_id, "path": path, "source": source}
            )
            return record

    def append_rating(self, rating: Rating) -> int:
        """Store one rating; returns the photo's new rating count."""
        with self._lock:
            count = self._attach(rating)
            self._append_line(
                {
                    "type": "rating",
                    "photo_id": rating.photo_id,
                    "rater_id": rating.rater_id,
                    "score": rating.score,
                    "timestamp": rating.timestamp,
                }
            )
            return count

    # -- reads --------------------------------------------------------------

    def snapshot(self) -> Mapping[str, PhotoRecord]:
        return dict(self._photos)

    def get(self, photo_id: str) -> PhotoRecord:
        record = self._photos.get(photo_id)
        if record is None:
            raise UnknownPhotoError(f"no such photo {photo_id!r}")
        return record

    def photos(self) -> list[PhotoRecord]:
        return list(self._photos.values())

    def mean_score(self, record: PhotoRecord) -> float | None:
        try:
            return aggregate(record, self.config.min_raters)
        except InsufficientRatingsError:
            return None

    def label(self, record: PhotoRecord) -> str | None:
        mean = self.mean_score(record)
        if mean is None:
            return None
        return binarize(mean, self.config.good_boundary)

    def labeled_photos(self) -> list[tuple[PhotoRecord, float, str]]:
        out = []
        for record in self._photos.values():
            mean = self.mean_score(record)
            if mean is not None:
                out.append((record, mean, binarize(mean, self.config.good_boundary)))
        return out

    def histogram(self) -> np.ndarray:
        """Proportion of labeled photos per rounded score bin 0..10."""
        bins = np.zeros(11, dtype=np.float64)
        labeled = self.labeled_photos()
        for _, mean, _ in labeled:
            bins[int(round(mean))] += 1
        if labeled:
            bins /= len(labeled)
        return bins

    def counts(self) -> dict:
        return {
            "photos": len(self._photos),
            "ratings": len(self._rating_keys),
            "labeled": len(self.labeled_photos()),
        }

    # -- exports -------------------------------------------------------------

    def split(self, test_fraction: float = 0.2, seed: int = 0) -> tuple[list[str], list[str]]:
        """Disjoint, exhaustive train/test photo-id lists over labeled photos."""
        ids = sorted(record.photo_id for record, _, _ in self.labeled_photos())
        rng = np.random.default_rng(seed)
        order = rng.permutation(len(ids))
        n_test = int(round(len(ids) * test_fraction))
        test = sorted(ids[i] for i in order[:n_test])
        train = sorted(ids[i] for i in order[n_test:])
        return train, test

    def export_csv(self, path: str | Path, features: Mapping[str, np.ndarray]) -> int:
        """Join labeled photos with extracted 90-vectors into the feature CSV.

        Returns the number of rows written; photos without features or
        without labels are skipped.
        """
        ids: list[str] = []
        rows: list[np.ndarray] = []
        scores: list[float | None] = []
        labels: list[int | None] = []
        for record, mean, label in sorted(
            self.labeled_photos(), key=lambda item: item[0].photo_id
        ):
            vector = features.get(record.photo_id)
            if vector is None:
                continue
            ids.append(record.photo_id)
            rows.append(np.asarray(vector, dtype=np.float64))
            scores.append(mean)
            labels.append(label_to_int(label))
        table = FeatureTable(
            ids=ids,
            features=np.array(rows, dtype=np.float64).reshape(len(ids), N_FEATURES),
            scores=scores,
            labels=labels,
        )
        write_feature_csv(path, table)
        return len(ids)
