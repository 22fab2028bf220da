"""HTTP annotation service: serves random photos for first-impression
rating, accepts 1-10 scores and photo uploads, reports score statistics.

Raters are anonymous client-supplied tokens. Photo selection prefers the
photos with the fewest ratings (stopping at the per-photo cap) so coverage
converges to the target rating range without scheduling.
"""

from __future__ import annotations

import mimetypes
import random
import threading
from pathlib import Path

from fastapi import FastAPI, File, Form, Query, UploadFile
from fastapi.responses import FileResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .dataset import (
    DatasetError,
    DuplicateRatingError,
    Rating,
    RecordStore,
    UnknownPhotoError,
)
from .generic.preprocess import ImageDecodeError, ImageSizeError, decode_image

GUIDANCE_TEXT = (
    "Please pay attention to the following factors when scoring: face "
    "occlusion, eyes closed, gaze, smile, and general aesthetic factors "
    "such as lighting, composition, color, and picture clarity."
)


class RatingBody(BaseModel):
    photo_id: str
    rater: str = Field(min_length=1)
    score: int = Field(ge=1, le=10)


def create_app(
    store: RecordStore,
    images_dir: str | Path,
    static_dir: str | Path | None = None,
    rng_seed: int | None = None,
) -> FastAPI:
    app = FastAPI(title="group photo rating service")
    images = Path(images_dir)
    images.mkdir(parents=True, exist_ok=True)
    rng = random.Random(rng_seed)
    rng_lock = threading.Lock()

    @app.exception_handler(DuplicateRatingError)
    async def _duplicate(_, exc):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.exception_handler(UnknownPhotoError)
    async def _unknown(_, exc):
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.exception_handler(DatasetError)
    async def _dataset(_, exc):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.get("/api/next")
    def next_photo(rater: str = Query(min_length=1)):
        snapshot = store.snapshot()
        eligible: list[tuple[int, str]] = []
        for record in snapshot.values():
            if record.rating_count() >= store.config.max_raters:
                continue
            if any(r.rater_id == rater for r in record.ratings):
                continue
            eligible.append((record.rating_count(), record.photo_id))
        if not eligible:
            return Response(status_code=204)
        fewest = min(count for count, _ in eligible)
        pool = sorted(pid for count, pid in eligible if count == fewest)
        with rng_lock:
            photo_id = rng.choice(pool)
        record = snapshot[photo_id]
        return {
            "photo_id": photo_id,
            "url": f"/api/photo/{photo_id}",
            "ratings": record.rating_count(),
            "guidance": GUIDANCE_TEXT,
        }

    @app.post("/api/rating")
    def post_rating(body: RatingBody):
        count = store.append_rating(
            Rating(photo_id=body.photo_id, rater_id=body.rater, score=body.score)
        )
        record = store.get(body.photo_id)
        return {
            "photo_id": body.photo_id,
            "count": count,
            "labeled": store.mean_score(record) is not None,
        }

    @app.post("/api/upload")
    async def upload(file: UploadFile = File(...), source: str = Form("self")):
        data = await file.read()
        try:
            image = decode_image(data)
        except (ImageDecodeError, ImageSizeError) as exc:
            return JSONResponse(status_code=422, content={"error": str(exc)})
        suffix = (image.format or "png").lower()
        photo_id = store.allocate_photo_id()
        destination = images / f"{photo_id}.{suffix}"
        destination.write_bytes(data)
        record = store.add_photo(path=str(destination), source=source, photo_id=photo_id)
        return {"photo_id": record.photo_id, "path": str(destination)}

    @app.get("/api/stats")
    def stats():
        histogram = store.histogram()
        return {
            **store.counts(),
            "histogram": [float(v) for v in histogram],
        }

    @app.get("/api/photo/{photo_id}")
    def photo_bytes(photo_id: str):
        record = store.get(photo_id)
        path = Path(record.path)
        if not path.exists():
            return JSONResponse(status_code=404, content={"error": f"image file missing: {path}"})
        media_type = mimetypes.guess_type(path.name)[0] or "application/octet-stream"
        return FileResponse(path, media_type=media_type)

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def register_image_dir(store: RecordStore, directory: str | Path, source: str = "self") -> int:
    """Register every image in a directory with the store; returns the count."""
    added = 0
    for path in sorted(Path(directory).iterdir()):
        if path.suffix.lower() not in (".png", ".jpg", ".jpeg", ".bmp"):
            continue
        if any(record.path == str(path) for record in store.photos()):
            continue
        store.add_photo(path=str(path), source=source)
        added += 1
    return added
