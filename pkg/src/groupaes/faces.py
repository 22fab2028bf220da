"""Face sequence model: per-person detector fields, state predicates and
gaze-junction geometry, plus ingestion from sidecar files or an HTTP
face-analysis endpoint.

The sidecar schema (``<image>.faces.json``) is a plain JSON object:

    {"frame_w": .., "frame_h": ..,
     "faces": [{"box": {"x","y","w","h"},
                "left_eye": {"c1".."c6"}, "right_eye": {"c1".."c6"},
                "gaze": {"c1": [x,y], "c2": [x,y],
                         "dl": [x,y], "dr": [x,y]} | null,
                "smile": number | null, "yaw": number,
                "occlusion": [o1..o7], "blur": number,
                "gaze_range": {"x","y","w","h"} | null}]}

All predicates are pure functions of (FaceInfo, ThresholdConfig).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import httpx

from .config import ThresholdConfig

# Eye states 1..6: open no glasses, open ordinary glasses, sunglasses,
# covered eye, closed no glasses, closed ordinary glasses.
OPEN_EYE_STATES = (1, 2, 3)

OCCLUSION_REGIONS = (
    "left eye",
    "right eye",
    "left cheek",
    "right cheek",
    "mouth",
    "jaw",
    "nose",
)

_CONF_SUM_NORMALIZE_WINDOW = 1.0  # |sum-100| <= 1 renormalized, else rejected
_CONF_SUM_TOL = 1e-3


class FaceError(Exception):
    """Base class for face-model failures."""


class FaceValidationError(FaceError):
    """A field value violates its documented domain."""


class FaceParseError(FaceError):
    """The annotation document does not conform to the sidecar schema."""


class GazeUnavailableError(FaceError):
    """Gaze vectors are absent, so no junction point can be computed."""


class FaceFetchError(FaceError):
    """Transport-level failure while fetching face annotations."""


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in pixel coordinates, closed on all edges."""

    x: float
    y: float
    w: float
    h: float

    def contains(self, px: float, py: float) -> bool:
        return self.x <= px <= self.x + self.w and self.y <= py <= self.y + self.h

    def center_x(self) -> float:
        return self.x + self.w / 2.0

    def expanded(self, margin: float) -> "Rect":
        """Grow by ``margin`` times width/height on each side."""
        return Rect(
            self.x - margin * self.w,
            self.y - margin * self.h,
            self.w * (1 + 2 * margin),
            self.h * (1 + 2 * margin),
        )

    def translated(self, dx: float, dy: float) -> "Rect":
        return Rect(self.x + dx, self.y + dy, self.w, self.h)


@dataclass(frozen=True)
class EyeStateConfidences:
    """Confidence (0-100) of the six eye states; sums to 100."""

    values: tuple[float, float, float, float, float, float]

    def __post_init__(self) -> None:
        if len(self.values) != 6:
            raise FaceValidationError("eye confidences need exactly 6 values")
        for i, c in enumerate(self.values, start=1):
            if not 0.0 <= c <= 100.0:
                raise FaceValidationError(f"c{i} out of [0,100]: {c}")
        if abs(sum(self.values) - 100.0) > _CONF_SUM_TOL:
            raise FaceValidationError(
                f"eye confidences sum to {sum(self.values)}, expected 100"
            )

    @classmethod
    def from_raw(cls, raw: Sequence[float]) -> "EyeStateConfidences":
        """Build from detector output, renormalizing sums within 1.0 of 100."""
        vals = tuple(float(c) for c in raw)
        if len(vals) != 6:
            raise FaceValidationError("eye confidences need exactly 6 values")
        for i, c in enumerate(vals, start=1):
            if not 0.0 <= c <= 100.0:
                raise FaceValidationError(f"c{i} out of [0,100]: {c}")
        total = sum(vals)
        if abs(total - 100.0) > _CONF_SUM_NORMALIZE_WINDOW:
            raise FaceValidationError(
                f"eye confidences sum to {total}, off by more than "
                f"{_CONF_SUM_NORMALIZE_WINDOW} from 100"
            )
        if abs(total - 100.0) > _CONF_SUM_TOL:
            vals = tuple(c * 100.0 / total for c in vals)
        return cls(vals)  # type: ignore[arg-type]


@dataclass(frozen=True)
class GazeInfo:
    """Eyeball centers and gaze direction vectors (pixel space)."""

    left_center: tuple[float, float]
    right_center: tuple[float, float]
    left_dir: tuple[float, float]
    right_dir: tuple[float, float]

    def __post_init__(self) -> None:
        for name, (dx, dy) in (("dl", self.left_dir), ("dr", self.right_dir)):
            if math.hypot(dx, dy) == 0.0:
                raise FaceValidationError(f"gaze direction {name} has zero magnitude")


@dataclass(frozen=True)
class FaceInfo:
    """One person's detector output."""

    box: Rect
    left_eye: EyeStateConfidences
    right_eye: EyeStateConfidences
    gaze: GazeInfo | None
    smile: float | None
    yaw: float
    occlusion: tuple[float, ...]
    blur: float
    gaze_range: Rect | None

    def __post_init__(self) -> None:
        if self.box.w <= 0 or self.box.h <= 0:
            raise FaceValidationError(f"face box must have positive size: {self.box}")
        if not -180.0 <= self.yaw <= 180.0:
            raise FaceValidationError(f"yaw out of [-180,180]: {self.yaw}")
        if len(self.occlusion) != 7:
            raise FaceValidationError("occlusion needs exactly 7 region degrees")
        for j, o in enumerate(self.occlusion, start=1):
            if not 0.0 <= o <= 1.0:
                raise FaceValidationError(f"occlusion o{j} out of [0,1]: {o}")
        if self.smile is not None and not 0.0 <= self.smile <= 100.0:
            raise FaceValidationError(f"smile out of [0,100]: {self.smile}")
        if not 0.0 <= self.blur <= 100.0:
            raise FaceValidationError(f"blur out of [0,100]: {self.blur}")


@dataclass(frozen=True)
class FaceSequence:
    """Ordered faces of one photo plus frame size and ingestion warnings."""

    faces: tuple[FaceInfo, ...]
    frame_w: int
    frame_h: int
    warnings: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.faces)


# ---------------------------------------------------------------------------
# predicates


def eye_state(e: EyeStateConfidences) -> int:
    """Index (1..6) of the most confident eye state; ties take the lowest."""
    return e.values.index(max(e.values)) + 1


def is_open_eyed(f: FaceInfo) -> bool:
    """True when both eyes resolve to an open state (incl. sunglasses)."""
    return (
        eye_state(f.left_eye) in OPEN_EYE_STATES
        and eye_state(f.right_eye) in OPEN_EYE_STATES
    )


def is_occluded(f: FaceInfo, t: ThresholdConfig) -> bool:
    """True when any of the seven regions meets its occlusion threshold."""
    return any(o >= theta for o, theta in zip(f.occlusion, t.occlusion))


def is_facing_camera(f: FaceInfo, t: ThresholdConfig) -> bool:
    return t.yaw_lo <= f.yaw <= t.yaw_hi


def gaze_junction(f: FaceInfo) -> tuple[float, float]:
    """Project the averaged gaze ray from the eye midpoint.

    Circle center O = midpoint of the eyeball centers, radius R = the larger
    face-box side, averaged direction D = mean of the two gaze vectors; the
    junction is O + R*D.
    """
    if f.gaze is None:
        raise GazeUnavailableError("face has no gaze information")
    g = f.gaze
    ox = (g.left_center[0] + g.right_center[0]) / 2.0
    oy = (g.left_center[1] + g.right_center[1]) / 2.0
    r = max(f.box.w, f.box.h)
    dx = (g.left_dir[0] + g.right_dir[0]) / 2.0
    dy = (g.left_dir[1] + g.right_dir[1]) / 2.0
    return (ox + r * dx, oy + r * dy)


def effective_gaze_range(f: FaceInfo, t: ThresholdConfig) -> Rect:
    """Provider-supplied window, or the face box expanded as a fallback."""
    if f.gaze_range is not None:
        return f.gaze_range
    return f.box.expanded(t.gaze_range_margin)


def is_gazing(f: FaceInfo, t: ThresholdConfig) -> bool:
    """True when the person is looking at the lens.

    Prerequisites: eyes open, facing the camera, and both eye regions below
    their occlusion thresholds. The junction test is closed at the window
    boundary. Missing gaze data simply yields False.
    """
    if not is_open_eyed(f):
        return False
    if not is_facing_camera(f, t):
        return False
    if f.occlusion[0] >= t.occlusion[0] or f.occlusion[1] >= t.occlusion[1]:
        return False
    if f.gaze is None:
        return False
    px, py = gaze_junction(f)
    return effective_gaze_range(f, t).contains(px, py)


def is_blurred(f: FaceInfo, t: ThresholdConfig) -> bool:
    return f.blur > t.blur


def is_smiling(f: FaceInfo, t: ThresholdConfig) -> bool:
    if f.smile is None:
        return False
    return f.smile > t.smile


# ---------------------------------------------------------------------------
# parsing


def _expect(obj: dict, key: str, where: str):
    if key not in obj:
        raise FaceParseError(f"{where}: missing field {key!r}")
    return obj[key]


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FaceParseError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _point(value, where: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise FaceParseError(f"{where}: expected [x, y]")
    return (_number(value[0], where), _number(value[1], where))


def _rect(obj, where: str) -> Rect:
    if not isinstance(obj, dict):
        raise FaceParseError(f"{where}: expected an object with x,y,w,h")
    return Rect(*(_number(_expect(obj, k, where), f"{where}.{k}") for k in "xywh"))


def _eye(obj, where: str) -> EyeStateConfidences:
    if not isinstance(obj, dict):
        raise FaceParseError(f"{where}: expected an object with c1..c6")
    raw = [_number(_expect(obj, f"c{i}", where), f"{where}.c{i}") for i in range(1, 7)]
    try:
        return EyeStateConfidences.from_raw(raw)
    except FaceValidationError as exc:
        raise FaceValidationError(f"{where}: {exc}") from exc


def _parse_face(entry, index: int) -> tuple[FaceInfo, list[str]]:
    where = f"faces[{index}]"
    if not isinstance(entry, dict):
        raise FaceParseError(f"{where}: expected an object")
    warnings: list[str] = []

    box = _rect(_expect(entry, "box", where), f"{where}.box")
    left = _eye(_expect(entry, "left_eye", where), f"{where}.left_eye")
    right = _eye(_expect(entry, "right_eye", where), f"{where}.right_eye")

    gaze_obj = entry.get("gaze")
    gaze: GazeInfo | None = None
    if gaze_obj is None:
        warnings.append(f"{where}: gaze missing; gaze predicate degrades to false")
    else:
        gw = f"{where}.gaze"
        try:
            gaze = GazeInfo(
                left_center=_point(_expect(gaze_obj, "c1", gw), f"{gw}.c1"),
                right_center=_point(_expect(gaze_obj, "c2", gw), f"{gw}.c2"),
                left_dir=_point(_expect(gaze_obj, "dl", gw), f"{gw}.dl"),
                right_dir=_point(_expect(gaze_obj, "dr", gw), f"{gw}.dr"),
            )
        except FaceValidationError as exc:
            raise FaceValidationError(f"{gw}: {exc}") from exc

    smile_raw = entry.get("smile")
    smile: float | None = None
    if smile_raw is None:
        warnings.append(f"{where}: smile missing; smile predicate degrades to false")
    else:
        smile = _number(smile_raw, f"{where}.smile")

    occ_raw = _expect(entry, "occlusion", where)
    if not isinstance(occ_raw, (list, tuple)) or len(occ_raw) != 7:
        raise FaceParseError(f"{where}.occlusion: expected 7 region degrees")
    occlusion = tuple(_number(v, f"{where}.occlusion[{j}]") for j, v in enumerate(occ_raw))

    gr_obj = entry.get("gaze_range")
    gaze_range = None if gr_obj is None else _rect(gr_obj, f"{where}.gaze_range")
    if gr_obj is None and gaze_obj is not None:
        warnings.append(
            f"{where}: gaze_range missing; using expanded face box (approximation)"
        )

    try:
        face = FaceInfo(
            box=box,
            left_eye=left,
            right_eye=right,
            gaze=gaze,
            smile=smile,
            yaw=_number(_expect(entry, "yaw", where), f"{where}.yaw"),
            occlusion=occlusion,
            blur=_number(_expect(entry, "blur", where), f"{where}.blur"),
            gaze_range=gaze_range,
        )
    except FaceValidationError as exc:
        raise FaceValidationError(f"{where}: {exc}") from exc
    return face, warnings


def _clamp_box(face: FaceInfo, frame_w: int, frame_h: int, index: int) -> tuple[FaceInfo, list[str]]:
    b = face.box
    x0 = min(max(b.x, 0.0), float(frame_w))
    y0 = min(max(b.y, 0.0), float(frame_h))
    x1 = min(max(b.x + b.w, 0.0), float(frame_w))
    y1 = min(max(b.y + b.h, 0.0), float(frame_h))
    if (x0, y0, x1 - x0, y1 - y0) == (b.x, b.y, b.w, b.h):
        return face, []
    if x1 - x0 <= 0 or y1 - y0 <= 0:
        raise FaceValidationError(f"faces[{index}]: box lies entirely outside the frame")
    clamped = Rect(x0, y0, x1 - x0, y1 - y0)
    warning = f"faces[{index}]: box clamped to frame bounds ({b} -> {clamped})"
    return (
        FaceInfo(
            box=clamped,
            left_eye=face.left_eye,
            right_eye=face.right_eye,
            gaze=face.gaze,
            smile=face.smile,
            yaw=face.yaw,
            occlusion=face.occlusion,
            blur=face.blur,
            gaze_range=face.gaze_range,
        ),
        [warning],
    )


def parse_face_annotations(
    document: str | bytes | dict,
    frame_w: int | None = None,
    frame_h: int | None = None,
) -> FaceSequence:
    """Parse a face-annotation document into a validated FaceSequence.

    ``frame_w``/``frame_h`` serve as fallbacks when the document omits the
    frame size. Boxes are clamped to the frame with a warning; eye-confidence
    sums within 1.0 of 100 are renormalized, larger deviations are rejected.
    """
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise FaceParseError(f"invalid JSON: {exc}") from exc
    else:
        doc = document
    if not isinstance(doc, dict):
        raise FaceParseError("top level must be an object")

    fw = doc.get("frame_w", frame_w)
    fh = doc.get("frame_h", frame_h)
    if fw is None or fh is None:
        raise FaceParseError("frame_w/frame_h missing from document and arguments")
    fw = int(_number(fw, "frame_w"))
    fh = int(_number(fh, "frame_h"))
    if fw <= 0 or fh <= 0:
        raise FaceValidationError(f"frame size must be positive, got {fw}x{fh}")

    entries = doc.get("faces")
    if not isinstance(entries, list):
        raise FaceParseError("faces: expected a list")

    faces: list[FaceInfo] = []
    warnings: list[str] = []
    for i, entry in enumerate(entries):
        face, face_warnings = _parse_face(entry, i)
        face, clamp_warnings = _clamp_box(face, fw, fh, i)
        faces.append(face)
        warnings.extend(face_warnings + clamp_warnings)
    return FaceSequence(tuple(faces), fw, fh, tuple(warnings))


# ---------------------------------------------------------------------------
# providers


def sidecar_path(image_path: str | Path) -> Path:
    p = Path(image_path)
    return p.with_name(p.name + ".faces.json")


class FixtureProvider:
    """Reads ``<image>.faces.json`` written next to each image."""

    def fetch(self, image_path: str | Path) -> FaceSequence:
        sidecar = sidecar_path(image_path)
        if not sidecar.exists():
            raise FaceFetchError(f"missing annotation sidecar: {sidecar}")
        return parse_face_annotations(sidecar.read_text(encoding="utf-8"))


class HttpProvider:
    """POSTs image bytes to a face-analysis endpoint returning the schema.

    Retries transport failures and non-2xx responses up to ``retries``
    attempts with a linear backoff (0 by default so tests stay fast).
    """

    def __init__(
        self,
        base_url: str,
        path: str = "/analyze",
        timeout: float = 10.0,
        retries: int = 3,
        backoff: float = 0.0,
        transport: httpx.BaseTransport | None = None,
    ) -> None:
        self.url = base_url.rstrip("/") + path
        self.timeout = timeout
        self.retries = max(1, retries)
        self.backoff = backoff
        self._transport = transport

    def fetch(self, image_path: str | Path) -> FaceSequence:
        data = Path(image_path).read_bytes()
        last_error = "no attempt made"
        with httpx.Client(transport=self._transport, timeout=self.timeout) as client:
            for attempt in range(1, self.retries + 1):
                try:
                    response = client.post(
                        self.url,
                        content=data,
                        headers={"content-type": "application/octet-stream"},
                    )
                except httpx.HTTPError as exc:
                    last_error = f"transport error: {exc}"
                else:
                    if response.status_code // 100 == 2:
                        return parse_face_annotations(response.text)
                    last_error = f"HTTP {response.status_code}"
                if attempt < self.retries and self.backoff:
                    time.sleep(self.backoff * attempt)
        raise FaceFetchError(
            f"face endpoint {self.url} failed after {self.retries} attempts: {last_error}"
        )


def fetch_faces(image_path: str | Path, provider) -> FaceSequence:
    """Fetch the face sequence for an image through the given provider."""
    return provider.fetch(image_path)
