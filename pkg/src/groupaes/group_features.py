"""The seven group-photography features f1-f7.

f1-f4 map the share of people passing a per-face predicate (open eyes,
unoccluded, facing camera, gazing at the lens) through the same piecewise
rule: exactly 1 when everyone passes, otherwise 1 - 2^(-share), which tops
out at 0.5 just below a full house. f5 is the linear share of sharp faces,
f6 the share of smiles, f7 a binary horizontal-centering check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import faces as fm
from .config import ThresholdConfig


class NoFacesError(ValueError):
    """Raised for face-free inputs; group features are undefined there."""


def _share(flags: Sequence[bool], feature: str) -> float:
    if len(flags) == 0:
        raise NoFacesError(f"{feature}: no faces; group features are undefined")
    return sum(bool(x) for x in flags) / len(flags)


def _nonlinear(share: float) -> float:
    if share == 1.0:
        return 1.0
    return 1.0 - 2.0 ** (-share)


def f1_open_eyed(flags: Sequence[bool]) -> float:
    """1 when all eyes are open, else 1 - 2^(-share of open-eyed people)."""
    return _nonlinear(_share(flags, "f1"))


def f2_unoccluded(flags: Sequence[bool]) -> float:
    """1 when nobody is occluded, else 1 - 2^(-(share of unoccluded people))."""
    share_occluded = _share(flags, "f2")
    if share_occluded == 0.0:
        return 1.0
    return 1.0 - 2.0 ** (-(1.0 - share_occluded))


def f3_face_orientation(flags: Sequence[bool]) -> float:
    return _nonlinear(_share(flags, "f3"))


def f4_gaze(flags: Sequence[bool]) -> float:
    return _nonlinear(_share(flags, "f4"))


def f5_facial_blur(flags: Sequence[bool]) -> float:
    """1 when no face is blurred, else 1 - share of blurred faces."""
    share_blurred = _share(flags, "f5")
    if share_blurred == 0.0:
        return 1.0
    return 1.0 - share_blurred


def f6_smile(flags: Sequence[bool], branch: str = "paper") -> float:
    """Share of smiling people.

    The printed no-smile branch returns 1 when nobody smiles; pass
    branch="prose" for the plain proportion instead.
    """
    share_smiling = _share(flags, "f6")
    if branch == "paper" and share_smiling == 0.0:
        return 1.0
    return share_smiling


def f7_character_center(xs: Sequence[float], frame_w: float) -> float:
    """1 when the mean face-center x sits in the middle fifth of the frame."""
    if frame_w <= 0:
        raise ValueError(f"frame width must be positive, got {frame_w}")
    if len(xs) == 0:
        raise NoFacesError("f7: no faces; group features are undefined")
    for x in xs:
        if not 0.0 <= x <= frame_w:
            raise ValueError(f"face center x={x} outside frame [0,{frame_w}]")
    relative = (sum(xs) / len(xs)) / frame_w
    return 1.0 if 0.4 <= relative <= 0.6 else 0.0


@dataclass(frozen=True)
class GroupFeatures:
    """Feature slots f1-f7 for one photo."""

    f1: float
    f2: float
    f3: float
    f4: float
    f5: float
    f6: float
    f7: float
    n_faces: int

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.f1, self.f2, self.f3, self.f4, self.f5, self.f6, self.f7],
            dtype=np.float64,
        )


def extract_group(
    fs: fm.FaceSequence,
    thresholds: ThresholdConfig | None = None,
    smile_branch: str = "paper",
) -> GroupFeatures:
    """Evaluate per-face predicates and aggregate into f1-f7.

    Face-free sequences raise NoFacesError; callers report the image as
    unassessable rather than emitting a zero vector.
    """
    t = thresholds or ThresholdConfig()
    if len(fs) == 0:
        raise NoFacesError("no faces detected; image cannot be assessed")
    people = fs.faces
    e_flags = [fm.is_open_eyed(f) for f in people]
    o_flags = [fm.is_occluded(f, t) for f in people]
    h_flags = [fm.is_facing_camera(f, t) for f in people]
    g_flags = [fm.is_gazing(f, t) for f in people]
    b_flags = [fm.is_blurred(f, t) for f in people]
    m_flags = [fm.is_smiling(f, t) for f in people]
    centers = [f.box.center_x() for f in people]
    # clamping at ingestion keeps centers inside the frame
    return GroupFeatures(
        f1=f1_open_eyed(e_flags),
        f2=f2_unoccluded(o_flags),
        f3=f3_face_orientation(h_flags),
        f4=f4_gaze(g_flags),
        f5=f5_facial_blur(b_flags),
        f6=f6_smile(m_flags, branch=smile_branch),
        f7=f7_character_center(centers, float(fs.frame_w)),
        n_faces=len(people),
    )
