"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s``. Tolerances are pinned
here and nowhere else; synthetic protocols replace the unpublished photo
corpus, so every expected value below is computed by an independent oracle
or fixed analytically.
"""

import io
import json
import threading
import time
from itertools import product
from pathlib import Path

import numpy as np
import pytest
from PIL import Image
from scipy.optimize import linear_sum_assignment
from starlette.testclient import TestClient

from groupaes.cli import main
from groupaes.config import Config, DatasetConfig, GenericConfig, MlConfig, ThresholdConfig
from groupaes.dataset import RecordStore
from groupaes.extraction import extract_image
from groupaes.faces import (
    FaceInfo,
    FixtureProvider,
    GazeInfo,
    Rect,
    gaze_junction,
    is_gazing,
    is_open_eyed,
)
from groupaes.generic import extract_generic
from groupaes.generic.emd import N_BINS, emd, ground_distance
from groupaes.group_features import (
    f1_open_eyed,
    f2_unoccluded,
    f3_face_orientation,
    f4_gaze,
    f5_facial_blur,
    f6_smile,
    f7_character_center,
)
from groupaes.ml import (
    cross_validate_classifier,
    gini_importance,
    load_model,
    repeated_split_r2,
    rfe_select,
    save_model,
    train_model,
)
from groupaes.service import create_app
from groupaes.synthetic import gpf_training_table, write_corpus, write_delta_pairs
from groupaes.vector import FEATURE_NAMES

THRESHOLDS = ThresholdConfig()


def announce(criterion: str) -> None:
    print(f"ACCEPTANCE PASS: {criterion}")


# --------------------------------------------------------------------------
# C1: exhaustive formula oracle suite


def test_c1_formula_oracle_suite():
    started = time.perf_counter()

    def oracle_nonlinear(flags):
        p = sum(flags) / len(flags)
        return 1.0 if p == 1 else 1.0 - 2.0 ** (-p)

    def oracle_f2(flags):
        if sum(flags) == 0:
            return 1.0
        return 1.0 - 2.0 ** (-(1.0 - sum(flags) / len(flags)))

    def oracle_f5(flags):
        return 1.0 if sum(flags) == 0 else 1.0 - sum(flags) / len(flags)

    def oracle_f6(flags):
        return 1.0 if sum(flags) == 0 else sum(flags) / len(flags)

    pairs = [
        (f1_open_eyed, oracle_nonlinear),
        (f2_unoccluded, oracle_f2),
        (f3_face_orientation, oracle_nonlinear),
        (f4_gaze, oracle_nonlinear),
        (f5_facial_blur, oracle_f5),
        (f6_smile, oracle_f6),
    ]
    checked = 0
    for n in range(1, 5):
        for flags in product([0, 1], repeat=n):
            for impl, oracle in pairs:
                assert impl(list(flags)) == pytest.approx(oracle(flags), abs=1e-12)
                checked += 1
    width = 100.0
    grid = [0.0, 20.0, 39.9, 40.0, 50.0, 60.0, 60.1, 100.0]
    for n in range(1, 5):
        for xs in product(grid, repeat=n):
            mean_ratio = sum(xs) / len(xs) / width
            expected = 1.0 if 0.4 <= mean_ratio <= 0.6 else 0.0
            assert f7_character_center(list(xs), width) == expected
            checked += 1
    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"oracle suite took {elapsed:.2f}s"
    announce(f"C1 formula oracle suite ({checked} cases, {elapsed * 1e3:.0f} ms)")


# --------------------------------------------------------------------------
# C2: branch discontinuity


def test_c2_branch_discontinuity():
    for n in range(2, 11):
        for fn, full_house in (
            (f1_open_eyed, [1] * n),
            (f3_face_orientation, [1] * n),
            (f4_gaze, [1] * n),
        ):
            assert fn(full_house) == 1.0
            assert fn(full_house[:-1] + [0]) <= 0.5
        assert f2_unoccluded([0] * n) == 1.0
        assert f2_unoccluded([0] * (n - 1) + [1]) <= 0.5
    announce("C2 branch discontinuity (proportion 1 -> exactly 1; (N-1)/N -> <= 0.5)")


# --------------------------------------------------------------------------
# C3: gaze geometry


def _gaze_face(c1, c2, dl, dr, w, h):
    return FaceInfo(
        box=Rect(0.0, 0.0, w, h),
        left_eye=_eyes(open_eye=True),
        right_eye=_eyes(open_eye=True),
        gaze=GazeInfo(c1, c2, dl, dr),
        smile=80.0,
        yaw=0.0,
        occlusion=(0.0,) * 7,
        blur=10.0,
        gaze_range=None,
    )


def _eyes(open_eye: bool):
    from groupaes.faces import EyeStateConfidences

    values = [1.0] * 6
    values[0 if open_eye else 4] = 95.0
    return EyeStateConfidences.from_raw(values)


GAZE_FIXTURES = [
    # (C1, C2, Dl, Dr, w, h, expected junction) all hand-computed
    ((0, 0), (2, 0), (0, 1), (0, 1), 10, 10, (1.0, 10.0)),
    ((5, 5), (5, 5), (1, 0), (1, 0), 4, 8, (13.0, 5.0)),
    ((10, 10), (14, 10), (0.6, 0.8), (0.6, 0.8), 5, 5, (15.0, 14.0)),
    ((0, 0), (4, 0), (1, 0), (-1, 0), 3, 7, (2.0, 0.0)),
    ((1, 2), (3, 4), (0.5, 0.5), (1.5, 0.5), 2, 3, (5.0, 4.5)),
    ((-5, 0), (5, 0), (0, -1), (0, -1), 20, 10, (0.0, -20.0)),
    ((100, 50), (110, 50), (0.3, 0.4), (0.1, 0.2), 12, 9, (107.4, 53.6)),
    ((7, 7), (9, 9), (2, 0), (0, 2), 6, 6, (14.0, 14.0)),
    ((0.5, 0.5), (1.5, 0.5), (0, 0.1), (0, 0.3), 1, 2, (1.0, 0.9)),
    ((3, 3), (3, 5), (-1, 0), (-1, 0), 4, 2, (-1.0, 4.0)),
]


def test_c3_gaze_geometry():
    for c1, c2, dl, dr, w, h, expected in GAZE_FIXTURES:
        px, py = gaze_junction(_gaze_face(c1, c2, dl, dr, float(w), float(h)))
        assert px == pytest.approx(expected[0], abs=1e-9)
        assert py == pytest.approx(expected[1], abs=1e-9)

    # prerequisite gating: closed eyes force G=0 regardless of geometry
    rng = np.random.default_rng(99)
    gated = 0
    for _ in range(500):
        open_left = bool(rng.random() < 0.5)
        open_right = bool(rng.random() < 0.5)
        face = FaceInfo(
            box=Rect(0.0, 0.0, float(rng.uniform(5, 50)), float(rng.uniform(5, 50))),
            left_eye=_eyes(open_left),
            right_eye=_eyes(open_right),
            gaze=GazeInfo(
                (rng.uniform(0, 50), rng.uniform(0, 50)),
                (rng.uniform(0, 50), rng.uniform(0, 50)),
                (rng.uniform(-1, 1), rng.uniform(0.1, 1)),
                (rng.uniform(-1, 1), rng.uniform(0.1, 1)),
            ),
            smile=50.0,
            yaw=float(rng.uniform(-180, 180)),
            occlusion=tuple(rng.uniform(0, 1, size=7).tolist()),
            blur=10.0,
            gaze_range=None,
        )
        if not is_open_eyed(face):
            assert not is_gazing(face, THRESHOLDS)
            gated += 1
    assert gated > 100  # the sample actually exercised the gate
    announce(f"C3 gaze geometry (10 fixtures at 1e-9; gating held on {gated} random faces)")


# --------------------------------------------------------------------------
# C4: generic-feature analytic suite


def _png(array: np.ndarray) -> bytes:
    img = Image.fromarray(array.astype(np.uint8), mode="RGB")
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def test_c4_generic_analytic_suite():
    values = extract_generic(_png(np.full((128, 128, 3), 77))).values
    np.testing.assert_array_equal(values[6:18], np.zeros(12))    # wavelet f14-f25
    assert values[20] == 1.0                                     # f28 one region
    np.testing.assert_array_equal(values[41:44], np.zeros(3))    # low DOF f49-f51
    assert values[48:64].sum() == pytest.approx(1.0, abs=1e-9)   # color names
    for base in (64, 68, 72):                                    # glcm per channel
        contrast, _, homogeneity, energy = values[base : base + 4]
        assert contrast == 0.0
        assert homogeneity == pytest.approx(1.0)
        assert energy == pytest.approx(1.0)

    cost = ground_distance()
    rng = np.random.default_rng(14)
    for _ in range(20):
        c1 = rng.multinomial(40, np.full(N_BINS, 1.0 / N_BINS)).astype(float)
        c2 = rng.multinomial(40, np.full(N_BINS, 1.0 / N_BINS)).astype(float)
        units1 = np.repeat(np.arange(N_BINS), c1.astype(int))
        units2 = np.repeat(np.arange(N_BINS), c2.astype(int))
        matrix = cost[np.ix_(units1, units2)]
        rows, cols = linear_sum_assignment(matrix)
        oracle = matrix[rows, cols].sum() / len(units1)
        assert emd(c1, c2) == pytest.approx(oracle, abs=1e-6)
        assert emd(c2, c1) == pytest.approx(emd(c1, c2), abs=1e-6)
        assert emd(c1, c1) == pytest.approx(0.0, abs=1e-9)
    announce("C4 generic-feature analytic suite (constant-image slots; EMD vs oracle <= 1e-6)")


# --------------------------------------------------------------------------
# C5: ML protocol on synthetic data


def test_c5_ml_protocol():
    started = time.perf_counter()

    # two-blob classification: 200 rows, 90 features, 2 informative
    rng = np.random.default_rng(0)
    x = rng.normal(0, 1, size=(200, 90))
    y = np.array([0] * 100 + [1] * 100)
    for j in range(2):
        x[:, j] += np.where(y == 1, 2.5, -2.5)
    folds = cross_validate_classifier(
        x, y, MlConfig(seed=3, cv_folds=10, filter_folds=5), "filter", 5
    )
    mean_auc = float(np.mean([f["metrics"].auc for f in folds]))
    assert mean_auc >= 0.95

    # planted-feature test: informative feature in the top 3 Gini ranks
    hits = 0
    for s in range(100):
        run_rng = np.random.default_rng(1000 + s)
        data = run_rng.random((150, 90))
        j = s % 90
        labels = (data[:, j] > 0.5).astype(int)
        flip = run_rng.random(150) < 0.05
        labels[flip] = 1 - labels[flip]
        importance = gini_importance(data, labels, MlConfig(seed=s))
        if int(np.argsort(-importance).tolist().index(j)) < 3:
            hits += 1
    assert hits >= 95

    # regressor protocol: y = 3*x1 + noise, 100 random 80/20 splits
    reg_rng = np.random.default_rng(31)
    xr = reg_rng.random((200, 90))
    yr = 3.0 * xr[:, 0] + reg_rng.normal(0, 0.2, size=200)
    cfg = MlConfig(seed=31)
    mask = rfe_select(xr, yr, 5, "regress", cfg)
    assert mask[0], "informative feature dropped by RFE"
    protocol = repeated_split_r2(xr, yr, mask, cfg, splits=100)
    assert protocol["mean_r2"] >= 0.85

    elapsed = time.perf_counter() - started
    assert elapsed < 120.0, f"ML protocol took {elapsed:.0f}s"
    announce(
        "C5 ML protocol (mean AUC "
        f"{mean_auc:.3f}; planted top-3 {hits}/100; mean R2 "
        f"{protocol['mean_r2']:.3f}; {elapsed:.0f}s)"
    )


# --------------------------------------------------------------------------
# C6: delta reproduction in structure


def test_c6_delta_structure(tmp_path):
    table = gpf_training_table(seed=8, rows=400)
    y = np.array([s for s in table.scores])
    model = train_model(
        table.features, y, "regress", FEATURE_NAMES, MlConfig(seed=8), "rfe", 20
    )
    manifest = write_delta_pairs(tmp_path, seed=8)
    cfg = Config(generic=GenericConfig(kmeans_restarts=5))
    provider = FixtureProvider()
    lines = []
    for group in manifest["groups"]:
        standard = extract_image(group["standard"], provider, cfg)
        assert standard.ok, standard.error
        s_std = float(model.predict(standard.vector)[0])
        deltas = {}
        for name, path in group["others"].items():
            result = extract_image(path, provider, cfg)
            assert result.ok, result.error
            deltas[name] = s_std - float(model.predict(result.vector)[0])
        assert all(v > 0 for v in deltas.values()), (group["name"], deltas)
        assert deltas["looking_away"] > deltas["off_center"], (group["name"], deltas)
        lines.append(f"{group['name']}: " + ", ".join(f"{k}={v:.3f}" for k, v in deltas.items()))
    announce("C6 delta structure (" + "; ".join(lines) + ")")


# --------------------------------------------------------------------------
# C7: end-to-end determinism


def test_c7_end_to_end_determinism(tmp_path):
    corpus = tmp_path / "corpus"
    write_corpus(corpus, seed=4)
    first = tmp_path / "first.csv"
    second = tmp_path / "second.csv"
    assert main(["extract", str(corpus), "--out", str(first)]) == 0
    assert main(["extract", str(corpus), "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()

    table = gpf_training_table(seed=9, rows=120)
    y = np.array([s for s in table.scores])
    model = train_model(table.features, y, "regress", FEATURE_NAMES, MlConfig(seed=9), "none")
    path = tmp_path / "model.bin"
    save_model(model, path)
    loaded = load_model(path)
    rows = np.random.default_rng(10).normal(0, 3, size=(100, 90))
    np.testing.assert_array_equal(model.predict(rows), loaded.predict(rows))
    announce("C7 end-to-end determinism (byte-identical CSVs; identical round-trip predictions)")


# --------------------------------------------------------------------------
# C8: annotation service under concurrency


def test_c8_annotation_service(tmp_path):
    store = RecordStore(tmp_path / "records.jsonl", DatasetConfig(min_raters=5, max_raters=20))
    app = create_app(store, images_dir=tmp_path / "images", rng_seed=0)
    n_raters, n_photos = 50, 20
    with TestClient(app) as client:
        photo_ids = []
        for i in range(n_photos):
            img = Image.new("RGB", (24, 24), (i * 12 % 255, 30, 60))
            buf = io.BytesIO()
            img.save(buf, format="PNG")
            response = client.post(
                "/api/upload",
                files={"file": (f"p{i}.png", buf.getvalue(), "image/png")},
                data={"source": "self"},
            )
            photo_ids.append(response.json()["photo_id"])

        failures: list[str] = []

        def rate_all(rater: str) -> None:
            for pid in photo_ids:
                ok = client.post(
                    "/api/rating", json={"photo_id": pid, "rater": rater, "score": 6}
                )
                if ok.status_code != 200:
                    failures.append(f"{rater}/{pid}: {ok.status_code}")
                dup = client.post(
                    "/api/rating", json={"photo_id": pid, "rater": rater, "score": 9}
                )
                if dup.status_code != 409:
                    failures.append(f"dup {rater}/{pid}: {dup.status_code}")

        threads = [
            threading.Thread(target=rate_all, args=(f"rater{i:02d}",))
            for i in range(n_raters)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert failures == []

        stats = client.get("/api/stats").json()
        assert stats["ratings"] == n_raters * n_photos
        assert sum(stats["histogram"]) == pytest.approx(1.0, abs=1e-9)

        # label appears exactly when the 5th rating lands
        fresh = Image.new("RGB", (24, 24), (250, 250, 250))
        buf = io.BytesIO()
        fresh.save(buf, format="PNG")
        pid = client.post(
            "/api/upload",
            files={"file": ("fresh.png", buf.getvalue(), "image/png")},
            data={"source": "self"},
        ).json()["photo_id"]
        for i in range(4):
            body = client.post(
                "/api/rating", json={"photo_id": pid, "rater": f"s{i}", "score": 7}
            ).json()
            assert body["labeled"] is False
        body = client.post(
            "/api/rating", json={"photo_id": pid, "rater": "s4", "score": 7}
        ).json()
        assert body["labeled"] is True

    # durability: nothing lost across a reload
    reopened = RecordStore(store.path, store.config)
    total = sum(p.rating_count() for p in reopened.photos())
    assert total == n_raters * n_photos + 5
    announce(
        f"C8 annotation service ({n_raters * n_photos} concurrent ratings kept, "
        "duplicates rejected, histogram sums to 1, label at 5th rating)"
    )
