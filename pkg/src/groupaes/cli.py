"""Command-line pipeline: extract features, train/evaluate models, score
and compare photos, rank feature importance, run the annotation service.

Exit codes: 0 ok, 2 validation failure, 3 I/O failure, 4 model-format
failure. ``--format json-lines`` mirrors every human-readable line as one
JSON object with the same fields.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import ml
from .config import Config, ConfigError, load_config
from .dataset import DatasetError, RecordStore, binarize, label_to_int
from .extraction import extract_directory, extract_image
from .faces import FaceError, FixtureProvider, HttpProvider
from .group_features import NoFacesError
from .generic.preprocess import ImageDecodeError, ImageSizeError
from .vector import FEATURE_NAMES, FeatureTable, read_feature_csv, slot_label, write_feature_csv

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_MODEL_FORMAT = 4


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_VALIDATION) -> None:
        super().__init__(message)
        self.code = code


class Reporter:
    """Prints either human text or one JSON object per line."""

    def __init__(self, mode: str = "human", stream=None) -> None:
        self.mode = mode
        self.stream = stream or sys.stdout

    def emit(self, event: str, text: str, **fields) -> None:
        if self.mode == "json-lines":
            print(json.dumps({"event": event, **fields}, sort_keys=True), file=self.stream)
        else:
            print(text, file=self.stream)


def _load_config(args) -> Config:
    cfg = load_config(args.config) if args.config else Config()
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "folds", None) is not None:
        overrides["cv_folds"] = args.folds
    if overrides:
        cfg = dataclasses.replace(cfg, ml=dataclasses.replace(cfg.ml, **overrides))
    return cfg


def _provider(args):
    if args.provider == "fixture":
        return FixtureProvider()
    if args.provider == "http":
        if not args.http_url:
            raise CliError("--http-url is required with --provider http")
        return HttpProvider(args.http_url)
    raise CliError(f"unknown provider {args.provider!r}")


def _labels_for_classification(table: FeatureTable, boundary: float) -> np.ndarray:
    labels = []
    for i in range(len(table)):
        if table.labels[i] is not None:
            labels.append(int(table.labels[i]))
        elif table.scores[i] is not None:
            labels.append(label_to_int(binarize(table.scores[i], boundary)))
        else:
            raise CliError(f"row {table.ids[i]!r} has neither label nor score")
    return np.asarray(labels, dtype=np.int64)


def _scores_for_regression(table: FeatureTable) -> np.ndarray:
    scores = []
    for i in range(len(table)):
        if table.scores[i] is None:
            raise CliError(f"row {table.ids[i]!r} has no score")
        scores.append(float(table.scores[i]))
    return np.asarray(scores, dtype=np.float64)


# -- commands ----------------------------------------------------------------


def cmd_extract(args, reporter: Reporter) -> int:
    cfg = _load_config(args)
    provider = _provider(args)
    table, failures = extract_directory(args.image_dir, provider, cfg, jobs=args.jobs)
    write_feature_csv(args.out, table)
    report_path = Path(args.out).with_name(Path(args.out).name + ".errors.json")
    if failures:
        report = [{"image": f.image.name, "error": f.error} for f in failures]
        report_path.write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")
        for f in failures:
            reporter.emit(
                "extract-error",
                f"FAILED {f.image.name}: {f.error}",
                image=f.image.name,
                error=f.error,
            )
    elif report_path.exists():
        report_path.unlink()
    reporter.emit(
        "extract-summary",
        f"wrote {len(table)} rows to {args.out} ({len(failures)} failures)",
        rows=len(table),
        failures=len(failures),
        out=str(args.out),
    )
    return EXIT_VALIDATION if failures else EXIT_OK


def cmd_train(args, reporter: Reporter) -> int:
    if args.k < 1 or args.k > len(FEATURE_NAMES):
        raise CliError(f"--k must be in [1,{len(FEATURE_NAMES)}], got {args.k}")
    cfg = _load_config(args)
    table = read_feature_csv(args.features)
    x = table.features
    if args.task == "classify":
        y = _labels_for_classification(table, cfg.dataset.good_boundary)
        folds = ml.cross_validate_classifier(x, y, cfg.ml, args.select, args.k)
        aucs = [f["metrics"].auc for f in folds]
        for f in folds:
            m = f["metrics"]
            reporter.emit(
                "fold",
                f"fold {f['fold']}: auc={m.auc:.4f} acc={m.accuracy:.4f} "
                f"prec={m.precision:.4f} rec={m.recall:.4f} f1={m.f1:.4f}",
                fold=f["fold"],
                **m.to_jsonable(),
            )
        reporter.emit(
            "cv-summary",
            f"mean 10-fold AUC {np.mean(aucs):.4f} over {len(folds)} folds",
            mean_auc=float(np.mean(aucs)),
            folds=len(folds),
        )
        model = ml.train_model(x, y, "classify", FEATURE_NAMES, cfg.ml, args.select, args.k)
    else:
        y = _scores_for_regression(table)
        folds = ml.cross_validate_regressor(x, y, cfg.ml, args.select, args.k)
        for f in folds:
            reporter.emit(
                "fold", f"fold {f['fold']}: r2={f['r2']:.4f}", fold=f["fold"], r2=f["r2"]
            )
        reporter.emit(
            "cv-summary",
            f"mean R2 {np.mean([f['r2'] for f in folds]):.4f} over {len(folds)} folds",
            mean_r2=float(np.mean([f["r2"] for f in folds])),
            folds=len(folds),
        )
        model = ml.train_model(x, y, "regress", FEATURE_NAMES, cfg.ml, args.select, args.k)
    ml.save_model(model, args.out)
    reporter.emit(
        "model-saved",
        f"saved {model.kind} with {int(model.mask.sum())} features to {args.out}",
        kind=model.kind,
        selected=int(model.mask.sum()),
        out=str(args.out),
    )
    return EXIT_OK


def _score_images(model, image_paths, provider, cfg) -> tuple[list[tuple[str, float]], list[str]]:
    scored: list[tuple[str, float]] = []
    errors: list[str] = []
    for path in image_paths:
        result = extract_image(path, provider, cfg)
        if not result.ok:
            errors.append(f"{Path(path).name}: {result.error}")
            continue
        if model.kind == ml.KIND_CLASSIFIER:
            value = float(model.decision(result.vector)[0])
        else:
            value = float(model.predict(result.vector)[0])
        scored.append((Path(path).name, value))
    return scored, errors


def cmd_score(args, reporter: Reporter) -> int:
    model = ml.load_model(args.model)
    cfg = _load_config(args)
    provider = _provider(args)
    scored, errors = _score_images(model, args.images, provider, cfg)
    for name, value in scored:
        if model.kind == ml.KIND_CLASSIFIER:
            verdict = "good" if value >= 0 else "bad"
            reporter.emit(
                "score",
                f"{name}: {verdict} (decision {value:.6f})",
                image=name,
                label=verdict,
                decision=value,
            )
        else:
            reporter.emit("score", f"{name}: {value:.6f}", image=name, score=value)
    for message in errors:
        reporter.emit("score-error", f"FAILED {message}", error=message)
    return EXIT_VALIDATION if errors else EXIT_OK


def cmd_evaluate(args, reporter: Reporter) -> int:
    model = ml.load_model(args.model)
    cfg = _load_config(args)
    table = read_feature_csv(args.features)
    x = table.features
    if args.splits is not None:
        if model.kind != ml.KIND_REGRESSOR:
            raise CliError("--splits applies to the regressor protocol only")
        y = _scores_for_regression(table)
        result = ml.repeated_split_r2(x, y, model.mask, model.config, splits=args.splits)
        report = ml.EvalReport(mean_r2=result["mean_r2"], max_r2=result["max_r2"])
        reporter.emit(
            "evaluate",
            f"{args.splits} splits: mean R2 {result['mean_r2']:.4f}, "
            f"max R2 {result['max_r2']:.4f}",
            splits=args.splits,
            **report.to_jsonable(),
        )
        return EXIT_OK
    if model.kind == ml.KIND_CLASSIFIER:
        y = _labels_for_classification(table, cfg.dataset.good_boundary)
        metrics = ml.classification_metrics(model.decision(x), y)
        report = ml.EvalReport(classification=metrics)
        reporter.emit(
            "evaluate",
            f"auc={metrics.auc:.4f} acc={metrics.accuracy:.4f} "
            f"prec={metrics.precision:.4f} rec={metrics.recall:.4f} f1={metrics.f1:.4f}",
            **report.to_jsonable(),
        )
    else:
        y = _scores_for_regression(table)
        report = ml.EvalReport(r2=ml.r_squared(model.predict(x), y))
        reporter.emit("evaluate", f"r2={report.r2:.4f}", **report.to_jsonable())
    return EXIT_OK


def cmd_compare(args, reporter: Reporter) -> int:
    model = ml.load_model(args.model)
    cfg = _load_config(args)
    provider = _provider(args)
    scored, errors = _score_images(model, [args.standard, *args.others], provider, cfg)
    if errors:
        for message in errors:
            reporter.emit("score-error", f"FAILED {message}", error=message)
        raise CliError("comparison aborted: some images could not be scored")
    standard, others = scored[0], scored[1:]
    reporter.emit(
        "standard",
        f"standard {standard[0]}: {standard[1]:.6f}",
        image=standard[0],
        score=standard[1],
    )
    for row in ml.delta_table(standard, others):
        reporter.emit(
            "delta",
            f"{row['other']}: score {row['score']:.6f} delta {row['delta']:.6f}",
            **row,
        )
    return EXIT_OK


def cmd_importance(args, reporter: Reporter) -> int:
    cfg = _load_config(args)
    table = read_feature_csv(args.features)
    y = _labels_for_classification(table, cfg.dataset.good_boundary)
    importance = ml.gini_importance(table.features, y, cfg.ml)
    ml.EvalReport(importance=importance)  # normalization invariant
    order = np.argsort(-importance, kind="stable")
    top = order if args.top is None else order[: args.top]
    for rank, j in enumerate(top, start=1):
        name = FEATURE_NAMES[j]
        reporter.emit(
            "importance",
            f"{rank:2d}. {name} ({slot_label(name)}) {importance[j]:.6f}",
            rank=rank,
            feature=name,
            label=slot_label(name),
            importance=float(importance[j]),
        )
    reporter.emit(
        "importance-total",
        f"total {importance.sum():.6f} over {len(importance)} features",
        total=float(importance.sum()),
    )
    return EXIT_OK


def cmd_serve(args, reporter: Reporter) -> int:
    import uvicorn

    from .service import create_app, register_image_dir

    cfg = _load_config(args)
    dataset_cfg = dataclasses.replace(
        cfg.dataset, min_raters=args.min_raters, max_raters=args.max_raters
    )
    store = RecordStore(args.store, dataset_cfg)
    if args.register:
        added = register_image_dir(store, args.register)
        reporter.emit("register", f"registered {added} images", added=added)
    app = create_app(store, images_dir=args.images_dir, static_dir=args.static)
    host, _, port = args.bind.partition(":")
    reporter.emit("serve", f"listening on {args.bind}", bind=args.bind)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000), log_level="warning")
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupaes", description="Group-photograph aesthetic assessment pipeline"
    )
    parser.add_argument("--format", choices=("human", "json-lines"), default="human")
    parser.add_argument("--config", help="TOML config for thresholds and seeds")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract f1-f90 for a directory of images")
    p.add_argument("image_dir")
    p.add_argument("--out", required=True)
    p.add_argument("--provider", choices=("fixture", "http"), default="fixture")
    p.add_argument("--http-url", help="base URL of the face-analysis endpoint")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="train the classifier or regressor")
    p.add_argument("--task", choices=("classify", "regress"), required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--select", choices=("none", "filter", "rfe"), default="none")
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--folds", type=int)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("score", help="score images with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("images", nargs="+")
    p.add_argument("--provider", choices=("fixture", "http"), default="fixture")
    p.add_argument("--http-url")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("evaluate", help="evaluate a model on a feature CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--splits", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="delta between a standard photo and variants")
    p.add_argument("--model", required=True)
    p.add_argument("--standard", required=True)
    p.add_argument("--others", nargs="+", required=True)
    p.add_argument("--provider", choices=("fixture", "http"), default="fixture")
    p.add_argument("--http-url")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("importance", help="rank features by Gini importance")
    p.add_argument("--features", required=True)
    p.add_argument("--top", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_importance)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--store", required=True, help="records file (JSON lines)")
    p.add_argument("--images-dir", required=True, help="directory for uploads")
    p.add_argument("--register", help="register existing images from a directory")
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.add_argument("--static", help="static assets directory for the web UI")
    p.add_argument("--min-raters", type=int, default=5)
    p.add_argument("--max-raters", type=int, default=20)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    reporter = Reporter(args.format)
    try:
        return args.func(args, reporter)
    except ml.ModelFormatError as exc:
        reporter.emit("error", f"model format error: {exc}", error=str(exc), code=EXIT_MODEL_FORMAT)
        return EXIT_MODEL_FORMAT
    except CliError as exc:
        reporter.emit("error", str(exc), error=str(exc), code=exc.code)
        return exc.code
    except (FileNotFoundError, NotADirectoryError, IsADirectoryError, PermissionError) as exc:
        reporter.emit("error", f"I/O error: {exc}", error=str(exc), code=EXIT_IO)
        return EXIT_IO
    except (
        ConfigError,
        DatasetError,
        FaceError,
        NoFacesError,
        ImageDecodeError,
        ImageSizeError,
        ml.MetricsError,
        ml.SelectionError,
        ml.SplitError,
        ml.TrainingError,
        ValueError,
    ) as exc:
        reporter.emit("error", str(exc), error=str(exc), code=EXIT_VALIDATION)
        return EXIT_VALIDATION
    except OSError as exc:
        reporter.emit("error", f"I/O error: {exc}", error=str(exc), code=EXIT_IO)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
