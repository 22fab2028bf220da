#!/usr/bin/env python3
"""Standard-vs-variant discrimination experiment.

Trains the regressor on a synthetic score table driven by the seven group
features, then scores fixture groups where each group shares identical
pixels and differs only in face metadata (everyone looking away, covered
mouths, or people pushed off-center). Prints the per-group score
differences delta = s(standard) - s(variant).

Usage: python scripts/run_delta_experiment.py [--seed 8] [--rows 400]
"""

import argparse
import tempfile
from pathlib import Path

import numpy as np

from groupaes.config import Config, GenericConfig, MlConfig
from groupaes.extraction import extract_image
from groupaes.faces import FixtureProvider
from groupaes.ml import r_squared, train_model
from groupaes.synthetic import gpf_training_table, write_delta_pairs
from groupaes.vector import FEATURE_NAMES


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=8)
    parser.add_argument("--rows", type=int, default=400)
    parser.add_argument("--fixtures", type=Path, help="reuse an existing delta_pairs dir")
    args = parser.parse_args()

    table = gpf_training_table(seed=args.seed, rows=args.rows)
    y = np.array([s for s in table.scores])
    model = train_model(
        table.features, y, "regress", FEATURE_NAMES, MlConfig(seed=args.seed), "rfe", 20
    )
    print(f"trained rf-regressor on {args.rows} synthetic rows, "
          f"{int(model.mask.sum())} features selected, "
          f"train R2 {r_squared(model.predict(table.features), y):.3f}")

    if args.fixtures:
        manifest_dir = args.fixtures
        import json

        manifest = json.loads((manifest_dir / "delta_manifest.json").read_text())
    else:
        manifest_dir = Path(tempfile.mkdtemp(prefix="delta_pairs_"))
        manifest = write_delta_pairs(manifest_dir, seed=args.seed)
        print(f"fixtures written to {manifest_dir}")

    provider = FixtureProvider()
    cfg = Config(generic=GenericConfig(kmeans_restarts=5))
    for group in manifest["groups"]:
        standard = extract_image(group["standard"], provider, cfg)
        s_std = float(model.predict(standard.vector)[0])
        print(f"{group['name']}  standard={s_std:.3f}")
        for name, path in group["others"].items():
            result = extract_image(path, provider, cfg)
            score = float(model.predict(result.vector)[0])
            print(f"    {name:<14} score={score:.3f}  delta={s_std - score:+.3f}")


if __name__ == "__main__":
    main()
