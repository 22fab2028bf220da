#!/usr/bin/env python3
"""Generate the synthetic fixture corpora: a small extraction corpus and the
standard-vs-variant delta pairs. Everything is seeded, so regenerating
produces byte-identical files.

Usage: python scripts/make_fixtures.py [--out fixtures] [--seed 11]
"""

import argparse
from pathlib import Path

from groupaes.synthetic import write_corpus, write_delta_pairs


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("fixtures"))
    parser.add_argument("--seed", type=int, default=11)
    args = parser.parse_args()

    corpus = args.out / "corpus"
    pairs = args.out / "delta_pairs"
    written = write_corpus(corpus, seed=args.seed)
    manifest = write_delta_pairs(pairs, seed=args.seed)
    print(f"corpus: {len(written)} images in {corpus}")
    print(f"delta pairs: {len(manifest['groups'])} groups in {pairs}")


if __name__ == "__main__":
    main()
