#!/usr/bin/env python3
"""Generate a synthetic corpus in the ingest file formats.

Example:
    python scripts/generate_corpus.py --out /tmp/corpus --publications 5000
"""

import argparse

from scholargraph.synthetic import generate_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True)
    parser.add_argument("--concepts", type=int, default=2000)
    parser.add_argument("--units", type=int, default=20)
    parser.add_argument("--researchers", type=int, default=500)
    parser.add_argument("--publications", type=int, default=5000)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    paths = generate_corpus(
        args.out,
        concepts=args.concepts,
        units=args.units,
        researchers=args.researchers,
        publications=args.publications,
        seed=args.seed,
    )
    for name, path in paths.items():
        print(f"{name}: {path}")


if __name__ == "__main__":
    main()
