#!/usr/bin/env python3
"""Capacity experiment: ingest a synthetic corpus and time API requests.

Targets: end-to-end ingest < 2 minutes, /search and /trends < 200 ms per
request. Prints one line per measurement.
"""

import argparse
import statistics
import tempfile
import time

from fastapi.testclient import TestClient

from scholargraph.graph import GraphStore
from scholargraph.ingest import ingest_corpus
from scholargraph.server import ServerConfig, create_app
from scholargraph.synthetic import generate_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--concepts", type=int, default=2000)
    parser.add_argument("--researchers", type=int, default=500)
    parser.add_argument("--publications", type=int, default=5000)
    parser.add_argument("--requests", type=int, default=10)
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as workdir:
        start = time.perf_counter()
        paths = generate_corpus(
            workdir,
            concepts=args.concepts,
            researchers=args.researchers,
            publications=args.publications,
        )
        print(f"generate: {time.perf_counter() - start:.2f}s")

        store = GraphStore()
        start = time.perf_counter()
        report = ingest_corpus(
            paths["taxonomy"],
            paths["units"],
            paths["researchers"],
            paths["publications"],
            snapshot_dir=f"{workdir}/snapshot",
            store=store,
        )
        elapsed = time.perf_counter() - start
        print(f"ingest: {elapsed:.2f}s ({report.tag_count} tags) "
              f"{'OK' if elapsed < 120 else 'OVER BUDGET'}")

        client = TestClient(create_app(store, ServerConfig()))
        client.get("/health")
        for path in ("/search?q=kw00123a kw01999b", "/trends?level=1"):
            samples = []
            for _ in range(args.requests):
                t = time.perf_counter()
                assert client.get(path).status_code == 200
                samples.append(time.perf_counter() - t)
            print(
                f"{path}: max {max(samples) * 1000:.0f}ms "
                f"median {statistics.median(samples) * 1000:.0f}ms "
                f"{'OK' if max(samples) < 0.2 else 'OVER BUDGET'}"
            )


if __name__ == "__main__":
    main()
