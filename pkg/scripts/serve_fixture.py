#!/usr/bin/env python3
"""Ingest the bundled fixture corpus and serve the API on localhost.

Example:
    python scripts/serve_fixture.py --port 8000 --cors-origin http://localhost:5173
"""

import argparse
import tempfile

from scholargraph import fixtures
from scholargraph.graph import GraphStore
from scholargraph.ingest import ingest_corpus
from scholargraph.server import ServerConfig, serve


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--cors-origin", default="*")
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as snapshot_dir:
        store = GraphStore()
        report = ingest_corpus(
            fixtures.TAXONOMY,
            fixtures.UNITS,
            fixtures.RESEARCHERS,
            fixtures.PUBLICATIONS,
            snapshot_dir=snapshot_dir,
            store=store,
        )
        print(f"fixture snapshot v{report.snapshot_version}: "
              f"{report.node_counts['Publication']} publications, "
              f"{report.tag_count} tags")
        serve(
            ServerConfig(
                host=args.host,
                port=args.port,
                snapshot_dir=snapshot_dir,
                cors_origin=args.cors_origin,
            ),
            store=store,
        )


if __name__ == "__main__":
    main()
