#!/usr/bin/env python3
"""Record fixture-corpus API responses for the frontend test suite.

Writes frontend/tests/fixtures/api.json: every entity page, relation
panel, search and trend query the UI tests replay against a fetch mock.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from scholargraph import fixtures
from scholargraph.graph import GraphStore, NodeKind
from scholargraph.ingest import ingest_corpus
from scholargraph.server import ServerConfig, create_app


def main() -> None:
    store = GraphStore()
    ingest_corpus(
        fixtures.TAXONOMY,
        fixtures.UNITS,
        fixtures.RESEARCHERS,
        fixtures.PUBLICATIONS,
        store=store,
    )
    client = TestClient(create_app(store, ServerConfig()))
    snap = store.current()

    paths = [
        "/health",
        "/overview",
        "/fos",
        "/trends?level=0",
        "/trends?level=1",
        "/trends?level=2",
        "/trends?level=3",
        "/trends?level=1&from=2018&to=2024",
        "/trends?level=2&from=2016&to=2023",
        "/search?q=knowledge%20graph",
        "/search?q=deep%20learning",
        "/search?q=zzznothing",
        "/search?q=",
    ]
    for node in snap.nodes_of_kind(NodeKind.FIELD_OF_STUDY):
        paths += [f"/fos/{node.id}", f"/fos/{node.id}/related?k=5"]
    for node in snap.nodes_of_kind(NodeKind.RESEARCHER):
        paths += [f"/researchers/{node.id}", f"/researchers/{node.id}/similar?k=5"]
    for node in snap.nodes_of_kind(NodeKind.ORG_UNIT):
        paths += [f"/units/{node.id}", f"/units/{node.id}/related?k=5"]
    for node in snap.nodes_of_kind(NodeKind.PUBLICATION):
        paths.append(f"/publications/{node.id}")

    recorded = {}
    for path in paths:
        response = client.get(path)
        assert response.status_code == 200, (path, response.status_code)
        recorded[path] = response.json()

    payload = {
        "responses": recorded,
        "entities": {
            "fos": [n.id for n in snap.nodes_of_kind(NodeKind.FIELD_OF_STUDY)],
            "researchers": [n.id for n in snap.nodes_of_kind(NodeKind.RESEARCHER)],
            "units": [n.id for n in snap.nodes_of_kind(NodeKind.ORG_UNIT)],
            "publications": [n.id for n in snap.nodes_of_kind(NodeKind.PUBLICATION)],
        },
    }
    out = Path(__file__).parent.parent / "frontend" / "tests" / "fixtures" / "api.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(payload, indent=1, sort_keys=True), encoding="utf-8")
    print(f"recorded {len(recorded)} responses -> {out}")


if __name__ == "__main__":
    main()
