import dataclasses
from pathlib import Path

import pytest

from scholargraph import fixtures
from scholargraph.graph import GraphStore
from scholargraph.ingest import IngestConfig, IngestReport, ingest_corpus
from scholargraph.taxonomy import (
    Taxonomy,
    load_taxonomy,
    parse_taxonomy_file,
    taxonomy_from_snapshot,
)


@dataclasses.dataclass
class Pipeline:
    store: GraphStore
    report: IngestReport
    snapshot_dir: Path
    taxonomy: Taxonomy
    taxonomy_records: list
    config: IngestConfig

    @property
    def snapshot(self):
        return self.store.current()


@pytest.fixture(scope="session")
def pipeline(tmp_path_factory) -> Pipeline:
    """Fixture corpus ingested once for the whole session."""
    snapshot_dir = tmp_path_factory.mktemp("snapshot")
    store = GraphStore()
    cfg = IngestConfig()
    report = ingest_corpus(
        fixtures.TAXONOMY,
        fixtures.UNITS,
        fixtures.RESEARCHERS,
        fixtures.PUBLICATIONS,
        cfg=cfg,
        snapshot_dir=snapshot_dir,
        store=store,
    )
    records = parse_taxonomy_file(str(fixtures.TAXONOMY))
    return Pipeline(
        store=store,
        report=report,
        snapshot_dir=snapshot_dir,
        taxonomy=taxonomy_from_snapshot(store.current()),
        taxonomy_records=records,
        config=cfg,
    )


@pytest.fixture
def diamond() -> Taxonomy:
    """The 4-node diamond: c below a and b, both below root r."""
    return load_taxonomy(
        [
            ("r", "Root", "", []),
            ("a", "Left", "", ["r"]),
            ("b", "Right", "", ["r"]),
            ("c", "Leaf", "", ["a", "b"]),
        ]
    )
