import json
import random
import threading
from pathlib import Path

import pytest

from scholargraph import fixtures
from scholargraph.errors import (
    CorruptSnapshotError,
    FileUnreadableError,
    SnapshotMissingError,
    TaxonomyInvalidError,
)
from scholargraph.graph import EdgeKind, GraphStore, NodeKind
from scholargraph.ingest import (
    IngestConfig,
    classify_dry_run,
    export_snapshot,
    ingest_corpus,
    load_snapshot,
    save_snapshot,
)

COMPARABLE = ("nodes.ndjson", "edges.ndjson", "profiles.ndjson", "index.bin")


def write(path: Path, lines: list[str]) -> Path:
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path


def entity_files(tmp_path, units=(), researchers=(), publications=()):
    return (
        write(tmp_path / "units.ndjson", [json.dumps(u) for u in units]),
        write(tmp_path / "researchers.ndjson", [json.dumps(r) for r in researchers]),
        write(tmp_path / "publications.ndjson", [json.dumps(p) for p in publications]),
    )


def minimal_taxonomy(tmp_path) -> Path:
    return write(
        tmp_path / "taxonomy.tsv",
        ["f-root\tScience\tall of it\t", "f-ml\tMachine Learning\tmodels from data\tf-root"],
    )


def test_fixture_report_counts(pipeline):
    counts = pipeline.report.as_dict()["counts"]
    assert counts["nodes"]["OrgUnit"] == 3
    assert counts["nodes"]["Researcher"] == 10
    assert counts["nodes"]["Publication"] == 30
    assert counts["nodes"]["FieldOfStudy"] == 41
    assert counts["nodes"]["Institution"] == 1
    assert pipeline.report.rejected == []
    assert pipeline.report.tag_count == counts["edges"]["ABOUT"] > 0


def test_report_counts_match_snapshot(pipeline):
    snap = pipeline.snapshot
    for kind in NodeKind:
        assert pipeline.report.node_counts[kind.value] == len(snap.nodes_of_kind(kind))
    for kind in EdgeKind:
        assert pipeline.report.edge_counts[kind.value] == sum(
            1 for e in snap.edges if e.kind == kind
        )


def test_empty_entity_files(tmp_path):
    taxonomy = minimal_taxonomy(tmp_path)
    units, researchers, publications = entity_files(tmp_path)
    report = ingest_corpus(taxonomy, units, researchers, publications)
    assert report.rejected == []
    assert report.node_counts == {
        "Institution": 1,
        "OrgUnit": 0,
        "Researcher": 0,
        "Publication": 0,
        "FieldOfStudy": 2,
    }


def test_invalid_taxonomy_is_fatal(tmp_path):
    taxonomy = write(tmp_path / "taxonomy.tsv", ["a\tA\t\tb", "b\tB\t\ta"])
    units, researchers, publications = entity_files(tmp_path)
    with pytest.raises(TaxonomyInvalidError):
        ingest_corpus(taxonomy, units, researchers, publications)


def test_missing_file_is_fatal(tmp_path):
    taxonomy = minimal_taxonomy(tmp_path)
    units, researchers, publications = entity_files(tmp_path)
    with pytest.raises(FileUnreadableError):
        ingest_corpus(taxonomy, tmp_path / "nope.ndjson", researchers, publications)


def test_dangling_author_rejected_rest_kept(tmp_path):
    taxonomy = minimal_taxonomy(tmp_path)
    units, researchers, publications = entity_files(
        tmp_path,
        units=[{"id": "u1", "name": "U", "unit_type": "group", "parent_id": ""}],
        researchers=[{"id": "r1", "name": "A", "unit_ids": ["u1"]}],
        publications=[
            {"id": "p1", "title": "machine learning models", "abstract": "", "year": 2020, "citations": 1, "author_ids": ["r1"]},
            {"id": "p2", "title": "ghost authored", "abstract": "", "year": 2021, "citations": 0, "author_ids": ["r9"]},
        ],
    )
    report = ingest_corpus(taxonomy, units, researchers, publications)
    assert report.node_counts["Publication"] == 1
    assert len(report.rejected) == 1
    assert report.rejected[0].record_id == "p2"
    assert "DanglingReference" in report.rejected[0].reason


def test_unit_cycle_rejected(tmp_path):
    taxonomy = minimal_taxonomy(tmp_path)
    units, researchers, publications = entity_files(
        tmp_path,
        units=[
            {"id": "u1", "name": "One", "unit_type": "g", "parent_id": "u2"},
            {"id": "u2", "name": "Two", "unit_type": "g", "parent_id": "u1"},
            {"id": "u3", "name": "Three", "unit_type": "g", "parent_id": ""},
        ],
    )
    report = ingest_corpus(taxonomy, units, researchers, publications)
    assert report.node_counts["OrgUnit"] == 1
    reasons = {r.record_id: r.reason for r in report.rejected}
    assert "CyclicOrgStructure" in reasons["u1"]
    assert "CyclicOrgStructure" in reasons["u2"]


def test_malformed_json_line_rejected(tmp_path):
    taxonomy = minimal_taxonomy(tmp_path)
    units, researchers, publications = entity_files(tmp_path)
    write(researchers, ['{"id": "r1", "name": "A", "unit_ids": []}', "{not json"])
    report = ingest_corpus(taxonomy, units, researchers, publications)
    assert report.node_counts["Researcher"] == 1
    assert any("InvalidJson" in r.reason for r in report.rejected)


def test_duplicate_ids_in_file_all_rejected(tmp_path):
    taxonomy = minimal_taxonomy(tmp_path)
    units, researchers, publications = entity_files(
        tmp_path,
        researchers=[
            {"id": "r1", "name": "A", "unit_ids": []},
            {"id": "r1", "name": "B", "unit_ids": []},
            {"id": "r2", "name": "C", "unit_ids": []},
        ],
    )
    report = ingest_corpus(taxonomy, units, researchers, publications)
    assert report.node_counts["Researcher"] == 1
    assert sum(1 for r in report.rejected if "DuplicateId" in r.reason) == 2


def test_empty_title_rejected(tmp_path):
    taxonomy = minimal_taxonomy(tmp_path)
    units, researchers, publications = entity_files(
        tmp_path,
        publications=[{"id": "p1", "title": "", "abstract": "x", "year": 2020, "citations": 0, "author_ids": []}],
    )
    report = ingest_corpus(taxonomy, units, researchers, publications)
    assert report.node_counts["Publication"] == 0
    assert "InvalidField" in report.rejected[0].reason


def test_shuffled_inputs_produce_identical_snapshot(tmp_path):
    rng = random.Random(13)
    dirs = []
    for attempt in range(2):
        base = tmp_path / f"run{attempt}"
        base.mkdir()
        for name, source in (
            ("taxonomy.tsv", fixtures.TAXONOMY),
            ("units.ndjson", fixtures.UNITS),
            ("researchers.ndjson", fixtures.RESEARCHERS),
            ("publications.ndjson", fixtures.PUBLICATIONS),
        ):
            lines = source.read_text(encoding="utf-8").splitlines()
            if attempt:
                rng.shuffle(lines)
            write(base / name, lines)
        snap_dir = base / "snapshot"
        ingest_corpus(
            base / "taxonomy.tsv",
            base / "units.ndjson",
            base / "researchers.ndjson",
            base / "publications.ndjson",
            snapshot_dir=snap_dir,
        )
        dirs.append(snap_dir)
    for name in COMPARABLE:
        assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes(), name


def test_reingest_identical_except_version(tmp_path, pipeline):
    first = tmp_path / "first"
    second = tmp_path / "second"
    store = GraphStore()
    for target in (first, second):
        ingest_corpus(
            fixtures.TAXONOMY,
            fixtures.UNITS,
            fixtures.RESEARCHERS,
            fixtures.PUBLICATIONS,
            snapshot_dir=target,
            store=store,
        )
    assert json.loads((first / "meta").read_text())["version"] == 1
    assert json.loads((second / "meta").read_text())["version"] == 2
    for name in COMPARABLE:
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_save_load_roundtrip(pipeline, tmp_path):
    snap = pipeline.snapshot
    target = tmp_path / "copy"
    save_snapshot(snap, target)
    loaded = load_snapshot(target)
    assert loaded.version == snap.version
    assert loaded.nodes == snap.nodes
    assert loaded.edges == snap.edges
    assert loaded.profiles == snap.profiles


def test_save_twice_identical_bytes(pipeline, tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    save_snapshot(pipeline.snapshot, a)
    save_snapshot(pipeline.snapshot, b)
    for name in COMPARABLE + ("meta", "checksums"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_truncated_edges_detected(pipeline, tmp_path):
    target = tmp_path / "broken"
    save_snapshot(pipeline.snapshot, target)
    data = (target / "edges.ndjson").read_bytes()
    (target / "edges.ndjson").write_bytes(data[: len(data) // 2])
    with pytest.raises(CorruptSnapshotError):
        load_snapshot(target)


def test_load_missing_directory(tmp_path):
    with pytest.raises(SnapshotMissingError):
        load_snapshot(tmp_path / "nowhere")


def test_audit_files_written(pipeline):
    report_path = pipeline.snapshot_dir / "classification.ndjson"
    lines = report_path.read_text(encoding="utf-8").splitlines()
    header = json.loads(lines[0])
    assert header["config"] == pipeline.config.classifier.as_dict()
    assert len(lines) == 1 + 30
    record = json.loads(lines[1])
    assert set(record) == {"publication", "tags"}


def test_rejects_file_mirrors_input(tmp_path):
    taxonomy = minimal_taxonomy(tmp_path)
    bad_record = {"id": "p1", "title": "", "abstract": "", "year": 2020, "citations": 0, "author_ids": []}
    units, researchers, publications = entity_files(tmp_path, publications=[bad_record])
    snap_dir = tmp_path / "snap"
    ingest_corpus(taxonomy, units, researchers, publications, snapshot_dir=snap_dir)
    quarantined = (snap_dir / "rejects" / "publications.ndjson").read_text(encoding="utf-8")
    assert json.loads(quarantined.strip()) == bad_record


def test_no_partial_visibility_during_ingest(tmp_path, monkeypatch):
    store = GraphStore()
    ingest_corpus(
        fixtures.TAXONOMY, fixtures.UNITS, fixtures.RESEARCHERS, fixtures.PUBLICATIONS, store=store
    )
    assert store.current().version == 1

    import scholargraph.ingest as ingest_mod

    in_classify = threading.Event()
    release = threading.Event()
    original = ingest_mod.classify_corpus

    def slow_classify(*args, **kwargs):
        in_classify.set()
        release.wait(timeout=10)
        return original(*args, **kwargs)

    monkeypatch.setattr(ingest_mod, "classify_corpus", slow_classify)
    worker = threading.Thread(
        target=ingest_corpus,
        args=(fixtures.TAXONOMY, fixtures.UNITS, fixtures.RESEARCHERS, fixtures.PUBLICATIONS),
        kwargs={"store": store},
    )
    worker.start()
    assert in_classify.wait(timeout=10)
    assert store.current().version == 1  # reader still sees the old snapshot
    release.set()
    worker.join(timeout=30)
    assert store.current().version == 2


def test_classify_dry_run_matches_committed_tags(pipeline):
    report = classify_dry_run(fixtures.TAXONOMY, fixtures.PUBLICATIONS, cfg=pipeline.config)
    lines = report.strip().splitlines()
    assert json.loads(lines[0])["config"] == pipeline.config.classifier.as_dict()
    committed = (pipeline.snapshot_dir / "classification.ndjson").read_text(encoding="utf-8")
    assert report == committed


def test_export_snapshot(pipeline, tmp_path):
    dest = tmp_path / "exported"
    export_snapshot(pipeline.snapshot_dir, dest)
    loaded = load_snapshot(dest)
    assert loaded.version == pipeline.snapshot.version
    assert loaded.nodes == pipeline.snapshot.nodes
