"""Corpus ingestion pipeline and snapshot persistence.

Ingestion runs in a fixed order: taxonomy, org units, researchers,
publications, classification, profile recompute, index rebuild, then one
atomic snapshot publish. Invalid records are quarantined and reported,
never aborting the run; only an invalid taxonomy or an unreadable input
file is fatal. Re-ingestion replaces the whole snapshot.

Snapshots persist as a directory of sorted newline-delimited files
(`nodes.ndjson`, `edges.ndjson`, `profiles.ndjson`), the serialized
search index (`index.bin`), a `meta` file with the version, and a
`checksums` file covering all of them. Serialization is byte-stable:
saving the same snapshot twice produces identical bytes.
"""

from __future__ import annotations

import hashlib
import io
import json
import logging
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

from .classify import (
    ClassifierConfig,
    FosScore,
    PublicationDoc,
    classify_corpus,
    write_classification_report,
)
from .errors import (
    CorruptSnapshotError,
    DuplicateIdError,
    FileUnreadableError,
    ScholarGraphError,
    SnapshotIoError,
    SnapshotMissingError,
    TaxonomyInvalidError,
)
from .graph import Edge, EdgeKind, GraphBuilder, GraphSnapshot, GraphStore, Node, NodeKind
from .inference import compute_profiles
from .search import IndexConfig, build_index, index_from_bytes, index_to_bytes
from .taxonomy import Taxonomy, load_taxonomy, parse_taxonomy_file
from .text import DEFAULT_STOPWORDS

log = logging.getLogger(__name__)

SNAPSHOT_FILES = ("meta", "nodes.ndjson", "edges.ndjson", "profiles.ndjson", "index.bin")


@dataclass(frozen=True)
class IngestConfig:
    classifier: ClassifierConfig = ClassifierConfig()
    index: IndexConfig = IndexConfig()
    stopwords: frozenset[str] = DEFAULT_STOPWORDS
    institution_id: str = "institution"
    institution_name: str = "Research Institution"

    def as_dict(self) -> dict:
        return {
            "classifier": self.classifier.as_dict(),
            "index": self.index.as_dict(),
            "institution_id": self.institution_id,
            "institution_name": self.institution_name,
            "stopwords": "default" if self.stopwords is DEFAULT_STOPWORDS else sorted(self.stopwords),
        }


@dataclass(frozen=True)
class RejectedRecord:
    source: str  # units | researchers | publications
    record_id: str | None
    reason: str
    raw: str


@dataclass
class IngestReport:
    snapshot_version: int
    node_counts: dict[str, int]
    edge_counts: dict[str, int]
    rejected: list[RejectedRecord]
    config: dict
    tag_count: int = 0

    def as_dict(self) -> dict:
        return {
            "snapshot_version": self.snapshot_version,
            "counts": {"nodes": self.node_counts, "edges": self.edge_counts},
            "tag_count": self.tag_count,
            "rejected": [
                {"source": r.source, "id": r.record_id, "reason": r.reason}
                for r in self.rejected
            ],
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)


def _read_lines(path: str | Path, source: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            return [line.rstrip("\n") for line in fh if line.strip()]
    except OSError as exc:
        raise FileUnreadableError(f"cannot read {source} file {path}: {exc}") from exc


def _parse_ndjson(
    path: str | Path, source: str, rejected: list[RejectedRecord]
) -> list[tuple[dict, str]]:
    records = []
    for raw in _read_lines(path, source):
        try:
            obj = json.loads(raw)
            if not isinstance(obj, dict):
                raise ValueError("record is not an object")
            records.append((obj, raw))
        except ValueError as exc:
            rejected.append(RejectedRecord(source, None, f"InvalidJson: {exc}", raw))
    return _reject_file_duplicates(records, source, rejected)


def _reject_file_duplicates(
    records: list[tuple[dict, str]], source: str, rejected: list[RejectedRecord]
) -> list[tuple[dict, str]]:
    # Ambiguous duplicates are rejected wholesale so the outcome cannot
    # depend on line order.
    counts: dict[str, int] = {}
    for record, _ in records:
        rid = record.get("id")
        if isinstance(rid, str) and rid:
            counts[rid] = counts.get(rid, 0) + 1
    duplicated = {rid for rid, n in counts.items() if n > 1}
    kept = []
    for record, raw in records:
        rid = record.get("id")
        if isinstance(rid, str) and rid in duplicated:
            rejected.append(RejectedRecord(source, rid, "DuplicateId: repeated in file", raw))
        else:
            kept.append((record, raw))
    return kept


def _str_field(record: dict, key: str, required: bool = True) -> str:
    value = record.get(key, "")
    if not isinstance(value, str):
        raise ValueError(f"field {key!r} must be a string")
    if required and not value:
        raise ValueError(f"field {key!r} must be non-empty")
    return value


def _id_list_field(record: dict, key: str) -> list[str]:
    value = record.get(key, [])
    if not isinstance(value, list) or not all(isinstance(v, str) and v for v in value):
        raise ValueError(f"field {key!r} must be a list of non-empty strings")
    return sorted(set(value))


def _int_field(record: dict, key: str, minimum: int | None = None) -> int:
    value = record.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"field {key!r} must be an integer")
    if minimum is not None and value < minimum:
        raise ValueError(f"field {key!r} must be >= {minimum}")
    return value


def _accept_units(
    records: list[tuple[dict, str]],
    taken_ids: set[str],
    rejected: list[RejectedRecord],
) -> dict[str, dict]:
    """Fixpoint acceptance so the result is independent of record order."""
    parsed: dict[str, tuple[dict, str]] = {}
    for record, raw in records:
        try:
            unit_id = _str_field(record, "id")
            parsed_record = {
                "id": unit_id,
                "name": _str_field(record, "name"),
                "unit_type": _str_field(record, "unit_type", required=False),
                "parent_id": _str_field(record, "parent_id", required=False),
            }
        except ValueError as exc:
            rejected.append(RejectedRecord("units", record.get("id"), f"InvalidField: {exc}", raw))
            continue
        if unit_id in taken_ids:
            rejected.append(RejectedRecord("units", unit_id, "DuplicateId: id already in use", raw))
            continue
        parsed[unit_id] = (parsed_record, raw)

    accepted: dict[str, dict] = {}
    remaining = dict(parsed)
    changed = True
    while changed:
        changed = False
        for unit_id in sorted(remaining):
            record, _ = remaining[unit_id]
            parent = record["parent_id"]
            if not parent or parent in accepted:
                accepted[unit_id] = record
                del remaining[unit_id]
                changed = True
    for unit_id in sorted(remaining):
        record, raw = remaining[unit_id]
        parent = record["parent_id"]
        if parent not in parsed:
            reason = f"DanglingReference: unknown parent unit {parent!r}"
        elif _in_parent_cycle(unit_id, remaining):
            reason = "CyclicOrgStructure: PART_OF cycle"
        else:
            reason = f"DanglingReference: parent unit {parent!r} was rejected"
        rejected.append(RejectedRecord("units", unit_id, reason, raw))
    return accepted


def _in_parent_cycle(unit_id: str, remaining: dict[str, tuple[dict, str]]) -> bool:
    seen = set()
    current = unit_id
    while current in remaining and current not in seen:
        seen.add(current)
        current = remaining[current][0]["parent_id"]
    return current == unit_id or current in seen


def ingest_corpus(
    taxonomy_file: str | Path,
    units_file: str | Path,
    researchers_file: str | Path,
    publications_file: str | Path,
    cfg: IngestConfig | None = None,
    snapshot_dir: str | Path | None = None,
    store: GraphStore | None = None,
) -> IngestReport:
    """Run the full pipeline and publish one new snapshot.

    The snapshot is written to ``snapshot_dir`` (if given) and published
    on ``store`` (if given) only after every stage has completed; readers
    of the store keep seeing the previous snapshot until then.
    """
    cfg = cfg or IngestConfig()
    rejected: list[RejectedRecord] = []

    try:
        taxonomy = load_taxonomy(parse_taxonomy_file(str(taxonomy_file)))
    except OSError as exc:
        raise FileUnreadableError(f"cannot read taxonomy file {taxonomy_file}: {exc}") from exc
    except ScholarGraphError as exc:
        raise TaxonomyInvalidError(f"taxonomy file {taxonomy_file}: {exc}") from exc

    taken_ids = set(taxonomy.concepts) | {cfg.institution_id}

    unit_records = _parse_ndjson(units_file, "units", rejected)
    units = _accept_units(unit_records, taken_ids, rejected)
    taken_ids |= set(units)

    researcher_records = _parse_ndjson(researchers_file, "researchers", rejected)
    researchers: dict[str, dict] = {}
    for record, raw in sorted(researcher_records, key=lambda pair: str(pair[0].get("id"))):
        try:
            rid = _str_field(record, "id")
            name = _str_field(record, "name")
            unit_ids = _id_list_field(record, "unit_ids")
        except ValueError as exc:
            rejected.append(RejectedRecord("researchers", record.get("id"), f"InvalidField: {exc}", raw))
            continue
        if rid in taken_ids:
            rejected.append(RejectedRecord("researchers", rid, "DuplicateId: id already in use", raw))
            continue
        missing = [u for u in unit_ids if u not in units]
        if missing:
            rejected.append(
                RejectedRecord(
                    "researchers", rid, f"DanglingReference: unknown unit(s) {', '.join(missing)}", raw
                )
            )
            continue
        researchers[rid] = {"id": rid, "name": name, "unit_ids": unit_ids}
    taken_ids |= set(researchers)

    publication_records = _parse_ndjson(publications_file, "publications", rejected)
    publications: dict[str, dict] = {}
    for record, raw in sorted(publication_records, key=lambda pair: str(pair[0].get("id"))):
        try:
            pid = _str_field(record, "id")
            parsed_record = {
                "id": pid,
                "title": _str_field(record, "title"),
                "abstract": _str_field(record, "abstract", required=False),
                "year": _int_field(record, "year"),
                "citations": _int_field(record, "citations", minimum=0),
                "author_ids": _id_list_field(record, "author_ids"),
            }
        except ValueError as exc:
            rejected.append(RejectedRecord("publications", record.get("id"), f"InvalidField: {exc}", raw))
            continue
        if pid in taken_ids:
            rejected.append(RejectedRecord("publications", pid, "DuplicateId: id already in use", raw))
            continue
        missing = [a for a in parsed_record["author_ids"] if a not in researchers]
        if missing:
            rejected.append(
                RejectedRecord(
                    "publications", pid, f"DanglingReference: unknown author(s) {', '.join(missing)}", raw
                )
            )
            continue
        publications[pid] = parsed_record

    builder = GraphBuilder(base_version=_base_version(store, snapshot_dir))
    builder.add_node(
        NodeKind.INSTITUTION,
        cfg.institution_id,
        {"name": cfg.institution_name, "institution_type": "university"},
    )
    for cid in sorted(taxonomy.concepts):
        concept = taxonomy.concepts[cid]
        builder.add_node(
            NodeKind.FIELD_OF_STUDY, cid, {"name": concept.name, "description": concept.description}
        )
    for cid in sorted(taxonomy.concepts):
        for parent in taxonomy.concepts[cid].parents:
            builder.add_edge(cid, EdgeKind.CHILD_OF, parent)
    for uid in sorted(units):
        builder.add_node(
            NodeKind.ORG_UNIT, uid, {"name": units[uid]["name"], "unit_type": units[uid]["unit_type"]}
        )
    for uid in sorted(units):
        parent = units[uid]["parent_id"] or cfg.institution_id
        builder.add_edge(uid, EdgeKind.PART_OF, parent)
    for rid in sorted(researchers):
        builder.add_node(NodeKind.RESEARCHER, rid, {"name": researchers[rid]["name"]})
        for uid in researchers[rid]["unit_ids"]:
            builder.add_edge(rid, EdgeKind.MEMBER_OF, uid)
    for pid in sorted(publications):
        record = publications[pid]
        builder.add_node(
            NodeKind.PUBLICATION,
            pid,
            {
                "title": record["title"],
                "abstract": record["abstract"],
                "year": record["year"],
                "citations": record["citations"],
            },
        )
        for author in record["author_ids"]:
            builder.add_edge(author, EdgeKind.AUTHORED, pid)

    tags: dict[str, list[FosScore]] = {}
    if publications and len(taxonomy) > 0:
        docs = [
            PublicationDoc(pid, publications[pid]["title"], publications[pid]["abstract"])
            for pid in sorted(publications)
        ]
        tags = classify_corpus(docs, taxonomy, cfg.classifier, cfg.stopwords)
        for pid in sorted(tags):
            for fs in tags[pid]:
                builder.add_edge(pid, EdgeKind.ABOUT, fs.fos, {"score": fs.score})

    snapshot = builder.commit()
    snapshot = replace(snapshot, profiles=compute_profiles(snapshot))
    index = build_index(snapshot, cfg.index, cfg.stopwords)
    snapshot = replace(snapshot, index=index)

    if snapshot_dir is not None:
        save_snapshot(snapshot, snapshot_dir)
        _write_audit_files(Path(snapshot_dir), tags, cfg.classifier, rejected)
    if store is not None:
        store.publish(snapshot)

    node_counts = {kind.value: len(snapshot.nodes_of_kind(kind)) for kind in NodeKind}
    edge_counts = {kind.value: 0 for kind in EdgeKind}
    for edge in snapshot.edges:
        edge_counts[edge.kind.value] += 1
    rejected.sort(key=lambda r: (r.source, r.record_id or "", r.reason))
    return IngestReport(
        snapshot_version=snapshot.version,
        node_counts=node_counts,
        edge_counts=edge_counts,
        rejected=rejected,
        config=cfg.as_dict(),
        tag_count=edge_counts[EdgeKind.ABOUT.value],
    )


def _base_version(store: GraphStore | None, snapshot_dir: str | Path | None) -> int:
    if store is not None:
        return store.base_version()
    if snapshot_dir is not None:
        meta = Path(snapshot_dir) / "meta"
        if meta.exists():
            try:
                return int(json.loads(meta.read_text(encoding="utf-8"))["version"])
            except (ValueError, KeyError):
                return 0
    return 0


def _write_audit_files(
    directory: Path,
    tags: dict[str, list[FosScore]],
    classifier_cfg: ClassifierConfig,
    rejected: list[RejectedRecord],
) -> None:
    with open(directory / "classification.ndjson", "w", encoding="utf-8") as fh:
        write_classification_report(fh, tags, classifier_cfg)
    rejects_dir = directory / "rejects"
    by_source: dict[str, list[RejectedRecord]] = {}
    for r in rejected:
        by_source.setdefault(r.source, []).append(r)
    for source, records in sorted(by_source.items()):
        rejects_dir.mkdir(exist_ok=True)
        with open(rejects_dir / f"{source}.ndjson", "w", encoding="utf-8") as fh:
            for r in sorted(records, key=lambda r: (r.record_id or "", r.raw)):
                fh.write(r.raw + "\n")


def classify_dry_run(
    taxonomy_file: str | Path,
    publications_file: str | Path,
    cfg: IngestConfig | None = None,
) -> str:
    """Classification report for tuning; commits nothing."""
    cfg = cfg or IngestConfig()
    try:
        taxonomy = load_taxonomy(parse_taxonomy_file(str(taxonomy_file)))
    except ScholarGraphError as exc:
        raise TaxonomyInvalidError(f"taxonomy file {taxonomy_file}: {exc}") from exc
    rejected: list[RejectedRecord] = []
    records = _parse_ndjson(publications_file, "publications", rejected)
    docs = []
    for record, raw in sorted(records, key=lambda pair: str(pair[0].get("id"))):
        try:
            docs.append(
                PublicationDoc(
                    _str_field(record, "id"),
                    _str_field(record, "title"),
                    _str_field(record, "abstract", required=False),
                )
            )
        except ValueError:
            continue
    tags = classify_corpus(docs, taxonomy, cfg.classifier, cfg.stopwords) if docs else {}
    out = io.StringIO()
    write_classification_report(out, tags, cfg.classifier)
    return out.getvalue()


# --- snapshot persistence ---

def _canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def save_snapshot(snapshot: GraphSnapshot, directory: str | Path) -> None:
    """Byte-stable, checksummed serialization of a snapshot."""
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        files: dict[str, bytes] = {}
        files["nodes.ndjson"] = "".join(
            _canonical_json({"id": n.id, "kind": n.kind.value, "props": n.props}) + "\n"
            for n in sorted(snapshot.nodes.values(), key=lambda n: n.id)
        ).encode("utf-8")
        files["edges.ndjson"] = "".join(
            _canonical_json({"src": e.src, "kind": e.kind.value, "dst": e.dst, "props": e.props})
            + "\n"
            for e in snapshot.edges
        ).encode("utf-8")
        files["profiles.ndjson"] = "".join(
            _canonical_json({"id": entity, "weights": snapshot.profiles[entity]}) + "\n"
            for entity in sorted(snapshot.profiles)
        ).encode("utf-8")
        index = snapshot.index if snapshot.index is not None else build_index(snapshot)
        files["index.bin"] = index_to_bytes(index)
        files["meta"] = (_canonical_json({"version": snapshot.version}) + "\n").encode("utf-8")
        for name, data in files.items():
            (directory / name).write_bytes(data)
        checksum_lines = [
            f"{hashlib.sha256(files[name]).hexdigest()}  {name}" for name in sorted(files)
        ]
        (directory / "checksums").write_text("\n".join(checksum_lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise SnapshotIoError(f"cannot write snapshot to {directory}: {exc}") from exc


def _verify_checksums(directory: Path) -> None:
    checksum_path = directory / "checksums"
    if not checksum_path.exists():
        raise CorruptSnapshotError(f"{directory}: checksums file missing")
    listed: dict[str, str] = {}
    for line in checksum_path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        digest, _, name = line.partition("  ")
        listed[name] = digest
    missing = [name for name in SNAPSHOT_FILES if name not in listed]
    if missing:
        raise CorruptSnapshotError(f"{directory}: checksums missing entries for {missing}")
    for name, digest in sorted(listed.items()):
        path = directory / name
        if not path.exists():
            raise CorruptSnapshotError(f"{directory}: file {name} missing")
        actual = hashlib.sha256(path.read_bytes()).hexdigest()
        if actual != digest:
            raise CorruptSnapshotError(f"{directory}: checksum mismatch for {name}")


def load_snapshot(directory: str | Path) -> GraphSnapshot:
    """Load a saved snapshot; verifies checksums before parsing."""
    directory = Path(directory)
    if not (directory / "meta").exists():
        raise SnapshotMissingError(f"no snapshot found in {directory}")
    _verify_checksums(directory)
    try:
        meta = json.loads((directory / "meta").read_text(encoding="utf-8"))
        nodes = []
        for line in (directory / "nodes.ndjson").read_text(encoding="utf-8").splitlines():
            if not line:
                continue
            obj = json.loads(line)
            nodes.append(Node(obj["id"], NodeKind(obj["kind"]), obj["props"]))
        edges = []
        for line in (directory / "edges.ndjson").read_text(encoding="utf-8").splitlines():
            if not line:
                continue
            obj = json.loads(line)
            edges.append(Edge(obj["src"], EdgeKind(obj["kind"]), obj["dst"], obj["props"]))
        profiles = {}
        for line in (directory / "profiles.ndjson").read_text(encoding="utf-8").splitlines():
            if not line:
                continue
            obj = json.loads(line)
            profiles[obj["id"]] = obj["weights"]
        index = index_from_bytes((directory / "index.bin").read_bytes())
        return GraphSnapshot.from_parts(
            nodes, edges, int(meta["version"]), profiles=profiles, index=index
        )
    except OSError as exc:
        raise SnapshotIoError(f"cannot read snapshot from {directory}: {exc}") from exc
    except (ValueError, KeyError, DuplicateIdError) as exc:
        raise CorruptSnapshotError(f"{directory}: malformed snapshot: {exc}") from exc


def export_snapshot(source: str | Path, dest: str | Path) -> None:
    """Verified copy of a snapshot directory (core files only)."""
    source = Path(source)
    dest = Path(dest)
    if not (source / "meta").exists():
        raise SnapshotMissingError(f"no snapshot found in {source}")
    _verify_checksums(source)
    try:
        dest.mkdir(parents=True, exist_ok=True)
        for name in SNAPSHOT_FILES + ("checksums",):
            (dest / name).write_bytes((source / name).read_bytes())
    except OSError as exc:
        raise SnapshotIoError(f"cannot export snapshot to {dest}: {exc}") from exc
