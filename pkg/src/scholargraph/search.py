"""Full-text lookup over all entity kinds via a BM25 inverted index.

Each node kind indexes a fixed set of text fields; statistics (document
frequency, average field length) are kept per (kind, field) so that, for
example, researcher names only compete against other researcher names.
The score of a node for a query is the sum over its fields of

    sum_t  idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avgdl))

over the distinct query terms t, with idf(t) = ln(1 + (N - df + 0.5) /
(df + 0.5)). Query semantics are OR over terms: any node containing at
least one query term in an indexed field is a candidate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable

from .graph import GraphSnapshot, NodeId, NodeKind
from .text import DEFAULT_STOPWORDS, tokenize

INDEXED_FIELDS: dict[NodeKind, tuple[str, ...]] = {
    NodeKind.RESEARCHER: ("name",),
    NodeKind.PUBLICATION: ("title", "abstract"),
    NodeKind.ORG_UNIT: ("name",),
    NodeKind.INSTITUTION: ("name",),
    NodeKind.FIELD_OF_STUDY: ("name", "description"),
}


@dataclass(frozen=True)
class IndexConfig:
    k1: float = 1.2
    b: float = 0.75

    def __post_init__(self):
        if self.k1 <= 0:
            raise ValueError(f"k1 must be > 0, got {self.k1}")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError(f"b must be in [0, 1], got {self.b}")

    def as_dict(self) -> dict:
        return {"k1": self.k1, "b": self.b}


@dataclass(frozen=True)
class SearchHit:
    node: NodeId
    kind: NodeKind
    score: float
    matched_fields: tuple[str, ...]


@dataclass(frozen=True)
class _FieldStats:
    doc_count: int  # nodes of the kind, whether or not the field is set
    total_len: int
    doc_freq: dict[str, int]

    @property
    def avg_len(self) -> float:
        return self.total_len / self.doc_count if self.doc_count else 0.0


class SearchIndex:
    """Immutable inverted index over one snapshot."""

    def __init__(
        self,
        config: IndexConfig,
        stopwords: frozenset[str],
        node_kinds: dict[NodeId, NodeKind],
        postings: dict[str, dict[tuple[NodeId, str], int]],
        field_len: dict[tuple[NodeId, str], int],
        stats: dict[tuple[NodeKind, str], _FieldStats],
    ):
        self.config = config
        self.stopwords = stopwords
        self.node_kinds = node_kinds
        self.postings = postings
        self.field_len = field_len
        self.stats = stats

    def _idf(self, kind: NodeKind, field: str, term: str) -> float:
        st = self.stats[(kind, field)]
        df = st.doc_freq.get(term, 0)
        return math.log(1.0 + (st.doc_count - df + 0.5) / (df + 0.5))

    def _score(self, node: NodeId, kind: NodeKind, terms: list[str]) -> tuple[float, tuple[str, ...]]:
        k1 = self.config.k1
        b = self.config.b
        total = 0.0
        matched = []
        for fieldname in INDEXED_FIELDS[kind]:
            st = self.stats[(kind, fieldname)]
            dl = self.field_len.get((node, fieldname), 0)
            field_hit = False
            for term in terms:
                tf = self.postings.get(term, {}).get((node, fieldname), 0)
                if tf:
                    field_hit = True
                    total += (
                        self._idf(kind, fieldname, term)
                        * tf
                        * (k1 + 1.0)
                        / (tf + k1 * (1.0 - b + b * dl / st.avg_len))
                    )
            if field_hit:
                matched.append(fieldname)
        return total, tuple(matched)

    def lookup(
        self,
        query: str,
        kind_filter: Iterable[NodeKind] | None = None,
        limit: int = 25,
    ) -> list[SearchHit]:
        """Top ``limit`` hits by descending score, ties by ascending node id."""
        if limit < 1:
            raise ValueError(f"limit must be >= 1, got {limit}")
        terms = list(dict.fromkeys(tokenize(query, self.stopwords)))
        if not terms:
            return []
        kinds = set(kind_filter) if kind_filter is not None else None
        candidates: set[NodeId] = set()
        for term in terms:
            candidates.update(node for node, _ in self.postings.get(term, ()))
        hits = []
        for node in sorted(candidates):
            kind = self.node_kinds[node]
            if kinds is not None and kind not in kinds:
                continue
            score, matched = self._score(node, kind, terms)
            if matched:
                hits.append(SearchHit(node, kind, score, matched))
        hits.sort(key=lambda h: (-h.score, h.node))
        return hits[:limit]


def build_index(
    snapshot: GraphSnapshot,
    config: IndexConfig | None = None,
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
) -> SearchIndex:
    """Deterministic index over the snapshot's indexed text fields."""
    config = config or IndexConfig()
    node_kinds: dict[NodeId, NodeKind] = {}
    postings: dict[str, dict[tuple[NodeId, str], int]] = {}
    field_len: dict[tuple[NodeId, str], int] = {}
    stats: dict[tuple[NodeKind, str], _FieldStats] = {}
    for kind, fields in INDEXED_FIELDS.items():
        nodes = snapshot.nodes_of_kind(kind)
        for fieldname in fields:
            total_len = 0
            doc_freq: dict[str, int] = {}
            for node in nodes:
                node_kinds[node.id] = kind
                tokens = tokenize(str(node.props.get(fieldname, "")), stopwords)
                total_len += len(tokens)
                field_len[(node.id, fieldname)] = len(tokens)
                seen: set[str] = set()
                for t in tokens:
                    entry = postings.setdefault(t, {})
                    entry[(node.id, fieldname)] = entry.get((node.id, fieldname), 0) + 1
                    seen.add(t)
                for t in seen:
                    doc_freq[t] = doc_freq.get(t, 0) + 1
            stats[(kind, fieldname)] = _FieldStats(
                doc_count=len(nodes), total_len=total_len, doc_freq=doc_freq
            )
    return SearchIndex(config, stopwords, node_kinds, postings, field_len, stats)


def index_to_bytes(index: SearchIndex) -> bytes:
    """Byte-stable serialization: identical indexes produce identical bytes."""
    payload = {
        "config": index.config.as_dict(),
        "stopwords": sorted(index.stopwords),
        "node_kinds": {n: k.value for n, k in sorted(index.node_kinds.items())},
        "postings": {
            term: [[node, fieldname, tf] for (node, fieldname), tf in sorted(entry.items())]
            for term, entry in sorted(index.postings.items())
        },
        "field_len": [
            [node, fieldname, length]
            for (node, fieldname), length in sorted(index.field_len.items())
        ],
        "stats": {
            f"{kind.value}/{fieldname}": {
                "doc_count": st.doc_count,
                "total_len": st.total_len,
                "doc_freq": dict(sorted(st.doc_freq.items())),
            }
            for (kind, fieldname), st in sorted(
                index.stats.items(), key=lambda kv: (kv[0][0].value, kv[0][1])
            )
        },
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def index_from_bytes(data: bytes) -> SearchIndex:
    payload = json.loads(data.decode("utf-8"))
    config = IndexConfig(**payload["config"])
    stopwords = frozenset(payload["stopwords"])
    node_kinds = {n: NodeKind(k) for n, k in payload["node_kinds"].items()}
    postings = {
        term: {(node, fieldname): tf for node, fieldname, tf in entries}
        for term, entries in payload["postings"].items()
    }
    field_len = {(node, fieldname): length for node, fieldname, length in payload["field_len"]}
    stats = {}
    for key, st in payload["stats"].items():
        kind_name, fieldname = key.split("/", 1)
        stats[(NodeKind(kind_name), fieldname)] = _FieldStats(
            doc_count=st["doc_count"],
            total_len=st["total_len"],
            doc_freq=st["doc_freq"],
        )
    return SearchIndex(config, stopwords, node_kinds, postings, field_len, stats)
