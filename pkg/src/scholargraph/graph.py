"""Typed property-graph store for the institution ontology.

The schema is closed: five node kinds, five edge kinds, and each edge kind
is only valid between its declared endpoint kinds. ABOUT edges carry a
`score` property in (0, 1]; no other edge kind carries properties.

Snapshots are immutable once committed. A single writer accumulates the
next state in a :class:`GraphBuilder` and publishes the committed snapshot
atomically through a :class:`GraphStore`; readers keep whatever snapshot
reference they already hold, so they never observe a partial update.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any, Iterable, Mapping

from .errors import (
    DuplicateEdgeError,
    DuplicateIdError,
    InvalidPropertyValueError,
    InvalidScoreError,
    MissingEndpointError,
    SchemaViolationError,
    SnapshotMissingError,
    UnknownNodeError,
    UnknownPropertyKeyError,
)

NodeId = str
PropValue = "str | int | float | list[str]"
Props = "dict[str, str | int | float | list[str]]"


class NodeKind(str, Enum):
    INSTITUTION = "Institution"
    ORG_UNIT = "OrgUnit"
    RESEARCHER = "Researcher"
    PUBLICATION = "Publication"
    FIELD_OF_STUDY = "FieldOfStudy"


class EdgeKind(str, Enum):
    PART_OF = "PART_OF"
    MEMBER_OF = "MEMBER_OF"
    AUTHORED = "AUTHORED"
    ABOUT = "ABOUT"
    CHILD_OF = "CHILD_OF"


# Property keys each node kind may carry. Values are restricted to
# str | int | float | list[str] so the persisted form is exact.
ALLOWED_PROPS: dict[NodeKind, frozenset[str]] = {
    NodeKind.INSTITUTION: frozenset({"name", "institution_type"}),
    NodeKind.ORG_UNIT: frozenset({"name", "unit_type"}),
    NodeKind.RESEARCHER: frozenset({"name"}),
    NodeKind.PUBLICATION: frozenset({"title", "abstract", "year", "citations"}),
    NodeKind.FIELD_OF_STUDY: frozenset({"name", "description"}),
}

# EdgeKind -> (valid source kinds, valid destination kinds)
EDGE_SCHEMA: dict[EdgeKind, tuple[frozenset[NodeKind], frozenset[NodeKind]]] = {
    EdgeKind.PART_OF: (
        frozenset({NodeKind.ORG_UNIT}),
        frozenset({NodeKind.ORG_UNIT, NodeKind.INSTITUTION}),
    ),
    EdgeKind.MEMBER_OF: (
        frozenset({NodeKind.RESEARCHER}),
        frozenset({NodeKind.ORG_UNIT}),
    ),
    EdgeKind.AUTHORED: (
        frozenset({NodeKind.RESEARCHER}),
        frozenset({NodeKind.PUBLICATION}),
    ),
    EdgeKind.ABOUT: (
        frozenset({NodeKind.PUBLICATION}),
        frozenset({NodeKind.FIELD_OF_STUDY}),
    ),
    EdgeKind.CHILD_OF: (
        frozenset({NodeKind.FIELD_OF_STUDY}),
        frozenset({NodeKind.FIELD_OF_STUDY}),
    ),
}


@dataclass(frozen=True)
class Node:
    id: NodeId
    kind: NodeKind
    props: dict[str, Any]


@dataclass(frozen=True)
class Edge:
    src: NodeId
    kind: EdgeKind
    dst: NodeId
    props: dict[str, Any]


@dataclass(frozen=True)
class Violation:
    """One schema problem found in a snapshot; violations are data, not errors."""

    code: str  # referential_integrity | schema_violation | invalid_score | unexpected_property
    message: str


def _check_props(kind: NodeKind, props: Mapping[str, Any]) -> dict[str, Any]:
    allowed = ALLOWED_PROPS[kind]
    for key, value in props.items():
        if key not in allowed:
            raise UnknownPropertyKeyError(f"{kind.value} does not allow property {key!r}")
        ok = isinstance(value, (str, int, float)) and not isinstance(value, bool)
        if not ok and isinstance(value, list):
            ok = all(isinstance(v, str) for v in value)
        if not ok:
            raise InvalidPropertyValueError(
                f"property {key!r}: values must be str, int, float or list[str]"
            )
    return dict(props)


def _edge_sort_key(e: Edge) -> tuple[str, str, str]:
    return (e.src, e.kind.value, e.dst)


@dataclass(frozen=True)
class GraphSnapshot:
    """Immutable graph state plus derived caches.

    ``profiles`` maps entity id to its topic distribution and is filled in
    by the ingest pipeline after classification; ``index`` carries the
    search index built for this snapshot (not part of equality).
    """

    nodes: dict[NodeId, Node]
    edges: tuple[Edge, ...]
    version: int
    profiles: dict[NodeId, dict[NodeId, float]] = field(default_factory=dict)
    index: Any = field(default=None, compare=False, repr=False)

    @classmethod
    def from_parts(
        cls,
        nodes: Iterable[Node],
        edges: Iterable[Edge],
        version: int,
        profiles: dict[NodeId, dict[NodeId, float]] | None = None,
        index: Any = None,
    ) -> "GraphSnapshot":
        """Assemble a snapshot without schema checks (deserialization path).

        Dangling edge endpoints are representable so that
        :func:`validate_schema` can report them; duplicate node ids are not.
        """
        node_map: dict[NodeId, Node] = {}
        for n in nodes:
            if n.id in node_map:
                raise DuplicateIdError(f"duplicate node id {n.id!r}")
            node_map[n.id] = n
        return cls(
            nodes=node_map,
            edges=tuple(sorted(edges, key=_edge_sort_key)),
            version=version,
            profiles=profiles or {},
            index=index,
        )

    @cached_property
    def _adjacency(self) -> dict[tuple[NodeId, EdgeKind, str], list[tuple[NodeId, dict]]]:
        adj: dict[tuple[NodeId, EdgeKind, str], list[tuple[NodeId, dict]]] = {}
        for e in self.edges:
            adj.setdefault((e.src, e.kind, "out"), []).append((e.dst, e.props))
            adj.setdefault((e.dst, e.kind, "in"), []).append((e.src, e.props))
        for entries in adj.values():
            entries.sort(key=lambda pair: pair[0])
        return adj

    def has_node(self, node_id: NodeId) -> bool:
        return node_id in self.nodes

    def node(self, node_id: NodeId) -> Node:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNodeError(f"unknown node {node_id!r}") from None

    def nodes_of_kind(self, kind: NodeKind) -> list[Node]:
        return sorted(
            (n for n in self.nodes.values() if n.kind == kind), key=lambda n: n.id
        )

    def neighbors(
        self, node_id: NodeId, kind: EdgeKind, direction: str = "out"
    ) -> list[tuple[NodeId, dict]]:
        """Adjacent (node id, edge props) pairs, ascending by node id."""
        if direction not in ("in", "out"):
            raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")
        if node_id not in self.nodes:
            raise UnknownNodeError(f"unknown node {node_id!r}")
        return list(self._adjacency.get((node_id, kind, direction), ()))


class GraphBuilder:
    """Accumulates the next snapshot; every mutation is schema-checked."""

    def __init__(self, base_version: int = 0):
        self._base_version = base_version
        self._nodes: dict[NodeId, Node] = {}
        self._edges: dict[tuple[NodeId, EdgeKind, NodeId], Edge] = {}

    def add_node(self, kind: NodeKind, node_id: NodeId, props: Mapping[str, Any] | None = None) -> NodeId:
        if not isinstance(node_id, str) or not node_id:
            raise InvalidPropertyValueError("node id must be a non-empty string")
        if node_id in self._nodes:
            raise DuplicateIdError(f"duplicate node id {node_id!r}")
        self._nodes[node_id] = Node(node_id, kind, _check_props(kind, props or {}))
        return node_id

    def add_edge(
        self,
        src: NodeId,
        kind: EdgeKind,
        dst: NodeId,
        props: Mapping[str, Any] | None = None,
    ) -> Edge:
        props = dict(props or {})
        for endpoint in (src, dst):
            if endpoint not in self._nodes:
                raise MissingEndpointError(f"edge endpoint {endpoint!r} does not exist")
        src_kinds, dst_kinds = EDGE_SCHEMA[kind]
        src_kind = self._nodes[src].kind
        dst_kind = self._nodes[dst].kind
        if src_kind not in src_kinds or dst_kind not in dst_kinds:
            raise SchemaViolationError(
                f"{kind.value} not allowed from {src_kind.value} to {dst_kind.value}"
            )
        if kind is EdgeKind.ABOUT:
            score = props.get("score")
            if not isinstance(score, (int, float)) or isinstance(score, bool) or not (0.0 < float(score) <= 1.0):
                raise InvalidScoreError(f"ABOUT edge requires score in (0, 1], got {score!r}")
            if set(props) != {"score"}:
                raise SchemaViolationError("ABOUT edges carry exactly the score property")
            props = {"score": float(score)}
        elif props:
            raise SchemaViolationError(f"{kind.value} edges carry no properties")
        key = (src, kind, dst)
        if key in self._edges:
            raise DuplicateEdgeError(f"duplicate edge {src!r} -{kind.value}-> {dst!r}")
        edge = Edge(src, kind, dst, props)
        self._edges[key] = edge
        return edge

    def has_node(self, node_id: NodeId) -> bool:
        return node_id in self._nodes

    def commit(self) -> GraphSnapshot:
        """Freeze the accumulated state as version ``base_version + 1``."""
        return GraphSnapshot.from_parts(
            self._nodes.values(), self._edges.values(), self._base_version + 1
        )


class GraphStore:
    """Holds the currently published snapshot; swap is atomic.

    Readers call :meth:`current` and use that reference for the whole
    request; the single writer calls :meth:`publish` once a new snapshot is
    fully built.
    """

    def __init__(self, snapshot: GraphSnapshot | None = None):
        self._lock = threading.Lock()
        self._snapshot = snapshot

    def current(self) -> GraphSnapshot:
        snap = self._snapshot
        if snap is None:
            raise SnapshotMissingError("no snapshot has been published yet")
        return snap

    def current_or_none(self) -> GraphSnapshot | None:
        return self._snapshot

    def base_version(self) -> int:
        snap = self._snapshot
        return 0 if snap is None else snap.version

    def publish(self, snapshot: GraphSnapshot) -> None:
        with self._lock:
            if self._snapshot is not None and snapshot.version <= self._snapshot.version:
                raise ValueError(
                    f"snapshot version {snapshot.version} does not advance "
                    f"{self._snapshot.version}"
                )
            self._snapshot = snapshot


def validate_schema(snapshot: GraphSnapshot) -> list[Violation]:
    """Check every edge against the ontology schema.

    The report is empty iff all edges connect existing endpoints of the
    declared kinds, every ABOUT edge has a score in (0, 1], and no other
    edge carries properties.
    """
    violations: list[Violation] = []
    for e in snapshot.edges:
        missing = [x for x in (e.src, e.dst) if x not in snapshot.nodes]
        if missing:
            violations.append(
                Violation(
                    "referential_integrity",
                    f"edge {e.src} -{e.kind.value}-> {e.dst}: "
                    f"missing endpoint(s) {', '.join(missing)}",
                )
            )
            continue
        src_kinds, dst_kinds = EDGE_SCHEMA[e.kind]
        src_kind = snapshot.nodes[e.src].kind
        dst_kind = snapshot.nodes[e.dst].kind
        if src_kind not in src_kinds or dst_kind not in dst_kinds:
            violations.append(
                Violation(
                    "schema_violation",
                    f"{e.kind.value} from {src_kind.value} {e.src} "
                    f"to {dst_kind.value} {e.dst} violates the edge schema",
                )
            )
        if e.kind is EdgeKind.ABOUT:
            score = e.props.get("score")
            if not isinstance(score, (int, float)) or isinstance(score, bool) or not (0.0 < float(score) <= 1.0):
                violations.append(
                    Violation(
                        "invalid_score",
                        f"ABOUT edge {e.src} -> {e.dst} has invalid score {score!r}",
                    )
                )
        elif e.props:
            violations.append(
                Violation(
                    "unexpected_property",
                    f"{e.kind.value} edge {e.src} -> {e.dst} carries properties",
                )
            )
    return violations
