"""Hierarchical field-of-study taxonomy: a rooted multi-parent DAG.

Concepts at level 0 are the broad root domains; every other concept sits
at ``1 + min(level of its parents)``, i.e. a concept is as general as its
most general placement. Roll-up projects a topic distribution onto the
ancestors at a fixed level, splitting each concept's mass equally over
its ancestors at that level so that total mass is conserved before the
final renormalization.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    CycleDetectedError,
    DanglingParentError,
    DuplicateIdError,
    LevelOutOfRangeError,
    TaxonomyInvalidError,
    UnknownConceptError,
)
from .graph import EdgeKind, GraphSnapshot, NodeKind

log = logging.getLogger(__name__)

# (id, name, description, parent ids)
TaxonomyRecord = "tuple[str, str, str, Sequence[str]]"


@dataclass(frozen=True)
class FieldOfStudy:
    id: str
    name: str
    description: str
    parents: tuple[str, ...]  # sorted, empty iff level == 0
    level: int


class Taxonomy:
    """Immutable concept hierarchy; safe to share across readers."""

    def __init__(self, concepts: dict[str, FieldOfStudy]):
        self.concepts = concepts
        self.roots: tuple[str, ...] = tuple(
            sorted(f.id for f in concepts.values() if not f.parents)
        )
        children: dict[str, list[str]] = {cid: [] for cid in concepts}
        for f in concepts.values():
            for p in f.parents:
                children[p].append(f.id)
        self._children = {cid: tuple(sorted(ids)) for cid, ids in children.items()}
        self._ancestor_cache: dict[tuple[str, int], frozenset[str]] = {}

    def __contains__(self, fos_id: str) -> bool:
        return fos_id in self.concepts

    def __len__(self) -> int:
        return len(self.concepts)

    def get(self, fos_id: str) -> FieldOfStudy:
        try:
            return self.concepts[fos_id]
        except KeyError:
            raise UnknownConceptError(f"unknown concept {fos_id!r}") from None

    def level(self, fos_id: str) -> int:
        return self.get(fos_id).level

    def children(self, fos_id: str) -> tuple[str, ...]:
        self.get(fos_id)
        return self._children[fos_id]

    @property
    def max_level(self) -> int:
        return max((f.level for f in self.concepts.values()), default=0)


def load_taxonomy(records: Iterable[tuple[str, str, str, Sequence[str]]]) -> Taxonomy:
    """Build a validated taxonomy from (id, name, description, parents) records.

    Deterministic: the same records in any order produce an identical
    taxonomy. Raises ``DuplicateIdError``, ``DanglingParentError`` or
    ``CycleDetectedError`` (with one witness cycle) on invalid input.
    """
    rows: dict[str, tuple[str, str, tuple[str, ...]]] = {}
    for fos_id, name, description, parents in records:
        if not fos_id:
            raise TaxonomyInvalidError("concept id must be non-empty")
        if not name:
            raise TaxonomyInvalidError(f"concept {fos_id!r} has an empty name")
        if fos_id in rows:
            raise DuplicateIdError(f"duplicate concept id {fos_id!r}")
        rows[fos_id] = (name, description, tuple(sorted(set(parents))))

    for fos_id, (_, _, parents) in rows.items():
        for p in parents:
            if p not in rows:
                raise DanglingParentError(f"concept {fos_id!r} references missing parent {p!r}")

    # Kahn over parent->child order; a concept is ready once all parents have levels.
    levels: dict[str, int] = {}
    pending_parents = {cid: len(rows[cid][2]) for cid in rows}
    queue = deque(sorted(cid for cid, n in pending_parents.items() if n == 0))
    children: dict[str, list[str]] = {cid: [] for cid in rows}
    for cid, (_, _, parents) in rows.items():
        for p in parents:
            children[p].append(cid)
    while queue:
        cid = queue.popleft()
        parents = rows[cid][2]
        levels[cid] = 0 if not parents else 1 + min(levels[p] for p in parents)
        for child in sorted(children[cid]):
            pending_parents[child] -= 1
            if pending_parents[child] == 0:
                queue.append(child)
    if len(levels) != len(rows):
        raise CycleDetectedError(_witness_cycle(rows, levels))

    concepts = {
        cid: FieldOfStudy(cid, rows[cid][0], rows[cid][1], rows[cid][2], levels[cid])
        for cid in sorted(rows)
    }
    return Taxonomy(concepts)


def _witness_cycle(
    rows: Mapping[str, tuple[str, str, tuple[str, ...]]], levels: Mapping[str, int]
) -> list[str]:
    # Walk unleveled parents until a repeat; the repeat closes the cycle.
    unprocessed = sorted(set(rows) - set(levels))
    start = unprocessed[0]
    seen: dict[str, int] = {}
    path = [start]
    seen[start] = 0
    current = start
    while True:
        nxt = next(p for p in rows[current][2] if p not in levels)
        if nxt in seen:
            return path[seen[nxt]:] + [nxt]
        seen[nxt] = len(path)
        path.append(nxt)
        current = nxt


def parse_taxonomy_file(path: str) -> list[tuple[str, str, str, tuple[str, ...]]]:
    """Parse the TSV format ``id<TAB>name<TAB>description<TAB>p1,p2,...``."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) == 3:  # trailing empty parents field
                parts.append("")
            if len(parts) != 4:
                raise TaxonomyInvalidError(
                    f"{path}:{lineno}: expected 4 tab-separated fields, got {len(parts)}"
                )
            fos_id, name, description, parents_field = parts
            parents = tuple(p for p in parents_field.split(",") if p)
            records.append((fos_id, name, description, parents))
    return records


def taxonomy_from_snapshot(snapshot: GraphSnapshot) -> Taxonomy:
    """Rebuild the taxonomy from FieldOfStudy nodes and CHILD_OF edges."""
    records = []
    for node in snapshot.nodes_of_kind(NodeKind.FIELD_OF_STUDY):
        parents = [p for p, _ in snapshot.neighbors(node.id, EdgeKind.CHILD_OF, "out")]
        records.append(
            (node.id, node.props.get("name", node.id), node.props.get("description", ""), parents)
        )
    return load_taxonomy(records)


def ancestors_at_level(taxonomy: Taxonomy, fos_id: str, level: int) -> frozenset[str]:
    """Nearest ancestors of ``fos_id`` at exactly ``level``.

    Expansion stops at the first concept of the target level along each
    parent chain, so ``ancestors_at_level(t, f, level(f)) == {f}``.
    """
    concept = taxonomy.get(fos_id)
    if not 0 <= level <= concept.level:
        raise LevelOutOfRangeError(
            f"level {level} out of range for {fos_id!r} (level {concept.level})"
        )
    return _ancestors(taxonomy, fos_id, level)


def _ancestors(taxonomy: Taxonomy, fos_id: str, level: int) -> frozenset[str]:
    cache = taxonomy._ancestor_cache
    key = (fos_id, level)
    hit = cache.get(key)
    if hit is not None:
        return hit
    concept = taxonomy.concepts[fos_id]
    if concept.level == level:
        result = frozenset({fos_id})
    else:
        found: set[str] = set()
        for p in concept.parents:
            found.update(_ancestors(taxonomy, p, level))
        result = frozenset(found)
    cache[key] = result
    return result


def rollup_distribution(
    taxonomy: Taxonomy,
    distribution: Mapping[str, float],
    level: int,
    normalize: bool = True,
) -> dict[str, float]:
    """Project a topic distribution onto taxonomy level ``level``.

    Each concept's weight is split equally over its ancestors at the
    target level; concepts shallower than the target level are dropped.
    With ``normalize=False`` the raw mass is returned (conserved over the
    kept inputs); otherwise the result is renormalized to sum 1.
    """
    if level < 0:
        raise LevelOutOfRangeError(f"level must be >= 0, got {level}")
    out: dict[str, float] = {}
    dropped = 0
    for fos_id in sorted(distribution):
        weight = distribution[fos_id]
        concept = taxonomy.get(fos_id)
        if concept.level < level:
            dropped += 1
            continue
        targets = sorted(_ancestors(taxonomy, fos_id, level))
        share = weight / len(targets)
        for t in targets:
            out[t] = out.get(t, 0.0) + share
    if dropped:
        log.debug("rollup to level %d dropped %d shallower concept(s)", level, dropped)
    if not normalize or not out:
        return out
    total = sum(out[k] for k in sorted(out))
    return {k: v / total for k, v in out.items()}


def shallower_than(taxonomy: Taxonomy, distribution: Mapping[str, float], level: int) -> list[str]:
    """Concept ids a roll-up to ``level`` would drop, ascending."""
    return sorted(f for f in distribution if taxonomy.get(f).level < level)
