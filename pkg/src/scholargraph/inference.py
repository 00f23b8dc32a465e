"""Topic distributions inferred transitively from publication tags.

A publication's distribution renormalizes its ABOUT scores; a researcher
averages the distributions of their tagged publications; an org unit
pools the distinct tagged publications of every researcher belonging to
it or to any unit transitively below it (a co-authored paper counts
once). All returned distributions are normalized to sum 1 or empty.
"""

from __future__ import annotations

from typing import Mapping

from .errors import CyclicOrgStructureError, LevelOutOfRangeError
from .graph import EdgeKind, GraphSnapshot, NodeId, NodeKind
from .taxonomy import Taxonomy, rollup_distribution

Distribution = "dict[str, float]"


def normalize(weights: Mapping[str, float]) -> dict[str, float]:
    """Rescale positive weights to sum 1; empty input stays empty."""
    kept = {k: w for k, w in weights.items() if w > 0.0}
    if not kept:
        return {}
    total = sum(kept[k] for k in sorted(kept))
    return {k: kept[k] / total for k in sorted(kept)}


def publication_distribution(snapshot: GraphSnapshot, pub_id: NodeId) -> dict[str, float]:
    scores = {
        fos: props["score"]
        for fos, props in snapshot.neighbors(pub_id, EdgeKind.ABOUT, "out")
    }
    return normalize(scores)


def _mean_distribution(distributions: list[dict[str, float]]) -> dict[str, float]:
    tagged = [d for d in distributions if d]
    if not tagged:
        return {}
    if len(tagged) == 1:  # mean of one is that distribution, bit for bit
        return dict(tagged[0])
    acc: dict[str, float] = {}
    for dist in tagged:
        for fos in sorted(dist):
            acc[fos] = acc.get(fos, 0.0) + dist[fos]
    n = len(tagged)
    return normalize({fos: w / n for fos, w in acc.items()})


def researcher_distribution(snapshot: GraphSnapshot, researcher_id: NodeId) -> dict[str, float]:
    """Unweighted mean over the researcher's tagged publications."""
    pub_ids = [p for p, _ in snapshot.neighbors(researcher_id, EdgeKind.AUTHORED, "out")]
    return _mean_distribution([publication_distribution(snapshot, p) for p in pub_ids])


def descendant_units(snapshot: GraphSnapshot, unit_id: NodeId) -> list[NodeId]:
    """The unit itself plus every unit transitively PART_OF it.

    Raises ``CyclicOrgStructureError`` if the PART_OF structure below the
    unit is cyclic (possible only for snapshots built outside the checked
    ingest path).
    """
    snapshot.node(unit_id)
    collected: set[NodeId] = set()
    stack = [(unit_id, frozenset({unit_id}))]
    while stack:
        current, on_path = stack.pop()
        collected.add(current)
        for child, _ in snapshot.neighbors(current, EdgeKind.PART_OF, "in"):
            if child in on_path:
                raise CyclicOrgStructureError(
                    f"PART_OF cycle through {child!r} below {unit_id!r}"
                )
            if child not in collected:
                stack.append((child, on_path | {child}))
    return sorted(collected)


def unit_distribution(snapshot: GraphSnapshot, unit_id: NodeId) -> dict[str, float]:
    """Mean over the distinct tagged publications of all transitive members."""
    researcher_ids: set[NodeId] = set()
    for uid in descendant_units(snapshot, unit_id):
        researcher_ids.update(
            r for r, _ in snapshot.neighbors(uid, EdgeKind.MEMBER_OF, "in")
        )
    pub_ids: set[NodeId] = set()
    for rid in sorted(researcher_ids):
        pub_ids.update(p for p, _ in snapshot.neighbors(rid, EdgeKind.AUTHORED, "out"))
    return _mean_distribution(
        [publication_distribution(snapshot, p) for p in sorted(pub_ids)]
    )


def compute_profiles(snapshot: GraphSnapshot) -> dict[NodeId, dict[str, float]]:
    """Topic distribution for every publication, researcher and org unit.

    Recomputed on each snapshot publish and cached inside the snapshot so
    reads stay O(1); empty distributions are stored explicitly.
    """
    profiles: dict[NodeId, dict[str, float]] = {}
    for node in snapshot.nodes_of_kind(NodeKind.PUBLICATION):
        profiles[node.id] = publication_distribution(snapshot, node.id)
    for node in snapshot.nodes_of_kind(NodeKind.RESEARCHER):
        profiles[node.id] = researcher_distribution(snapshot, node.id)
    for node in snapshot.nodes_of_kind(NodeKind.ORG_UNIT):
        profiles[node.id] = unit_distribution(snapshot, node.id)
    return profiles


def profile_of(snapshot: GraphSnapshot, entity_id: NodeId) -> dict[str, float]:
    """Cached distribution when present, otherwise computed from the graph."""
    if entity_id in snapshot.profiles:
        return snapshot.profiles[entity_id]
    kind = snapshot.node(entity_id).kind
    if kind == NodeKind.PUBLICATION:
        return publication_distribution(snapshot, entity_id)
    if kind == NodeKind.RESEARCHER:
        return researcher_distribution(snapshot, entity_id)
    if kind == NodeKind.ORG_UNIT:
        return unit_distribution(snapshot, entity_id)
    return {}


def top_concepts(
    distribution: Mapping[str, float],
    taxonomy: Taxonomy,
    level: int,
    k: int,
) -> list[tuple[str, float]]:
    """Strongest concepts of a distribution rolled up to ``level``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if level < 0:
        raise LevelOutOfRangeError(f"level must be >= 0, got {level}")
    rolled = rollup_distribution(taxonomy, distribution, level)
    ranked = sorted(rolled.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]
