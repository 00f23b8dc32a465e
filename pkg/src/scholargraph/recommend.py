"""Similar-entity recommendations from topic profiles and shared tags.

Researcher, publication and unit similarity is the cosine between the
entities' inferred topic distributions (never organizational affiliation);
concept relatedness is the Jaccard overlap of tagged-publication sets,
annotated as a taxonomy sibling when the two concepts share a parent.
Entities with empty profiles yield no recommendations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownConceptError
from .graph import EdgeKind, GraphSnapshot, NodeId, NodeKind
from .inference import profile_of
from .taxonomy import Taxonomy
from .text import cosine

REASON_TOPIC = "topic-similarity"
REASON_SIBLING = "taxonomy-sibling"
REASON_COOCCURRENCE = "co-occurrence"


@dataclass(frozen=True)
class Recommendation:
    target: NodeId
    score: float
    reason: str


def _similar_by_profile(
    snapshot: GraphSnapshot, entity_id: NodeId, kind: NodeKind, k: int
) -> list[Recommendation]:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    profile = profile_of(snapshot, entity_id)
    if not profile:
        return []
    recs = []
    for node in snapshot.nodes_of_kind(kind):
        if node.id == entity_id:
            continue
        other = profile_of(snapshot, node.id)
        if not other:
            continue
        recs.append(Recommendation(node.id, cosine(profile, other), REASON_TOPIC))
    recs.sort(key=lambda r: (-r.score, r.target))
    return recs[:k]


def similar_researchers(snapshot: GraphSnapshot, researcher_id: NodeId, k: int) -> list[Recommendation]:
    snapshot.node(researcher_id)
    return _similar_by_profile(snapshot, researcher_id, NodeKind.RESEARCHER, k)


def tagged_publications(snapshot: GraphSnapshot, fos_id: NodeId) -> frozenset[NodeId]:
    if not snapshot.has_node(fos_id):
        return frozenset()
    return frozenset(p for p, _ in snapshot.neighbors(fos_id, EdgeKind.ABOUT, "in"))


def related_fos(
    snapshot: GraphSnapshot, taxonomy: Taxonomy, fos_id: NodeId, k: int
) -> list[Recommendation]:
    """Concepts ranked by Jaccard overlap of their tagged publications."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if fos_id not in taxonomy:
        raise UnknownConceptError(f"unknown concept {fos_id!r}")
    own_pubs = tagged_publications(snapshot, fos_id)
    own_parents = set(taxonomy.get(fos_id).parents)
    recs = []
    for other_id in sorted(taxonomy.concepts):
        if other_id == fos_id:
            continue
        other_pubs = tagged_publications(snapshot, other_id)
        union = own_pubs | other_pubs
        score = len(own_pubs & other_pubs) / len(union) if union else 0.0
        sibling = bool(own_parents & set(taxonomy.get(other_id).parents))
        reason = REASON_SIBLING if sibling else REASON_COOCCURRENCE
        recs.append(Recommendation(other_id, score, reason))
    recs.sort(key=lambda r: (-r.score, r.target))
    return recs[:k]


def related_content(
    snapshot: GraphSnapshot, taxonomy: Taxonomy, node_id: NodeId, k: int
) -> list[Recommendation]:
    """Kind-dispatched relatedness; institutions have no topical profile."""
    kind = snapshot.node(node_id).kind
    if kind == NodeKind.RESEARCHER:
        return similar_researchers(snapshot, node_id, k)
    if kind == NodeKind.FIELD_OF_STUDY:
        return related_fos(snapshot, taxonomy, node_id, k)
    if kind == NodeKind.PUBLICATION:
        return _similar_by_profile(snapshot, node_id, NodeKind.PUBLICATION, k)
    if kind == NodeKind.ORG_UNIT:
        return _similar_by_profile(snapshot, node_id, NodeKind.ORG_UNIT, k)
    return []
