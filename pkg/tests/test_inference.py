import pytest

import oracles
from scholargraph.errors import CyclicOrgStructureError, LevelOutOfRangeError
from scholargraph.graph import Edge, EdgeKind, GraphBuilder, GraphSnapshot, Node, NodeKind
from scholargraph.inference import (
    publication_distribution,
    researcher_distribution,
    top_concepts,
    unit_distribution,
)


def build_institution(memberships, authorships, tags):
    """memberships: researcher -> [unit]; authorships: pub -> [researcher];
    tags: pub -> {fos: score}. Units u1, u2 under u0."""
    b = GraphBuilder()
    b.add_node(NodeKind.ORG_UNIT, "u0", {"name": "Top"})
    b.add_node(NodeKind.ORG_UNIT, "u1", {"name": "One"})
    b.add_node(NodeKind.ORG_UNIT, "u2", {"name": "Two"})
    b.add_edge("u1", EdgeKind.PART_OF, "u0")
    b.add_edge("u2", EdgeKind.PART_OF, "u0")
    for fos in sorted({f for scores in tags.values() for f in scores}):
        b.add_node(NodeKind.FIELD_OF_STUDY, fos, {"name": fos})
    for rid, units in sorted(memberships.items()):
        b.add_node(NodeKind.RESEARCHER, rid, {"name": rid})
        for uid in units:
            b.add_edge(rid, EdgeKind.MEMBER_OF, uid)
    for pid, authors in sorted(authorships.items()):
        b.add_node(NodeKind.PUBLICATION, pid, {"title": pid})
        for rid in authors:
            b.add_edge(rid, EdgeKind.AUTHORED, pid)
        for fos, score in sorted(tags.get(pid, {}).items()):
            b.add_edge(pid, EdgeKind.ABOUT, fos, {"score": score})
    return b.commit()


def test_publication_distribution_renormalizes():
    snap = build_institution({"r": ["u1"]}, {"p": ["r"]}, {"p": {"f1": 0.4, "f2": 0.4}})
    assert publication_distribution(snap, "p") == {"f1": 0.5, "f2": 0.5}


def test_publication_single_tag_normalizes_to_one():
    snap = build_institution({"r": ["u1"]}, {"p": ["r"]}, {"p": {"f1": 0.7}})
    assert publication_distribution(snap, "p") == {"f1": 1.0}


def test_untagged_publication_empty():
    snap = build_institution({"r": ["u1"]}, {"p": ["r"]}, {})
    assert publication_distribution(snap, "p") == {}


def test_researcher_single_publication_identity():
    snap = build_institution(
        {"r": ["u1"]}, {"p": ["r"]}, {"p": {"f1": 0.3, "f2": 0.1}}
    )
    assert researcher_distribution(snap, "r") == publication_distribution(snap, "p")


def test_researcher_mean_of_two():
    snap = build_institution(
        {"r": ["u1"]},
        {"p1": ["r"], "p2": ["r"]},
        {"p1": {"f1": 0.9}, "p2": {"f2": 0.2}},
    )
    dist = researcher_distribution(snap, "r")
    assert dist == pytest.approx({"f1": 0.5, "f2": 0.5})


def test_researcher_without_tagged_publications_empty():
    snap = build_institution({"r": ["u1"]}, {"p": ["r"]}, {})
    assert researcher_distribution(snap, "r") == {}


def test_unit_degenerate_pooling_equals_member():
    snap = build_institution({"r": ["u1"]}, {"p": ["r"]}, {"p": {"f1": 0.4, "f2": 0.2}})
    assert unit_distribution(snap, "u1") == researcher_distribution(snap, "r")


def test_coauthored_publication_counts_once():
    snap = build_institution(
        {"r1": ["u1"], "r2": ["u1"]},
        {"p1": ["r1", "r2"], "p2": ["r1"]},
        {"p1": {"f1": 0.5}, "p2": {"f2": 0.5}},
    )
    # Pooled over {p1, p2}, not over per-researcher copies of p1.
    assert unit_distribution(snap, "u1") == pytest.approx({"f1": 0.5, "f2": 0.5})


def test_unit_pooling_is_transitive():
    snap = build_institution(
        {"r1": ["u1"], "r2": ["u2"]},
        {"p1": ["r1"], "p2": ["r2"]},
        {"p1": {"f1": 1.0}, "p2": {"f2": 1.0}},
    )
    assert unit_distribution(snap, "u0") == pytest.approx({"f1": 0.5, "f2": 0.5})


def test_wrapping_unit_preserves_distribution():
    snap = build_institution({"r": ["u1"]}, {"p": ["r"]}, {"p": {"f1": 1.0}})
    assert unit_distribution(snap, "u0") == unit_distribution(snap, "u1")


def test_cyclic_org_structure_detected():
    nodes = [
        Node("u1", NodeKind.ORG_UNIT, {"name": "One"}),
        Node("u2", NodeKind.ORG_UNIT, {"name": "Two"}),
    ]
    edges = [
        Edge("u1", EdgeKind.PART_OF, "u2", {}),
        Edge("u2", EdgeKind.PART_OF, "u1", {}),
    ]
    snap = GraphSnapshot.from_parts(nodes, edges, version=1)
    with pytest.raises(CyclicOrgStructureError):
        unit_distribution(snap, "u1")


def test_fixture_researchers_match_oracle(pipeline):
    expected = oracles.researcher_profiles(pipeline.snapshot)
    for rid, dist in expected.items():
        actual = researcher_distribution(pipeline.snapshot, rid)
        assert set(actual) == set(dist)
        for fos in dist:
            assert actual[fos] == pytest.approx(dist[fos], abs=1e-9)
        assert pipeline.snapshot.profiles[rid] == actual


def test_fixture_units_match_oracle(pipeline):
    expected = oracles.unit_profiles(pipeline.snapshot)
    for uid, dist in expected.items():
        actual = unit_distribution(pipeline.snapshot, uid)
        assert set(actual) == set(dist)
        for fos in dist:
            assert actual[fos] == pytest.approx(dist[fos], abs=1e-9)


def test_all_profiles_normalized(pipeline):
    for dist in pipeline.snapshot.profiles.values():
        if dist:
            assert abs(sum(dist.values()) - 1.0) <= 1e-9
            assert all(w > 0 for w in dist.values())


def test_profiles_independent_of_ingestion_order(pipeline):
    # Rebuild the same graph with reversed insertion order of publications.
    snap = pipeline.snapshot
    nodes = list(snap.nodes.values())
    edges = list(snap.edges)
    reordered = GraphSnapshot.from_parts(reversed(nodes), reversed(edges), snap.version)
    for rid in ("r-alva", "r-gupta", "r-horn"):
        assert researcher_distribution(reordered, rid) == researcher_distribution(snap, rid)


def test_top_concepts_diamond(diamond):
    ranked = top_concepts({"c": 1.0}, diamond, 1, 2)
    assert ranked == [("a", 0.5), ("b", 0.5)]


def test_top_concepts_k_larger_than_support(diamond):
    assert top_concepts({"a": 1.0}, diamond, 1, 10) == [("a", 1.0)]


def test_top_concepts_level_validation(diamond):
    with pytest.raises(LevelOutOfRangeError):
        top_concepts({"a": 1.0}, diamond, -1, 2)
    with pytest.raises(ValueError):
        top_concepts({"a": 1.0}, diamond, 1, 0)


def test_top_concepts_matches_rollup_of_mean(pipeline):
    expected_profiles = oracles.researcher_profiles(pipeline.snapshot)
    dist = expected_profiles["r-baier"]
    rolled = oracles.rollup_by_paths(pipeline.taxonomy_records, dist, 1)
    expected = sorted(rolled.items(), key=lambda kv: (-kv[1], kv[0]))[:3]
    actual = top_concepts(
        researcher_distribution(pipeline.snapshot, "r-baier"), pipeline.taxonomy, 1, 3
    )
    assert [fos for fos, _ in actual] == [fos for fos, _ in expected]
    for (_, got), (_, want) in zip(actual, expected):
        assert got == pytest.approx(want, abs=1e-9)
