import pytest
from hypothesis import given, strategies as st

from scholargraph.errors import (
    DuplicateEdgeError,
    DuplicateIdError,
    InvalidScoreError,
    MissingEndpointError,
    SchemaViolationError,
    SnapshotMissingError,
    UnknownNodeError,
    UnknownPropertyKeyError,
)
from scholargraph.graph import (
    Edge,
    EdgeKind,
    GraphBuilder,
    GraphSnapshot,
    GraphStore,
    Node,
    NodeKind,
    validate_schema,
)


def small_graph() -> GraphBuilder:
    b = GraphBuilder()
    b.add_node(NodeKind.INSTITUTION, "inst", {"name": "Uni"})
    b.add_node(NodeKind.ORG_UNIT, "u1", {"name": "Unit One"})
    b.add_node(NodeKind.ORG_UNIT, "u2", {"name": "Unit Two"})
    b.add_node(NodeKind.RESEARCHER, "r1", {"name": "A"})
    b.add_node(NodeKind.PUBLICATION, "p1", {"title": "T", "year": 2020, "citations": 0})
    b.add_node(NodeKind.PUBLICATION, "p2", {"title": "U", "year": 2021, "citations": 3})
    b.add_node(NodeKind.FIELD_OF_STUDY, "f1", {"name": "Topic"})
    return b


def test_add_node_then_get():
    b = GraphBuilder()
    b.add_node(NodeKind.RESEARCHER, "r1", {"name": "A"})
    snap = b.commit()
    assert snap.node("r1").kind == NodeKind.RESEARCHER
    assert snap.node("r1").props == {"name": "A"}


def test_add_node_duplicate_id_rejected():
    b = GraphBuilder()
    b.add_node(NodeKind.RESEARCHER, "r1", {"name": "A"})
    with pytest.raises(DuplicateIdError):
        b.add_node(NodeKind.RESEARCHER, "r1", {"name": "B"})
    with pytest.raises(DuplicateIdError):
        b.add_node(NodeKind.PUBLICATION, "r1", {"title": "T"})


def test_publication_props_roundtrip():
    b = GraphBuilder()
    b.add_node(NodeKind.PUBLICATION, "p1", {"title": "T", "year": 2020, "citations": 0})
    node = b.commit().node("p1")
    assert node.props == {"title": "T", "year": 2020, "citations": 0}


def test_unknown_property_key_rejected():
    b = GraphBuilder()
    with pytest.raises(UnknownPropertyKeyError):
        b.add_node(NodeKind.RESEARCHER, "r1", {"name": "A", "salary": 1})


def test_add_edge_and_traverse_both_directions():
    b = small_graph()
    b.add_edge("r1", EdgeKind.AUTHORED, "p1")
    snap = b.commit()
    assert snap.neighbors("p1", EdgeKind.AUTHORED, "in") == [("r1", {})]
    assert snap.neighbors("r1", EdgeKind.AUTHORED, "out") == [("p1", {})]


def test_add_edge_reversed_endpoints_rejected():
    b = small_graph()
    with pytest.raises(SchemaViolationError):
        b.add_edge("p1", EdgeKind.AUTHORED, "r1")


def test_about_score_range():
    b = small_graph()
    with pytest.raises(InvalidScoreError):
        b.add_edge("p1", EdgeKind.ABOUT, "f1", {"score": 1.5})
    with pytest.raises(InvalidScoreError):
        b.add_edge("p1", EdgeKind.ABOUT, "f1", {"score": 0.0})
    with pytest.raises(InvalidScoreError):
        b.add_edge("p1", EdgeKind.ABOUT, "f1")
    b.add_edge("p1", EdgeKind.ABOUT, "f1", {"score": 1.0})


def test_non_about_edges_carry_no_props():
    b = small_graph()
    with pytest.raises(SchemaViolationError):
        b.add_edge("r1", EdgeKind.AUTHORED, "p1", {"score": 0.5})


def test_missing_endpoint():
    b = small_graph()
    with pytest.raises(MissingEndpointError):
        b.add_edge("r1", EdgeKind.AUTHORED, "p9")


def test_duplicate_edge_rejected():
    b = small_graph()
    b.add_edge("r1", EdgeKind.AUTHORED, "p1")
    with pytest.raises(DuplicateEdgeError):
        b.add_edge("r1", EdgeKind.AUTHORED, "p1")


def test_neighbors_isolated_node_empty():
    snap = small_graph().commit()
    assert snap.neighbors("r1", EdgeKind.AUTHORED, "out") == []
    assert snap.neighbors("r1", EdgeKind.MEMBER_OF, "in") == []


def test_neighbors_deterministic_order():
    b = small_graph()
    b.add_edge("r1", EdgeKind.AUTHORED, "p2")
    b.add_edge("r1", EdgeKind.AUTHORED, "p1")
    snap = b.commit()
    assert [n for n, _ in snap.neighbors("r1", EdgeKind.AUTHORED, "out")] == ["p1", "p2"]


def test_part_of_chain_direction_semantics():
    b = small_graph()
    b.add_edge("u1", EdgeKind.PART_OF, "u2")
    b.add_edge("u2", EdgeKind.PART_OF, "inst")
    snap = b.commit()
    assert [n for n, _ in snap.neighbors("u2", EdgeKind.PART_OF, "in")] == ["u1"]
    assert [n for n, _ in snap.neighbors("u2", EdgeKind.PART_OF, "out")] == ["inst"]


def test_neighbors_unknown_node():
    snap = small_graph().commit()
    with pytest.raises(UnknownNodeError):
        snap.neighbors("nope", EdgeKind.AUTHORED, "out")


def test_validate_schema_clean_on_checked_construction():
    b = small_graph()
    b.add_edge("r1", EdgeKind.AUTHORED, "p1")
    b.add_edge("p1", EdgeKind.ABOUT, "f1", {"score": 0.4})
    assert validate_schema(b.commit()) == []


def test_validate_schema_dangling_endpoint():
    snap = GraphSnapshot.from_parts(
        [Node("r1", NodeKind.RESEARCHER, {"name": "A"})],
        [Edge("r1", EdgeKind.AUTHORED, "ghost", {})],
        version=1,
    )
    report = validate_schema(snap)
    assert len(report) == 1
    assert report[0].code == "referential_integrity"


def test_validate_schema_wrong_endpoint_kind():
    snap = GraphSnapshot.from_parts(
        [
            Node("r1", NodeKind.RESEARCHER, {"name": "A"}),
            Node("f1", NodeKind.FIELD_OF_STUDY, {"name": "T"}),
        ],
        [Edge("r1", EdgeKind.CHILD_OF, "f1", {})],
        version=1,
    )
    report = validate_schema(snap)
    assert [v.code for v in report] == ["schema_violation"]


def test_store_swap_is_monotonic():
    store = GraphStore()
    with pytest.raises(SnapshotMissingError):
        store.current()
    first = GraphBuilder(base_version=store.base_version()).commit()
    store.publish(first)
    assert store.current().version == 1
    with pytest.raises(ValueError):
        store.publish(first)
    second = GraphBuilder(base_version=store.base_version()).commit()
    store.publish(second)
    assert store.current().version == 2


@given(
    edges=st.lists(
        st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(lambda t: t[0] != t[1]),
        max_size=12,
        unique=True,
    )
)
def test_neighbors_in_out_symmetry(edges):
    b = GraphBuilder()
    for i in range(6):
        b.add_node(NodeKind.PUBLICATION, f"p{i}", {"title": f"T{i}"})
    for i in range(6):
        b.add_node(NodeKind.FIELD_OF_STUDY, f"f{i}", {"name": f"F{i}"})
    for src, dst in edges:
        b.add_edge(f"p{src}", EdgeKind.ABOUT, f"f{dst}", {"score": 0.5})
    snap = b.commit()
    for src, dst in edges:
        outs = [n for n, _ in snap.neighbors(f"p{src}", EdgeKind.ABOUT, "out")]
        ins = [n for n, _ in snap.neighbors(f"f{dst}", EdgeKind.ABOUT, "in")]
        assert f"f{dst}" in outs
        assert f"p{src}" in ins
