import pytest

import oracles
from scholargraph.classify import (
    ClassifierConfig,
    ConceptSpace,
    PublicationDoc,
    classify_corpus,
    classify_publication,
    concept_tokens,
    publication_representation,
    publication_tokens,
)
from scholargraph.errors import EmptyTaxonomyError, EmptyTitleError, UnknownConceptError
from scholargraph.taxonomy import Taxonomy, load_taxonomy
from scholargraph.text import DEFAULT_STOPWORDS, build_vocabulary, tokenize


@pytest.fixture(scope="module")
def tiny_taxonomy() -> Taxonomy:
    return load_taxonomy(
        [
            ("t-root", "Science", "", []),
            ("t-ml", "Machine Learning", "statistical models trained from data", ["t-root"]),
            ("t-dl", "Deep Learning", "neural networks with many layers", ["t-ml"]),
            ("t-bot", "Robotics", "actuators sensors and control loops", ["t-root"]),
        ]
    )


def test_concept_tokens_name_only():
    t = load_taxonomy([("x", "Quantum Computing", "", [])])
    cfg = ClassifierConfig(title_boost=2)
    assert concept_tokens("x", t, cfg) == ["quantum", "computing"] * 2


def test_concept_tokens_includes_children(tiny_taxonomy):
    cfg = ClassifierConfig()
    tokens = concept_tokens("t-ml", tiny_taxonomy, cfg)
    assert set(tokens) >= set(tokenize("Machine Learning Deep"))
    assert "deep" in tokens and "learning" in tokens


def test_identical_concepts_get_identical_vectors():
    t = load_taxonomy(
        [("a", "Graph Mining", "patterns in graphs", []), ("b", "Graph Mining", "patterns in graphs", [])]
    )
    space = ConceptSpace(t)
    assert space.vectors["a"] == space.vectors["b"]


def test_publication_tokens_title_boost():
    cfg = ClassifierConfig(title_boost=2)
    doc = PublicationDoc("p", "ranking", "ranking methods")
    tokens = publication_tokens(doc, cfg)
    assert tokens.count("ranking") == 3
    assert tokens.count("methods") == 1


def test_publication_title_only():
    cfg = ClassifierConfig()
    doc = PublicationDoc("p", "Convex Duality")
    vocab = build_vocabulary([publication_tokens(doc, cfg)])
    vec = publication_representation(doc, vocab, cfg)
    assert set(vec) == {"convex", "duality"}


def test_empty_title_rejected():
    with pytest.raises(EmptyTitleError):
        publication_tokens(PublicationDoc("p", ""), ClassifierConfig())


def test_publication_vector_matches_tfidf_oracle(pipeline):
    cfg = pipeline.config.classifier
    docs = _fixture_docs(pipeline)
    all_tokens = {d.id: publication_tokens(d, cfg) for d in docs}
    vocab = build_vocabulary(all_tokens[d.id] for d in docs)
    doc = next(d for d in docs if d.id == "p-010")
    vec = publication_representation(doc, vocab, cfg)
    expected = oracles.tfidf(all_tokens["p-010"], vocab.doc_count, vocab.doc_freq)
    assert set(vec) == set(expected)
    for term in expected:
        assert vec[term] == pytest.approx(expected[term], abs=1e-12)


def test_classifier_config_validation():
    with pytest.raises(ValueError):
        ClassifierConfig(threshold=1.0)
    with pytest.raises(ValueError):
        ClassifierConfig(top_k=0)
    with pytest.raises(ValueError):
        ClassifierConfig(title_boost=0)


def test_disjoint_publication_gets_no_tags(tiny_taxonomy):
    cfg = ClassifierConfig()
    docs = [PublicationDoc("p1", "medieval castles", "fortifications and moats")]
    tags = classify_corpus(docs, tiny_taxonomy, cfg)
    assert tags == {"p1": []}


def test_identical_text_scores_one():
    # Flat taxonomy so no other concept shares a term (a child's name is
    # folded into its parents' representation, so disjointness needs roots).
    taxonomy = load_taxonomy(
        [
            ("t-bot", "Robotics", "actuators sensors control loops", []),
            ("t-glass", "Glassblowing", "furnaces molten glass blowpipe", []),
        ]
    )
    docs = [PublicationDoc("p1", "Robotics", "actuators sensors control loops")]
    tags = classify_corpus(docs, taxonomy, ClassifierConfig())
    assert [(fs.fos, fs.score) for fs in tags["p1"]] == [("t-bot", 1.0)]


def test_empty_taxonomy_rejected():
    with pytest.raises(EmptyTaxonomyError):
        ConceptSpace(load_taxonomy([]))


def test_unknown_concept_representation(tiny_taxonomy):
    with pytest.raises(UnknownConceptError):
        ConceptSpace(tiny_taxonomy).concept_representation("zz")


def _fixture_docs(pipeline):
    from scholargraph.graph import NodeKind

    return [
        PublicationDoc(n.id, n.props["title"], n.props.get("abstract", ""))
        for n in pipeline.snapshot.nodes_of_kind(NodeKind.PUBLICATION)
    ]


def test_fixture_corpus_equals_all_pairs_oracle(pipeline):
    cfg = pipeline.config.classifier
    tags = classify_corpus(_fixture_docs(pipeline), pipeline.taxonomy, cfg)
    expected = oracles.classify_all_pairs(
        _fixture_docs(pipeline),
        pipeline.taxonomy_records,
        cfg.threshold,
        cfg.top_k,
        cfg.title_boost,
        DEFAULT_STOPWORDS,
    )
    assert set(tags) == set(expected)
    for pid in tags:
        assert [(fs.fos, fs.score) for fs in tags[pid]] == expected[pid]


def test_output_sorted_and_bounded(pipeline):
    cfg = pipeline.config.classifier
    tags = classify_corpus(_fixture_docs(pipeline), pipeline.taxonomy, cfg)
    for scored in tags.values():
        assert len(scored) <= cfg.top_k
        for a, b in zip(scored, scored[1:]):
            assert a.score > b.score or (a.score == b.score and a.fos < b.fos)
        assert all(fs.score > cfg.threshold for fs in scored)


def test_threshold_monotonicity(pipeline):
    docs = _fixture_docs(pipeline)
    low = classify_corpus(docs, pipeline.taxonomy, ClassifierConfig(threshold=0.05))
    high = classify_corpus(docs, pipeline.taxonomy, ClassifierConfig(threshold=0.2))
    for pid in low:
        assert {fs.fos for fs in high[pid]} <= {fs.fos for fs in low[pid]}


def test_top_k_monotonicity(pipeline):
    docs = _fixture_docs(pipeline)
    small = classify_corpus(docs, pipeline.taxonomy, ClassifierConfig(top_k=3))
    large = classify_corpus(docs, pipeline.taxonomy, ClassifierConfig(top_k=6))
    for pid in small:
        assert [fs.fos for fs in small[pid]] == [fs.fos for fs in large[pid]][: len(small[pid])]


def test_determinism(pipeline):
    docs = _fixture_docs(pipeline)
    cfg = pipeline.config.classifier
    first = classify_corpus(docs, pipeline.taxonomy, cfg)
    second = classify_corpus(list(reversed(docs)), pipeline.taxonomy, cfg)
    assert first == second
