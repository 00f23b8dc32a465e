"""Tagging publications with scored field-of-study concepts.

A concept is represented by its (boosted) name, its description, and the
names of its direct children; a publication by its (boosted) title and
abstract. Both sides are tf-idf weighted against their own corpus and a
publication keeps the ``top_k`` concepts whose cosine strictly exceeds
the threshold, most specific matches only (ancestor credit is applied at
query time by the taxonomy roll-up, never stored).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Mapping

from .errors import EmptyTaxonomyError, EmptyTitleError, UnknownConceptError
from .taxonomy import Taxonomy
from .text import (
    DEFAULT_STOPWORDS,
    Vocabulary,
    build_vocabulary,
    cosine_from_parts,
    dot,
    sq_norm,
    tokenize,
    weight_vector,
)


@dataclass(frozen=True)
class ClassifierConfig:
    threshold: float = 0.05
    top_k: int = 5
    title_boost: int = 2

    def __post_init__(self):
        if not 0.0 <= self.threshold < 1.0:
            raise ValueError(f"threshold must be in [0, 1), got {self.threshold}")
        if self.top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {self.top_k}")
        if self.title_boost < 1:
            raise ValueError(f"title_boost must be >= 1, got {self.title_boost}")

    def as_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "top_k": self.top_k,
            "title_boost": self.title_boost,
        }


@dataclass(frozen=True)
class FosScore:
    fos: str
    score: float


@dataclass(frozen=True)
class PublicationDoc:
    id: str
    title: str
    abstract: str = ""


def concept_tokens(
    fos_id: str,
    taxonomy: Taxonomy,
    cfg: ClassifierConfig,
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
) -> list[str]:
    concept = taxonomy.get(fos_id)
    tokens = tokenize(concept.name, stopwords) * cfg.title_boost
    tokens += tokenize(concept.description, stopwords)
    for child_id in taxonomy.children(fos_id):
        tokens += tokenize(taxonomy.concepts[child_id].name, stopwords)
    return tokens


def publication_tokens(
    doc: PublicationDoc,
    cfg: ClassifierConfig,
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
) -> list[str]:
    if not doc.title:
        raise EmptyTitleError(f"publication {doc.id!r} has an empty title")
    return tokenize(doc.title, stopwords) * cfg.title_boost + tokenize(doc.abstract, stopwords)


class ConceptSpace:
    """Weighted vectors for every taxonomy concept, plus a term index.

    The term index maps each term to the concepts whose vector contains
    it; a publication can only score above a threshold >= 0 against
    concepts it shares at least one term with, so scoring is restricted
    to that candidate set without changing any result.
    """

    def __init__(
        self,
        taxonomy: Taxonomy,
        cfg: ClassifierConfig | None = None,
        stopwords: frozenset[str] = DEFAULT_STOPWORDS,
    ):
        if len(taxonomy) == 0:
            raise EmptyTaxonomyError("cannot build concept vectors for an empty taxonomy")
        self.taxonomy = taxonomy
        self.cfg = cfg or ClassifierConfig()
        self.stopwords = stopwords
        ids = sorted(taxonomy.concepts)
        docs = [concept_tokens(cid, taxonomy, self.cfg, stopwords) for cid in ids]
        self.vocabulary = build_vocabulary(docs)
        self.vectors: dict[str, dict[str, float]] = {
            cid: weight_vector(tokens, self.vocabulary) for cid, tokens in zip(ids, docs)
        }
        self.sq_norms = {cid: sq_norm(vec) for cid, vec in self.vectors.items()}
        term_index: dict[str, set[str]] = {}
        for cid, vec in self.vectors.items():
            for term in vec:
                term_index.setdefault(term, set()).add(cid)
        self.term_index = term_index

    def concept_representation(self, fos_id: str) -> dict[str, float]:
        if fos_id not in self.vectors:
            raise UnknownConceptError(f"unknown concept {fos_id!r}")
        return self.vectors[fos_id]


def publication_representation(
    doc: PublicationDoc,
    vocab: Vocabulary,
    cfg: ClassifierConfig,
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
) -> dict[str, float]:
    return weight_vector(publication_tokens(doc, cfg, stopwords), vocab)


def classify_publication(
    doc: PublicationDoc,
    space: ConceptSpace,
    pub_vocab: Vocabulary,
    cfg: ClassifierConfig | None = None,
) -> list[FosScore]:
    """Scored concepts for one publication: score > threshold, top_k, sorted
    by descending score then ascending concept id."""
    cfg = cfg or space.cfg
    vec = publication_representation(doc, pub_vocab, cfg, space.stopwords)
    if not vec:
        return []
    pub_sq = sq_norm(vec)
    candidates: set[str] = set()
    for term in vec:
        candidates.update(space.term_index.get(term, ()))
    scored = []
    for cid in sorted(candidates):
        score = cosine_from_parts(
            dot(vec, space.vectors[cid]), pub_sq, space.sq_norms[cid]
        )
        if score > cfg.threshold:
            scored.append(FosScore(cid, score))
    scored.sort(key=lambda fs: (-fs.score, fs.fos))
    return scored[: cfg.top_k]


def classify_corpus(
    docs: Iterable[PublicationDoc],
    taxonomy: Taxonomy,
    cfg: ClassifierConfig | None = None,
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
) -> dict[str, list[FosScore]]:
    """Classify every publication against every concept, deterministically.

    Results are keyed and ordered by publication id; the corpus-wide
    publication vocabulary is built from all documents first.
    """
    cfg = cfg or ClassifierConfig()
    docs = sorted(docs, key=lambda d: d.id)
    space = ConceptSpace(taxonomy, cfg, stopwords)
    pub_vocab = build_vocabulary(publication_tokens(d, cfg, stopwords) for d in docs)
    return {d.id: classify_publication(d, space, pub_vocab, cfg) for d in docs}


def write_classification_report(
    out: IO[str], tags: Mapping[str, list[FosScore]], cfg: ClassifierConfig
) -> None:
    """Newline-delimited audit report: a config header, then one record
    per publication in id order."""
    out.write(json.dumps({"config": cfg.as_dict()}, sort_keys=True) + "\n")
    for pub_id in sorted(tags):
        record = {
            "publication": pub_id,
            "tags": [{"fos": fs.fos, "score": fs.score} for fs in tags[pub_id]],
        }
        out.write(json.dumps(record, sort_keys=True) + "\n")
