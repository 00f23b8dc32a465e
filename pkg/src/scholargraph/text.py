"""Sparse term-vector text representations and cosine similarity.

Weights follow a smoothed tf-idf:

    weight(t) = (1 + ln(tf_t)) * ln((N + 1) / (df_t + 1) + 1)

with ``df_t = 0`` for unseen terms, so every weight is strictly positive.
All floating-point accumulations (norms, dot products) run in ascending
term order, which makes every similarity bit-reproducible regardless of
how the vectors were assembled.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import EmptyVocabularyError

TermVector = "dict[str, float]"

# Alphanumeric runs, Unicode-aware; underscore is a separator.
_TOKEN_RE = re.compile(r"[^\W_]+")

DEFAULT_STOPWORDS = frozenset(
    """
    a an and are as at be but by for from has have if in into is it its of on
    or such that the their then there these this to was were which will with we
    """.split()
)


def tokenize(text: str, stopwords: frozenset[str] = DEFAULT_STOPWORDS) -> list[str]:
    """Case-folded alphanumeric tokens, minimum length 2, stopwords removed."""
    return [
        t
        for t in _TOKEN_RE.findall(text.casefold())
        if len(t) >= 2 and t not in stopwords
    ]


def load_stopwords(path: str) -> frozenset[str]:
    """Read a stopword file: one token per line, UTF-8, blank lines ignored."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip().casefold() for line in fh if line.strip())


@dataclass(frozen=True)
class Vocabulary:
    doc_count: int
    doc_freq: dict[str, int]


def build_vocabulary(docs: Iterable[Sequence[str]]) -> Vocabulary:
    """Document frequencies over tokenized documents (presence, not multiplicity)."""
    doc_freq: Counter[str] = Counter()
    doc_count = 0
    for tokens in docs:
        doc_count += 1
        doc_freq.update(set(tokens))
    return Vocabulary(doc_count=doc_count, doc_freq=dict(doc_freq))


def weight_vector(tokens: Sequence[str], vocab: Vocabulary) -> dict[str, float]:
    """Smoothed tf-idf vector over ``tokens``; entries in ascending term order."""
    if vocab.doc_count < 1:
        raise EmptyVocabularyError("cannot weight terms against an empty vocabulary")
    counts = Counter(tokens)
    n = vocab.doc_count
    return {
        t: (1.0 + math.log(tf)) * math.log((n + 1) / (vocab.doc_freq.get(t, 0) + 1) + 1.0)
        for t, tf in sorted(counts.items())
    }


def sq_norm(vec: Mapping[str, float]) -> float:
    """Squared Euclidean norm, accumulated in ascending term order."""
    total = 0.0
    for t in sorted(vec):
        w = vec[t]
        total += w * w
    return total


def dot(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    """Dot product over shared terms, accumulated in ascending term order."""
    if len(b) < len(a):
        a, b = b, a
    total = 0.0
    for t in sorted(a):
        w = b.get(t)
        if w is not None:
            total += a[t] * w
    return total


def cosine_from_parts(dot_ab: float, sq_a: float, sq_b: float) -> float:
    if sq_a == 0.0 or sq_b == 0.0:
        return 0.0
    return min(1.0, dot_ab / math.sqrt(sq_a * sq_b))


def cosine(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    """Cosine similarity in [0, 1]; 0 if either vector is empty."""
    if not a or not b:
        return 0.0
    return cosine_from_parts(dot(a, b), sq_norm(a), sq_norm(b))
