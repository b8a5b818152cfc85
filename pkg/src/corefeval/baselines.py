"""Deterministic reference systems.

The singleton baseline puts every mention alone; the lexical scorer plus
threshold agglomerative clustering forms a complete learned-component-free
pipeline over a pairwise score matrix (externally supplied scores can
replace the lexical ones); document clustering groups documents by
TF-IDF cosine similarity.  Everything here is deterministic, including
every tie-break.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from operator import attrgetter
from typing import Iterable

import numpy as np

from . import _backend
from .ingest import ScoreMatrix
from .model import Clustering, Corpus, Mention

LINKAGES = ("average", "single", "complete")


@dataclass(frozen=True)
class AggloConfig:
    """Threshold and linkage rule for agglomerative clustering."""

    tau: float = 0.5
    linkage: str = "average"

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau {self.tau!r} outside [0, 1]")
        if self.linkage not in LINKAGES:
            raise ValueError(f"unknown linkage {self.linkage!r}")


def singleton_baseline(mentions: Iterable[Mention]) -> Clustering:
    """One cluster per mention, named after the mention id."""
    return Clustering({m.mention_id: [m] for m in mentions})


def _normalize(surface: str) -> str:
    return " ".join(surface.lower().split())


def _trigrams(text: str) -> Counter:
    return Counter(text[i:i + 3] for i in range(len(text) - 2))


def trigram_dice(a: str, b: str) -> float:
    """Dice coefficient over character-trigram multisets.

    Surfaces are lowercased and whitespace-normalized first; strings too
    short for a trigram fall back to exact equality (1 or 0).
    """
    a = _normalize(a)
    b = _normalize(b)
    if len(a) < 3 or len(b) < 3:
        return 1.0 if a == b else 0.0
    ta = _trigrams(a)
    tb = _trigrams(b)
    shared = sum((ta & tb).values())
    return 2.0 * shared / (sum(ta.values()) + sum(tb.values()))


def lexical_pair_scorer(mentions: Iterable[Mention]) -> ScoreMatrix:
    """Score every mention pair by surface trigram overlap."""
    ordered = sorted(mentions, key=attrgetter("mention_id"))
    entries = {}
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            score = trigram_dice(a.surface, b.surface)
            if score > 0.0:
                entries[(a.mention_id, b.mention_id)] = score
    return ScoreMatrix(entries)


def agglomerative_cluster(mentions: Iterable[Mention], scores: ScoreMatrix,
                          cfg: AggloConfig = AggloConfig()) -> Clustering:
    """Merge mention clusters bottom-up while the best linkage is >= tau.

    Starts from singletons; pairs without a score entry score 0.  Ties on
    the best linkage are broken toward the lexicographically smallest
    (mention_id, mention_id) pair of cluster representatives, a cluster
    being represented by its smallest member id.  Each output cluster is
    named after its smallest member id.
    """
    ordered = sorted(mentions, key=attrgetter("mention_id"))
    n = len(ordered)
    sim = np.zeros((n, n))
    for i, a in enumerate(ordered):
        for j in range(i + 1, n):
            score = scores.get(a.mention_id, ordered[j].mention_id)
            sim[i, j] = sim[j, i] = score
    labels = _backend.agglomerate(
        sim, np.arange(n), _backend.LINKAGE_CODES[cfg.linkage], cfg.tau, 1)
    clusters: dict[int, list[Mention]] = {}
    for i, label in enumerate(labels):
        clusters.setdefault(int(label), []).append(ordered[i])
    return Clustering({min(ms, key=attrgetter("mention_id")).mention_id: ms
                       for ms in clusters.values()})


def cluster_documents(corpus: Corpus, k: int) -> list[tuple[str, ...]]:
    """Partition documents into exactly k groups.

    TF-IDF vectors over lowercased tokens, cosine similarity, average
    linkage, merging until k clusters remain; ties break by doc_id.
    Returns sorted doc_id tuples, ordered by first member.
    """
    n = len(corpus)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range for {n} documents")
    docs = sorted(corpus.documents, key=attrgetter("doc_id"))
    counts = [Counter(tok.text.lower() for tok in doc.tokens) for doc in docs]
    df = Counter(term for c in counts for term in c)
    vocabulary = {term: i for i, term in enumerate(sorted(df))}
    vectors = np.zeros((n, len(vocabulary)))
    for row, c in enumerate(counts):
        for term, tf in c.items():
            vectors[row, vocabulary[term]] = tf * math.log(n / df[term])
    norms = np.linalg.norm(vectors, axis=1)
    nonzero = norms > 0.0
    vectors[nonzero] /= norms[nonzero, None]
    sim = vectors @ vectors.T
    labels = _backend.agglomerate(sim, np.arange(n),
                                  _backend.LINKAGE_CODES["average"],
                                  -math.inf, k)
    groups: dict[int, list[str]] = {}
    for i, label in enumerate(labels):
        groups.setdefault(int(label), []).append(docs[i].doc_id)
    return sorted((tuple(sorted(ids)) for ids in groups.values()),
                  key=lambda t: t[0])
