"""Coreference metrics over mention clusterings.

All metrics align gold and system mentions by span, never by mention id,
so boundary errors count as missing plus spurious mentions.  Mentions
with no span twin on the other side are handled per metric: MUC treats
them as parts that break a cluster, B-cubed counts them in the averaging
denominator with zero overlap, CEAF and LEA simply find no intersection,
and a LEA singleton is resolved only if it is a singleton on both sides.

Conventions shared by every score: a ratio with denominator zero is 0,
and comparing two clusterings that both contain no mentions yields the
perfect score rather than 0/0.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from .model import Clustering, Mention

Span = tuple[str, int, int]


@dataclass(frozen=True)
class PRF:
    """A recall/precision/F1 triple on the [0, 1] scale."""

    recall: float
    precision: float
    f1: float

    @staticmethod
    def from_counts(r_num: float, r_den: float,
                    p_num: float, p_den: float) -> "PRF":
        r = r_num / r_den if r_den else 0.0
        p = p_num / p_den if p_den else 0.0
        f = 2.0 * r * p / (r + p) if r + p else 0.0
        return PRF(r, p, f)


PERFECT = PRF(1.0, 1.0, 1.0)


@dataclass(frozen=True)
class Assignment:
    """A one-to-one (partial) matching between matrix rows and columns."""

    pairs: tuple[tuple[int, int], ...]
    total_score: float


def solve_assignment(scores, maximize: bool = True) -> Assignment:
    """Optimal one-to-one matching over a dense score matrix.

    Rows and columns may stay unmatched, so when maximizing no pair with
    a negative score is ever used (and when minimizing, no pair with a
    positive cost).  Ties between optimal matchings are broken
    deterministically: scanning rows in increasing order, each row takes
    the smallest column compatible with optimality, unmatched ranking
    after any column.
    """
    raw = np.asarray(scores, dtype=np.float64)
    if raw.ndim != 2:
        raise ValueError("score matrix must be two-dimensional")
    if maximize:
        total, pairs = _backend.solve_dense(raw)
    else:
        neg_total, pairs = _backend.solve_dense(np.negative(raw))
        total = -neg_total
    return Assignment(tuple(pairs), total)


def mention_detection_prf(gold_mentions: Iterable[Mention],
                          system_mentions: Iterable[Mention]) -> PRF:
    """Span-level mention detection score; clusters and ids are ignored."""
    gold_spans = {m.span for m in gold_mentions}
    system_spans = {m.span for m in system_mentions}
    tp = len(gold_spans & system_spans)
    return PRF.from_counts(tp, len(gold_spans), tp, len(system_spans))


def muc_score(gold: Clustering, system: Clustering) -> PRF:
    """Link-based score counting how many cluster links survive.

    Each cluster contributes its size minus the number of parts the other
    clustering cuts it into; a mention absent from the other side is cut
    off as a part of its own.
    """
    _check_kinds(gold, system)
    if not gold.mentions and not system.mentions:
        return PERFECT
    g = _span_clusters(gold)
    s = _span_clusters(system)
    r_num, r_den = _muc_counts(g, _span_to_index(s))
    p_num, p_den = _muc_counts(s, _span_to_index(g))
    return PRF.from_counts(r_num, r_den, p_num, p_den)


def b3_score(gold: Clustering, system: Clustering) -> PRF:
    """Mention-averaged cluster overlap.

    Recall averages |own cluster ∩ other cluster| / |own cluster| over
    all gold mentions); precision swaps the roles.  A mention absent from
    the other side scores 0 but still counts in the average.
    """
    _check_kinds(gold, system)
    if not gold.mentions and not system.mentions:
        return PERFECT
    g = _span_clusters(gold)
    s = _span_clusters(system)
    r_num, r_den = _b3_counts(g, _span_to_members(s))
    p_num, p_den = _b3_counts(s, _span_to_members(g))
    return PRF.from_counts(r_num, r_den, p_num, p_den)


def ceaf_score(gold: Clustering, system: Clustering, phi: str = "e") -> PRF:
    """Best one-to-one cluster alignment score.

    ``phi="m"`` scores an aligned pair by its shared mention count,
    ``phi="e"`` by the size-normalized overlap 2|r∩k| / (|r|+|k|).  The
    alignment maximizes the total over all one-to-one cluster matchings.
    """
    if phi not in ("m", "e"):
        raise ValueError(f"unknown phi variant {phi!r}")
    _check_kinds(gold, system)
    if not gold.mentions and not system.mentions:
        return PERFECT
    g = _span_clusters(gold)
    s = _span_clusters(system)
    matrix = np.zeros((len(s), len(g)))
    gold_index = _span_to_index(g)
    for i, cluster in enumerate(s):
        overlap: Counter = Counter()
        for span in cluster:
            j = gold_index.get(span)
            if j is not None:
                overlap[j] += 1
        for j, inter in overlap.items():
            if phi == "m":
                matrix[i, j] = float(inter)
            else:
                matrix[i, j] = 2.0 * inter / (len(cluster) + len(g[j]))
    total = _backend.solve_dense(matrix)[0] if len(g) and len(s) else 0.0
    if phi == "m":
        r_den = sum(len(k) for k in g)
        p_den = sum(len(r) for r in s)
    else:
        r_den = len(g)
        p_den = len(s)
    return PRF.from_counts(total, r_den, total, p_den)


def lea_score(gold: Clustering, system: Clustering) -> PRF:
    """Link-based entity-aware score.

    A cluster of size n carries n(n-1)/2 links and is weighted by its
    size; its resolution is the fraction of links preserved in the other
    clustering.  A singleton carries one self-link, resolved only if the
    mention is a singleton on the other side too.
    """
    _check_kinds(gold, system)
    if not gold.mentions and not system.mentions:
        return PERFECT
    g = _span_clusters(gold)
    s = _span_clusters(system)
    r_num, r_den = _lea_counts(g, _span_to_index(s), _singleton_spans(s))
    p_num, p_den = _lea_counts(s, _span_to_index(g), _singleton_spans(g))
    return PRF.from_counts(r_num, r_den, p_num, p_den)


def conll_f1(muc: PRF, b3: PRF, ceafe: PRF) -> float:
    """Mean F1 of MUC, B-cubed and size-normalized CEAF."""
    return (muc.f1 + b3.f1 + ceafe.f1) / 3.0


def _check_kinds(gold: Clustering, system: Clustering) -> None:
    if gold.kind and system.kind and gold.kind != system.kind:
        raise ValueError(f"mention kind mismatch: gold has {gold.kind}, "
                         f"system has {system.kind}")


def _span_clusters(clustering: Clustering) -> list[frozenset]:
    """Clusters as span sets, ordered by cluster id for determinism."""
    return [frozenset(m.span for m in members)
            for _, members in sorted(clustering.clusters.items())]


def _span_to_index(clusters: Sequence[frozenset]) -> dict[Span, int]:
    return {span: i for i, cluster in enumerate(clusters) for span in cluster}


def _span_to_members(clusters: Sequence[frozenset]) -> dict[Span, frozenset]:
    return {span: cluster for cluster in clusters for span in cluster}


def _muc_counts(clusters, other_index):
    num = 0
    den = 0
    for cluster in clusters:
        parts = set()
        absent = 0
        for span in cluster:
            idx = other_index.get(span)
            if idx is None:
                absent += 1
            else:
                parts.add(idx)
        num += len(cluster) - len(parts) - absent
        den += len(cluster) - 1
    return num, den


def _b3_counts(clusters, other_members):
    num = 0.0
    den = 0
    for cluster in clusters:
        size = len(cluster)
        den += size
        for span in cluster:
            other = other_members.get(span)
            if other is not None:
                num += len(cluster & other) / size
    return num, den


def _singleton_spans(clusters) -> set[Span]:
    return {span for cluster in clusters if len(cluster) == 1
            for span in cluster}


def _lea_counts(clusters, other_index, other_singletons):
    num = 0.0
    den = 0
    for cluster in clusters:
        size = len(cluster)
        den += size
        if size == 1:
            span = next(iter(cluster))
            resolved = 1.0 if span in other_singletons else 0.0
        else:
            links = size * (size - 1) // 2
            located: Counter = Counter()
            for span in cluster:
                idx = other_index.get(span)
                if idx is not None:
                    located[idx] += 1
            hit = sum(c * (c - 1) // 2 for c in located.values())
            resolved = hit / links
        num += size * resolved
    return num, den
