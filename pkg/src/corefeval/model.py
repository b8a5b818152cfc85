"""Core domain types: documents, mentions and clusterings.

All types are immutable after construction and safe to share across
threads.  Structural problems that make a clustering unusable as a
partition (overlapping clusters, reused mention ids, mixed mention kinds)
are rejected at construction time; data-level problems (bad spans,
duplicate spans, unknown documents) are reported by
:func:`validate_clustering` so that callers can list every violation at
once instead of failing on the first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

EVENT = "event"
ENTITY = "entity"
KINDS = (EVENT, ENTITY)


class ClusteringError(ValueError):
    """A clustering is not a partition (structural, not data-level)."""


@dataclass(frozen=True)
class Token:
    """One token of a document.

    ``token_index`` is document-global and 0-based; sentence boundaries are
    carried by ``sentence_index`` only.
    """

    doc_id: str
    sentence_index: int
    token_index: int
    text: str

    def __post_init__(self):
        if not self.text:
            raise ValueError(f"empty token text at {self.doc_id}[{self.token_index}]")
        if self.sentence_index < 0 or self.token_index < 0:
            raise ValueError(f"negative index in token {self.doc_id}[{self.token_index}]")


@dataclass(frozen=True)
class Document:
    """A tokenized document assigned to one subtopic (and thus one topic)."""

    doc_id: str
    topic_id: str
    subtopic_id: str
    tokens: tuple[Token, ...]

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        prev_sentence = -1
        for i, tok in enumerate(self.tokens):
            if tok.token_index != i:
                raise ValueError(
                    f"token indices of {self.doc_id} not contiguous from 0: "
                    f"position {i} holds index {tok.token_index}")
            if tok.doc_id != self.doc_id:
                raise ValueError(f"token {tok.token_index} belongs to {tok.doc_id}, "
                                 f"not {self.doc_id}")
            if tok.sentence_index not in (prev_sentence, prev_sentence + 1):
                raise ValueError(
                    f"sentence indices of {self.doc_id} not contiguous from 0 "
                    f"at token {i}")
            prev_sentence = tok.sentence_index

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def sentence_count(self) -> int:
        return len({tok.sentence_index for tok in self.tokens})

    def span_text(self, start: int, end: int) -> str:
        """Space-joined token texts of the inclusive span [start, end]."""
        return " ".join(tok.text for tok in self.tokens[start:end + 1])


class Corpus:
    """An ordered document collection with topic/subtopic partitions."""

    def __init__(self, documents: Iterable[Document]):
        self.documents: tuple[Document, ...] = tuple(documents)
        by_id: dict[str, Document] = {}
        topics: dict[str, list[str]] = {}
        subtopics: dict[str, list[str]] = {}
        subtopic_topic: dict[str, str] = {}
        for doc in self.documents:
            if doc.doc_id in by_id:
                raise ValueError(f"duplicate doc_id {doc.doc_id!r}")
            by_id[doc.doc_id] = doc
            prev = subtopic_topic.setdefault(doc.subtopic_id, doc.topic_id)
            if prev != doc.topic_id:
                raise ValueError(
                    f"subtopic {doc.subtopic_id!r} assigned to topics "
                    f"{prev!r} and {doc.topic_id!r}")
            topics.setdefault(doc.topic_id, []).append(doc.doc_id)
            subtopics.setdefault(doc.subtopic_id, []).append(doc.doc_id)
        self._by_id = by_id
        self.topic_to_docs: Mapping[str, tuple[str, ...]] = MappingProxyType(
            {k: tuple(v) for k, v in topics.items()})
        self.subtopic_to_docs: Mapping[str, tuple[str, ...]] = MappingProxyType(
            {k: tuple(v) for k, v in subtopics.items()})

    def __len__(self) -> int:
        return len(self.documents)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._by_id

    def __getitem__(self, doc_id: str) -> Document:
        return self._by_id[doc_id]

    def get(self, doc_id: str) -> Document | None:
        return self._by_id.get(doc_id)

    def __eq__(self, other) -> bool:
        return isinstance(other, Corpus) and self.documents == other.documents

    def mention(self, mention_id: str, doc_id: str, start: int, end: int,
                kind: str) -> "Mention":
        """Build a mention with its surface text derived from this corpus."""
        doc = self._by_id[doc_id]
        return Mention(mention_id, doc_id, start, end, kind,
                       doc.span_text(max(start, 0), end))


@dataclass(frozen=True)
class Mention:
    """A token span in one document, identified by (doc_id, start, end).

    ``start`` and ``end`` are document-global token indices, both
    inclusive.  Two mentions with equal spans denote the same piece of
    text even if their ids differ; span identity is the alignment key
    between gold and system clusterings.
    """

    mention_id: str
    doc_id: str
    start: int
    end: int
    kind: str
    # derived convenience text; not part of mention identity
    surface: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown mention kind {self.kind!r}")

    @property
    def span(self) -> tuple[str, int, int]:
        return (self.doc_id, self.start, self.end)

    def span_equal(self, other: "Mention") -> bool:
        return self.span == other.span


@dataclass(frozen=True)
class Violation:
    """One violated invariant, located by the offending mention(s)."""

    code: str
    message: str


class Clustering:
    """A partition of a mention set into named, non-empty clusters.

    The constructor enforces the partition structure (disjoint non-empty
    clusters, unique mention ids, a single mention kind).  Span-level
    invariants are checked by :func:`validate_clustering` instead, so that
    a loaded-but-broken clustering can be inspected.
    """

    def __init__(self, clusters: Mapping[str, Iterable[Mention]]):
        cleaned: dict[str, frozenset[Mention]] = {}
        seen_ids: dict[str, str] = {}
        kinds = set()
        for cid, members in clusters.items():
            members = frozenset(members)
            if not members:
                raise ClusteringError(f"cluster {cid!r} is empty")
            for m in members:
                if m.mention_id in seen_ids:
                    raise ClusteringError(
                        f"mention id {m.mention_id!r} appears in clusters "
                        f"{seen_ids[m.mention_id]!r} and {cid!r}")
                seen_ids[m.mention_id] = cid
                kinds.add(m.kind)
            cleaned[cid] = members
        if len(kinds) > 1:
            raise ClusteringError(f"mixed mention kinds {sorted(kinds)} in one clustering")
        self._clusters: Mapping[str, frozenset[Mention]] = MappingProxyType(cleaned)
        self.kind: str | None = kinds.pop() if kinds else None
        self.mentions: frozenset[Mention] = frozenset(
            m for ms in cleaned.values() for m in ms)

    @property
    def clusters(self) -> Mapping[str, frozenset[Mention]]:
        return self._clusters

    def __len__(self) -> int:
        return len(self._clusters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Clustering) and self._clusters == other._clusters

    def spans(self) -> frozenset[tuple[str, int, int]]:
        return frozenset(m.span for m in self.mentions)

    def singleton_ids(self) -> list[str]:
        return [cid for cid, ms in self._clusters.items() if len(ms) == 1]

    def non_singleton_ids(self) -> list[str]:
        return [cid for cid, ms in self._clusters.items() if len(ms) > 1]


def validate_clustering(clustering: Clustering, corpus: Corpus) -> list[Violation]:
    """Check a clustering against a corpus; ok iff the result is empty.

    Reports every violation rather than stopping at the first: unknown
    documents, inverted spans, spans outside the document's token range
    and duplicate spans.
    """
    violations: list[Violation] = []
    by_span: dict[tuple[str, int, int], list[str]] = {}
    for mention in sorted(clustering.mentions, key=lambda m: m.mention_id):
        by_span.setdefault(mention.span, []).append(mention.mention_id)
        doc = corpus.get(mention.doc_id)
        if doc is None:
            violations.append(Violation(
                "unknown document",
                f"mention {mention.mention_id!r} references unknown document "
                f"{mention.doc_id!r}"))
            continue
        if mention.end < mention.start:
            violations.append(Violation(
                "inverted span",
                f"mention {mention.mention_id!r} has end {mention.end} < "
                f"start {mention.start}"))
        elif mention.start < 0 or mention.end >= len(doc):
            violations.append(Violation(
                "span out of range",
                f"mention {mention.mention_id!r} spans [{mention.start}, "
                f"{mention.end}] outside {mention.doc_id!r} "
                f"(0..{len(doc) - 1})"))
    for span, ids in sorted(by_span.items()):
        if len(ids) > 1:
            violations.append(Violation(
                "duplicate span",
                f"mentions {', '.join(ids)} share span "
                f"{span[0]}[{span[1]}:{span[2]}]"))
    return violations
