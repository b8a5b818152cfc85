"""File formats and corpus statistics.

Three flat, diffable text formats, all UTF-8 with LF line endings and a
trailing newline:

* corpus: one JSON record per line with fields ``doc_id``, ``topic_id``,
  ``subtopic_id`` and ``sentences`` (a list of token lists);
* clustering: one mention per line, tab-separated ``mention_id  doc_id
  start  end  cluster_id``; a missing, empty or ``-`` cluster id makes
  the mention a singleton cluster of its own;
* pairwise scores: tab-separated ``mention_id  mention_id  score`` with
  ``#`` comment lines; absent pairs score 0 and on duplicate pairs the
  last line wins.

Writers emit fields in canonical order and sort lines, so write∘parse
and parse∘write are identities on valid inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from .model import (
    KINDS,
    Clustering,
    ClusteringError,
    Corpus,
    Document,
    Mention,
    Token,
    Violation,
    validate_clustering,
)


class ParseError(ValueError):
    """A file could not be parsed or failed validation.

    ``line`` is 1-based when the problem is located on one line, None for
    whole-file problems.  Validation problems carry the individual
    ``violations`` so callers can list them one by one.
    """

    def __init__(self, path, line: int | None, problem: str,
                 violations: list[Violation] = ()):
        at = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{at}: {problem}")
        self.path = str(path)
        self.line = line
        self.violations = list(violations)


# ---- corpus ----

_DOC_FIELDS = ("doc_id", "topic_id", "subtopic_id", "sentences")


def parse_corpus(path) -> Corpus:
    """Load a corpus file; deterministic and order-preserving."""
    documents = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no,
                                 f"bad document record: {exc}") from exc
            documents.append(_document(record, path, line_no))
    if not documents:
        raise ParseError(path, None, "no documents")
    try:
        return Corpus(documents)
    except ValueError as exc:
        raise ParseError(path, None, str(exc)) from exc


def _document(record, path, line_no) -> Document:
    if not isinstance(record, dict):
        raise ParseError(path, line_no, "document record must be an object")
    missing = [k for k in _DOC_FIELDS if k not in record]
    if missing:
        raise ParseError(path, line_no, f"missing fields: {', '.join(missing)}")
    extra = [k for k in record if k not in _DOC_FIELDS]
    if extra:
        raise ParseError(path, line_no, f"unknown fields: {', '.join(extra)}")
    doc_id = record["doc_id"]
    sentences = record["sentences"]
    if not all(isinstance(record[k], str) for k in _DOC_FIELDS[:3]):
        raise ParseError(path, line_no, "ids must be strings")
    if not isinstance(sentences, list):
        raise ParseError(path, line_no, "sentences must be a list")
    tokens = []
    for s, sentence in enumerate(sentences):
        if not isinstance(sentence, list) or not sentence:
            raise ParseError(path, line_no, f"sentence {s} must be a "
                             "non-empty token list")
        for word in sentence:
            if not isinstance(word, str):
                raise ParseError(path, line_no, f"token {word!r} is not a string")
            try:
                tokens.append(Token(doc_id, s, len(tokens), word))
            except ValueError as exc:
                raise ParseError(path, line_no, str(exc)) from exc
    try:
        return Document(doc_id, record["topic_id"], record["subtopic_id"],
                        tuple(tokens))
    except ValueError as exc:
        raise ParseError(path, line_no, str(exc)) from exc


def write_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for doc in corpus.documents:
            sentences: list[list[str]] = []
            for tok in doc.tokens:
                if tok.sentence_index == len(sentences):
                    sentences.append([])
                sentences[tok.sentence_index].append(tok.text)
            record = {
                "doc_id": doc.doc_id,
                "topic_id": doc.topic_id,
                "subtopic_id": doc.subtopic_id,
                "sentences": sentences,
            }
            handle.write(json.dumps(record, ensure_ascii=False,
                                    separators=(",", ":")) + "\n")


# ---- clusterings ----

def parse_clustering(path, corpus: Corpus, kind: str) -> Clustering:
    """Load a clustering file and validate it against the corpus."""
    if kind not in KINDS:
        raise ValueError(f"unknown mention kind {kind!r}")
    clusters: dict[str, list[Mention]] = {}
    singleton_ids: list[str] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) not in (4, 5):
                raise ParseError(path, line_no,
                                 f"expected 4 or 5 fields, got {len(fields)}")
            mention_id, doc_id = fields[0], fields[1]
            if not mention_id:
                raise ParseError(path, line_no, "empty mention_id")
            try:
                start, end = int(fields[2]), int(fields[3])
            except ValueError as exc:
                raise ParseError(path, line_no,
                                 f"bad span bounds: {exc}") from exc
            cluster_id = fields[4] if len(fields) == 5 else ""
            if doc_id in corpus:
                mention = corpus.mention(mention_id, doc_id, start, end, kind)
            else:
                mention = Mention(mention_id, doc_id, start, end, kind)
            if cluster_id in ("", "-"):
                singleton_ids.append(mention_id)
                cluster_id = mention_id
            clusters.setdefault(cluster_id, []).append(mention)
    for mention_id in singleton_ids:
        if len(clusters[mention_id]) > 1:
            raise ParseError(path, None,
                             f"singleton cluster id {mention_id!r} collides "
                             "with an explicit cluster id")
    try:
        clustering = Clustering(clusters)
    except ClusteringError as exc:
        raise ParseError(path, None, str(exc)) from exc
    violations = validate_clustering(clustering, corpus)
    if violations:
        raise ParseError(path, None,
                         "; ".join(v.message for v in violations), violations)
    return clustering


def _tsv_safe(value: str) -> str:
    if any(c in value for c in "\t\n\r"):
        raise ValueError(f"{value!r} is not representable in a "
                         "tab-separated file")
    return value


def clustering_text(clustering: Clustering) -> str:
    """The clustering's 5-column tab-separated serialization, rows sorted."""
    rows = []
    for cluster_id, members in clustering.clusters.items():
        for m in members:
            rows.append((_tsv_safe(m.mention_id), _tsv_safe(m.doc_id),
                         str(m.start), str(m.end), _tsv_safe(cluster_id)))
    rows.sort()
    return "".join("\t".join(row) + "\n" for row in rows)


def write_clustering(clustering: Clustering, path) -> None:
    text = clustering_text(clustering)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


# ---- pairwise scores ----

class ScoreMatrix:
    """Symmetric pairwise scores keyed by unordered mention-id pairs.

    Scores live in [0, 1]; a pair without an entry scores 0.  Self-pairs
    are rejected.
    """

    def __init__(self, entries=()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        data: dict[tuple[str, str], float] = {}
        for (a, b), score in items:
            data[self._key(a, b)] = self._checked(a, b, float(score))
        self._entries = data

    @staticmethod
    def _key(a: str, b: str) -> tuple[str, str]:
        return (a, b) if a <= b else (b, a)

    @staticmethod
    def _checked(a: str, b: str, score: float) -> float:
        if a == b:
            raise ValueError(f"self-pair {a!r}")
        if not 0.0 <= score <= 1.0:
            raise ValueError(f"score {score!r} for ({a!r}, {b!r}) "
                             "outside [0, 1]")
        return score

    def get(self, a: str, b: str) -> float:
        return self._entries.get(self._key(a, b), 0.0)

    def items(self) -> list[tuple[tuple[str, str], float]]:
        """Entries as (sorted pair, score), sorted by pair."""
        return sorted(self._entries.items())

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, pair) -> bool:
        return self._key(*pair) in self._entries

    def __eq__(self, other) -> bool:
        return isinstance(other, ScoreMatrix) and self._entries == other._entries


def parse_pair_scores(path, mentions) -> ScoreMatrix:
    """Load a score file over the given mention universe."""
    known = {m.mention_id if isinstance(m, Mention) else str(m)
             for m in mentions}
    entries: dict[tuple[str, str], float] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ParseError(path, line_no,
                                 f"expected 3 fields, got {len(fields)}")
            a, b, raw_score = fields
            for mention_id in (a, b):
                if mention_id not in known:
                    raise ParseError(path, line_no,
                                     f"unknown mention_id {mention_id!r}")
            try:
                score = float(raw_score)
            except ValueError as exc:
                raise ParseError(path, line_no,
                                 f"bad score {raw_score!r}") from exc
            try:
                score = ScoreMatrix._checked(a, b, score)
            except ValueError as exc:
                raise ParseError(path, line_no, str(exc)) from exc
            entries[ScoreMatrix._key(a, b)] = score
    return ScoreMatrix(entries)


def write_pair_scores(matrix: ScoreMatrix, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for (a, b), score in matrix.items():
            handle.write(f"{_tsv_safe(a)}\t{_tsv_safe(b)}\t{score!r}\n")


# ---- statistics ----

@dataclass(frozen=True)
class KindStats:
    """Gold mention statistics for one mention kind."""

    n_mentions: int
    n_singletons: int
    n_nonsingleton_clusters: int

    def __post_init__(self):
        if min(self.n_mentions, self.n_singletons,
               self.n_nonsingleton_clusters) < 0:
            raise ValueError("negative count")
        if self.n_singletons > self.n_mentions:
            raise ValueError("more singletons than mentions")
        if 2 * self.n_nonsingleton_clusters > self.n_mentions - self.n_singletons:
            raise ValueError("non-singleton clusters need two mentions each")


@dataclass(frozen=True)
class StatsReport:
    """Corpus and per-kind gold statistics for one labelled split."""

    label: str
    n_topics: int
    n_documents: int
    n_sentences: int
    per_kind: Mapping[str, KindStats] = field(default_factory=dict)

    def __post_init__(self):
        if min(self.n_topics, self.n_documents, self.n_sentences) < 0:
            raise ValueError("negative count")
        object.__setattr__(self, "per_kind",
                           MappingProxyType(dict(self.per_kind)))

    def __eq__(self, other) -> bool:
        return (isinstance(other, StatsReport)
                and (self.label, self.n_topics, self.n_documents,
                     self.n_sentences) == (other.label, other.n_topics,
                                           other.n_documents,
                                           other.n_sentences)
                and dict(self.per_kind) == dict(other.per_kind))


def corpus_stats(corpus: Corpus, gold_by_kind: Mapping[str, Clustering],
                 label: str = "all") -> StatsReport:
    """Count topics, documents, sentences and per-kind gold clusters.

    Sentences are distinct (doc_id, sentence_index) pairs holding at
    least one token.  Invariant under document reordering.
    """
    per_kind = {}
    for kind, clustering in sorted(gold_by_kind.items()):
        if kind not in KINDS:
            raise ValueError(f"unknown mention kind {kind!r}")
        if clustering.kind not in (None, kind):
            raise ValueError(f"clustering of kind {clustering.kind!r} "
                             f"listed under {kind!r}")
        sizes = [len(ms) for ms in clustering.clusters.values()]
        per_kind[kind] = KindStats(
            n_mentions=sum(sizes),
            n_singletons=sum(1 for s in sizes if s == 1),
            n_nonsingleton_clusters=sum(1 for s in sizes if s > 1),
        )
    return StatsReport(
        label=label,
        n_topics=len(corpus.topic_to_docs),
        n_documents=len(corpus),
        n_sentences=sum(doc.sentence_count for doc in corpus.documents),
        per_kind=per_kind,
    )
