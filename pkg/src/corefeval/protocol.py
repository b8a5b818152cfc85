"""Evaluation workflow: mention detection decoupled from coreference
scoring, singleton regimes, prediction scoping, and report assembly.

The defaults encode the recommended protocol: singletons excluded from
the coreference metrics (but always part of mention detection) and
corpus-wide scoring.  ``scope`` simulates a system that never links
mentions across topic or subtopic boundaries by splitting its clusters
at those boundaries; gold clusters stay whole, so cross-boundary links
become unreachable recall.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from types import MappingProxyType
from typing import Mapping

from . import metrics
from .model import KINDS, EVENT, Clustering, Corpus, Violation, validate_clustering

METRIC_NAMES = ("muc", "b3", "ceafm", "ceafe", "lea")
CONLL_PARTS = frozenset(("muc", "b3", "ceafe"))
SINGLETON_MODES = ("include", "exclude")
SCOPES = ("corpus", "topic", "subtopic")
MENTION_SOURCES = ("gold", "predicted")

_METRIC_FUNCS = {
    "muc": metrics.muc_score,
    "b3": metrics.b3_score,
    "ceafm": lambda g, s: metrics.ceaf_score(g, s, "m"),
    "ceafe": lambda g, s: metrics.ceaf_score(g, s, "e"),
    "lea": metrics.lea_score,
}


class InvalidClusteringError(ValueError):
    """A clustering failed validation against the corpus."""

    def __init__(self, side: str, violations: list[Violation]):
        super().__init__(f"{side} clustering has {len(violations)} "
                         "validation violation(s)")
        self.side = side
        self.violations = list(violations)


@dataclass(frozen=True)
class EvalConfig:
    """Everything that parameterizes one evaluation run.

    ``mention_source`` records whether the system ran over gold or its
    own predicted mentions; it labels the report and changes nothing in
    the scoring itself.
    """

    kind: str = EVENT
    singletons: str = "exclude"
    scope: str = "corpus"
    mention_source: str = "gold"
    metrics: tuple[str, ...] = METRIC_NAMES

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown mention kind {self.kind!r}")
        if self.singletons not in SINGLETON_MODES:
            raise ValueError(f"unknown singleton mode {self.singletons!r}")
        if self.scope not in SCOPES:
            raise ValueError(f"unknown scope {self.scope!r}")
        if self.mention_source not in MENTION_SOURCES:
            raise ValueError(f"unknown mention source {self.mention_source!r}")
        object.__setattr__(self, "metrics", tuple(self.metrics))
        if not self.metrics:
            raise ValueError("at least one metric is required")
        unknown = [m for m in self.metrics if m not in METRIC_NAMES]
        if unknown:
            raise ValueError(f"unknown metrics: {', '.join(unknown)}")
        if len(set(self.metrics)) != len(self.metrics):
            raise ValueError("duplicate metrics")

    @property
    def wants_conll(self) -> bool:
        return CONLL_PARTS <= set(self.metrics)


@dataclass(frozen=True)
class SideCounts:
    """Cluster and mention counts on one side, before and after the
    singleton filter (and, for the system side, scoping)."""

    mentions: int
    clusters: int
    scored_mentions: int
    scored_clusters: int


@dataclass(frozen=True)
class EvalReport:
    """The full outcome of one evaluation run."""

    config: EvalConfig
    mention_detection: metrics.PRF
    per_metric: Mapping[str, metrics.PRF]
    conll: float | None
    gold_counts: SideCounts
    system_counts: SideCounts

    def __post_init__(self):
        object.__setattr__(self, "per_metric",
                           MappingProxyType(dict(self.per_metric)))
        if self.conll is not None:
            want = metrics.conll_f1(self.per_metric["muc"],
                                    self.per_metric["b3"],
                                    self.per_metric["ceafe"])
            if abs(self.conll - want) > 1e-12:
                raise ValueError("conll is not the mean of its parts")


def filter_singletons(clustering: Clustering) -> Clustering:
    """Drop all size-1 clusters; their mentions leave the mention set."""
    return Clustering({cid: members
                       for cid, members in clustering.clusters.items()
                       if len(members) > 1})


def scope_partition(clustering: Clustering, corpus: Corpus,
                    scope: str) -> Clustering:
    """Split every cluster at topic or subtopic boundaries.

    Each cluster is replaced by its non-empty intersections with the
    document groups; the mention set is unchanged and the cluster count
    can only grow.  Split parts are renamed ``<cluster_id>@<group_id>``
    (suffixed with ``+`` on the rare collision with an existing id).
    """
    if scope not in ("topic", "subtopic"):
        raise ValueError(f"unknown scope {scope!r}")

    def group_of(doc_id: str) -> str:
        doc = corpus.get(doc_id)
        if doc is None:
            raise ValueError(f"mention document {doc_id!r} not in corpus")
        return doc.topic_id if scope == "topic" else doc.subtopic_id

    out: dict[str, list] = {}
    taken = set(clustering.clusters)
    for cid, members in clustering.clusters.items():
        buckets: dict[str, list] = {}
        for mention in members:
            buckets.setdefault(group_of(mention.doc_id), []).append(mention)
        if len(buckets) == 1:
            out[cid] = list(members)
            continue
        for group_id, part in buckets.items():
            new_id = f"{cid}@{group_id}"
            while new_id in taken:
                new_id += "+"
            taken.add(new_id)
            out[new_id] = part
    return Clustering(out)


def evaluate(gold: Clustering, system: Clustering, corpus: Corpus,
             config: EvalConfig = EvalConfig()) -> EvalReport:
    """Score one system clustering against gold.

    Steps: (1) mention detection on the unfiltered mention sets,
    singletons always included; (2) under the exclude regime, singleton
    clusters removed from both sides; (3) under topic/subtopic scope,
    system clusters split at the boundaries; (4) the selected coreference
    metrics; (5) CoNLL F1 when MUC, B-cubed and CEAFe are all selected.
    """
    for side, clustering in (("gold", gold), ("system", system)):
        if clustering.kind not in (None, config.kind):
            raise ValueError(f"{side} clustering holds {clustering.kind} "
                             f"mentions, expected {config.kind}")
        violations = validate_clustering(clustering, corpus)
        if violations:
            raise InvalidClusteringError(side, violations)

    detection = metrics.mention_detection_prf(gold.mentions, system.mentions)
    scored_gold, scored_system = gold, system
    if config.singletons == "exclude":
        scored_gold = filter_singletons(gold)
        scored_system = filter_singletons(system)
    if config.scope != "corpus":
        scored_system = scope_partition(scored_system, corpus, config.scope)

    per_metric = {name: _METRIC_FUNCS[name](scored_gold, scored_system)
                  for name in config.metrics}
    conll = None
    if config.wants_conll:
        conll = metrics.conll_f1(per_metric["muc"], per_metric["b3"],
                                 per_metric["ceafe"])
    return EvalReport(
        config=config,
        mention_detection=detection,
        per_metric=per_metric,
        conll=conll,
        gold_counts=SideCounts(len(gold.mentions), len(gold),
                               len(scored_gold.mentions), len(scored_gold)),
        system_counts=SideCounts(len(system.mentions), len(system),
                                 len(scored_system.mentions),
                                 len(scored_system)),
    )


def format_percent(value: float) -> str:
    """Render a [0, 1] score on the percent scale, one decimal, half-up.

    Applied only at the presentation layer; all arithmetic stays in
    double precision.
    """
    return str((Decimal(value) * 100).quantize(Decimal("0.1"),
                                               rounding=ROUND_HALF_UP))


def render_text(report: EvalReport) -> str:
    """Fixed-width table: R, P, F1 columns per metric, CoNLL last."""
    config = report.config
    lines = [
        f"kind={config.kind}  singletons={config.singletons}  "
        f"scope={config.scope}  mentions={config.mention_source}",
        _counts_line("gold", report.gold_counts),
        _counts_line("system", report.system_counts),
        "mention detection  " + "  ".join(
            f"{h} {format_percent(v):>5}" for h, v in
            [("R", report.mention_detection.recall),
             ("P", report.mention_detection.precision),
             ("F1", report.mention_detection.f1)]),
        "",
    ]
    groups = ["".join(f"{h:<7}" for h in ("R", "P", "F1"))
              for _ in config.metrics]
    header1 = "        " + "  ".join(f"{name.upper():<21}"
                                     for name in config.metrics)
    header2 = "        " + "  ".join(groups)
    row = "        " + "  ".join(
        "".join(f"{format_percent(v):<7}" for v in
                (prf.recall, prf.precision, prf.f1))
        for prf in (report.per_metric[m] for m in config.metrics))
    if report.conll is not None:
        header1 += "CONLL"
        header2 += "F1"
        row += format_percent(report.conll)
    lines += [header1.rstrip(), header2.rstrip(),
              "scores" + row[6:].rstrip(), ""]
    return "\n".join(lines)


def _counts_line(side: str, counts: SideCounts) -> str:
    return (f"{side}: {counts.mentions} mentions in {counts.clusters} "
            f"clusters (scored: {counts.scored_mentions} in "
            f"{counts.scored_clusters})")


def render_structured(report: EvalReport) -> str:
    """Machine-readable report: one JSON object, full-precision floats."""
    config = report.config
    payload = {
        "config": {
            "kind": config.kind,
            "singletons": config.singletons,
            "scope": config.scope,
            "mention_source": config.mention_source,
            "metrics": list(config.metrics),
        },
        "mention_detection": _prf_payload(report.mention_detection),
        "metrics": {name: _prf_payload(report.per_metric[name])
                    for name in config.metrics},
        "conll_f1": report.conll,
        "counts": {
            "gold": _counts_payload(report.gold_counts),
            "system": _counts_payload(report.system_counts),
        },
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def _prf_payload(prf: metrics.PRF) -> dict:
    return {"recall": prf.recall, "precision": prf.precision, "f1": prf.f1}


def _counts_payload(counts: SideCounts) -> dict:
    return {
        "mentions": counts.mentions,
        "clusters": counts.clusters,
        "scored_mentions": counts.scored_mentions,
        "scored_clusters": counts.scored_clusters,
    }
