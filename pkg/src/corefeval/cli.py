"""Command-line front end: validate inputs, score clusterings, run the
deterministic baselines and print corpus statistics.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.
Identical invocations produce byte-identical output, and report files
are written atomically, so a nonzero exit never leaves a partial report
behind.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass
from operator import attrgetter

from .baselines import (LINKAGES, AggloConfig, agglomerative_cluster,
                        lexical_pair_scorer, singleton_baseline)
from .ingest import (ParseError, clustering_text, corpus_stats,
                     parse_clustering, parse_corpus, parse_pair_scores)
from .model import ENTITY, EVENT, KINDS, Clustering
from .protocol import (CONLL_PARTS, MENTION_SOURCES, METRIC_NAMES, SCOPES,
                       SINGLETON_MODES, EvalConfig, InvalidClusteringError,
                       evaluate, render_structured, render_text)


@dataclass(frozen=True)
class CommandOutcome:
    """What a subcommand produced: an exit code, plus the report path
    when one was written."""

    exit_code: int
    report_path: str | None = None


class UsageError(Exception):
    """A flag combination that cannot be executed."""


def _write_text(path, text: str) -> None:
    # temp file + rename: the target either keeps its old content or
    # holds the complete new report, never a partial one
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".report-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _parse_metrics(value: str) -> tuple[str, ...]:
    names = tuple(part.strip() for part in value.split(","))
    if any(not name for name in names):
        raise UsageError(f"empty metric name in {value!r}")
    unknown = [name for name in names if name not in METRIC_NAMES]
    if unknown:
        raise UsageError(f"unknown metrics: {', '.join(unknown)} "
                         f"(choose from {', '.join(METRIC_NAMES)})")
    if len(set(names)) != len(names):
        raise UsageError(f"duplicate metrics in {value!r}")
    return names


def cmd_validate(args) -> CommandOutcome:
    corpus = parse_corpus(args.corpus)
    lines = [f"corpus: {len(corpus)} documents"]
    for kind, path in ((EVENT, args.events), (ENTITY, args.entities)):
        if path is None:
            continue
        clustering = parse_clustering(path, corpus, kind)
        lines.append(f"{kind}s: {len(clustering.mentions)} mentions in "
                     f"{len(clustering)} clusters")
    sys.stdout.write("\n".join(lines) + "\n")
    return CommandOutcome(0)


def cmd_score(args) -> CommandOutcome:
    metrics = _parse_metrics(args.metrics)
    if args.conll and not CONLL_PARTS <= set(metrics):
        raise UsageError("--conll needs muc, b3 and ceafe among --metrics")
    if args.format == "structured" and args.out is None:
        raise UsageError("--format structured needs --out "
                         "(standard output carries the text table)")
    config = EvalConfig(kind=args.kind, singletons=args.singletons,
                        scope=args.scope, mention_source=args.mention_source,
                        metrics=metrics)
    corpus = parse_corpus(args.corpus)
    gold = parse_clustering(args.gold, corpus, args.kind)
    system = parse_clustering(args.system, corpus, args.kind)
    report = evaluate(gold, system, corpus, config)
    text = render_text(report)
    sys.stdout.write(text)
    if args.out is None:
        return CommandOutcome(0)
    rendered = text if args.format == "text" else render_structured(report)
    _write_text(args.out, rendered)
    return CommandOutcome(0, args.out)


def _cluster_by_group(mentions, scores, cfg: AggloConfig, corpus,
                      scope: str) -> Clustering:
    """Cluster within each topic/subtopic group; corpus scope is global.

    Groups partition the mentions, so the per-group cluster ids (each the
    smallest member id) never collide.
    """
    if scope == "corpus":
        return agglomerative_cluster(mentions, scores, cfg)
    groups: dict[str, list] = {}
    for mention in mentions:
        doc = corpus.get(mention.doc_id)
        key = doc.topic_id if scope == "topic" else doc.subtopic_id
        groups.setdefault(key, []).append(mention)
    clusters = {}
    for key in sorted(groups):
        part = agglomerative_cluster(groups[key], scores, cfg)
        clusters.update(part.clusters)
    return Clustering(clusters)


def cmd_baseline(args) -> CommandOutcome:
    if not 0.0 <= args.tau <= 1.0:
        raise UsageError(f"--tau {args.tau} outside [0, 1]")
    corpus = parse_corpus(args.corpus)
    gold = parse_clustering(args.gold, corpus, args.kind)
    mentions = sorted(gold.mentions, key=attrgetter("mention_id"))
    if args.mode == "singleton":
        system = singleton_baseline(mentions)
    else:
        scores = (parse_pair_scores(args.scores, mentions)
                  if args.scores else lexical_pair_scorer(mentions))
        cfg = AggloConfig(tau=args.tau, linkage=args.linkage)
        system = _cluster_by_group(mentions, scores, cfg, corpus, args.scope)
    tsv = clustering_text(system)
    if args.evaluate:
        config = EvalConfig(kind=args.kind, singletons=args.singletons,
                            scope=args.scope)
        sys.stdout.write(render_text(evaluate(gold, system, corpus, config)))
    else:
        sys.stdout.write(tsv)
    if args.out is None:
        return CommandOutcome(0)
    _write_text(args.out, tsv)
    return CommandOutcome(0, args.out)


def cmd_stats(args) -> CommandOutcome:
    corpus = parse_corpus(args.corpus)
    gold_by_kind = {}
    if args.events is not None:
        gold_by_kind[EVENT] = parse_clustering(args.events, corpus, EVENT)
    if args.entities is not None:
        gold_by_kind[ENTITY] = parse_clustering(args.entities, corpus, ENTITY)
    report = corpus_stats(corpus, gold_by_kind, label=args.label)

    def cell(field: str) -> str:
        # event/entity values share one slash-separated cell
        return "/".join(
            str(getattr(report.per_kind[kind], field))
            if kind in report.per_kind else "-"
            for kind in KINDS)

    lines = [
        f"label: {report.label}",
        f"topics: {report.n_topics}",
        f"subtopics: {len(corpus.subtopic_to_docs)}",
        f"documents: {report.n_documents}",
        f"sentences: {report.n_sentences}",
        f"mentions: {cell('n_mentions')}",
        f"singletons: {cell('n_singletons')}",
        f"clusters: {cell('n_nonsingleton_clusters')}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return CommandOutcome(0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corefeval",
        description="Score cross-document coreference clusterings with "
                    "decoupled mention detection.")
    sub = parser.add_subparsers(dest="command", required=True)

    validate = sub.add_parser("validate",
                              help="check a corpus and clusterings")
    validate.add_argument("corpus", help="corpus JSONL file")
    validate.add_argument("--events", metavar="TSV",
                          help="event clustering to validate")
    validate.add_argument("--entities", metavar="TSV",
                          help="entity clustering to validate")
    validate.set_defaults(func=cmd_validate)

    score = sub.add_parser("score", help="evaluate a system clustering")
    score.add_argument("corpus", help="corpus JSONL file")
    score.add_argument("gold", help="gold clustering TSV")
    score.add_argument("system", help="system clustering TSV")
    score.add_argument("--kind", choices=KINDS, default=EVENT)
    score.add_argument("--singletons", choices=SINGLETON_MODES,
                       default="exclude",
                       help="singleton regime (default: exclude)")
    score.add_argument("--scope", choices=SCOPES, default="corpus",
                       help="split system clusters at these boundaries")
    score.add_argument("--metrics", default=",".join(METRIC_NAMES),
                       help="comma-separated metric list (default: all)")
    score.add_argument("--mention-source", dest="mention_source",
                       choices=MENTION_SOURCES, default="gold",
                       help="provenance label recorded in the report")
    score.add_argument("--conll", action="store_true",
                       help="require the CoNLL average (needs muc, b3, "
                            "ceafe)")
    score.add_argument("--format", choices=("text", "structured"),
                       default="text", help="report file format for --out")
    score.add_argument("--out", metavar="PATH", help="report file to write")
    score.set_defaults(func=cmd_score)

    baseline = sub.add_parser("baseline",
                              help="run a deterministic baseline")
    baseline.add_argument("mode", choices=("singleton", "lexical"))
    baseline.add_argument("corpus", help="corpus JSONL file")
    baseline.add_argument("gold", help="gold clustering TSV (mention set)")
    baseline.add_argument("--kind", choices=KINDS, default=EVENT)
    baseline.add_argument("--tau", type=float, default=0.5,
                          help="merge threshold in [0, 1] (default: 0.5)")
    baseline.add_argument("--linkage", choices=LINKAGES, default="average")
    baseline.add_argument("--scores", metavar="TSV",
                          help="pairwise score file replacing the lexical "
                               "scorer")
    baseline.add_argument("--scope", choices=SCOPES, default="corpus",
                          help="cluster within these document groups")
    baseline.add_argument("--singletons", choices=SINGLETON_MODES,
                          default="exclude",
                          help="singleton regime for --evaluate")
    baseline.add_argument("--evaluate", action="store_true",
                          help="print the score table instead of the TSV")
    baseline.add_argument("--out", metavar="TSV",
                          help="clustering file to write")
    baseline.set_defaults(func=cmd_baseline)

    stats = sub.add_parser("stats",
                           help="corpus and gold clustering statistics")
    stats.add_argument("corpus", help="corpus JSONL file")
    stats.add_argument("--events", metavar="TSV", help="event gold TSV")
    stats.add_argument("--entities", metavar="TSV", help="entity gold TSV")
    stats.add_argument("--label", default="all", help="report label")
    stats.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        outcome = args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (ParseError, InvalidClusteringError) as err:
        print(f"error: {err}", file=sys.stderr)
        for violation in err.violations:
            print(f"  {violation.code}: {violation.message}",
                  file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
