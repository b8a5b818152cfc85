"""End-to-end evaluation protocol: filtering, scoping, reports, rendering.

The per-metric fractions asserted here are the same hand-derived values
as in test_metrics; this module checks that the protocol wires them
together correctly (detection before filtering, filtering before
scoping, CoNLL only over its three parts, counts on both sides).
"""

import dataclasses
import json

import pytest

from corefeval.model import (EVENT, ENTITY, Clustering, Corpus, Document,
                             Mention, Token)
from corefeval.protocol import (
    METRIC_NAMES,
    EvalConfig,
    EvalReport,
    InvalidClusteringError,
    SideCounts,
    evaluate,
    filter_singletons,
    format_percent,
    render_structured,
    render_text,
    scope_partition,
)

approx = pytest.approx


# ---------------------------------------------------------------------------
# configuration


def test_eval_config_defaults():
    cfg = EvalConfig()
    assert cfg.kind == EVENT
    assert cfg.singletons == "exclude"
    assert cfg.scope == "corpus"
    assert cfg.mention_source == "gold"
    assert cfg.metrics == METRIC_NAMES
    assert cfg.wants_conll


@pytest.mark.parametrize("kwargs", [
    {"kind": "verb"},
    {"singletons": "drop"},
    {"scope": "document"},
    {"mention_source": "oracle"},
    {"metrics": ()},
    {"metrics": ("muc", "bcubed")},
    {"metrics": ("muc", "muc")},
])
def test_eval_config_rejects_bad_values(kwargs):
    with pytest.raises(ValueError):
        EvalConfig(**kwargs)


def test_wants_conll_requires_all_three_parts():
    assert not EvalConfig(metrics=("muc", "b3")).wants_conll
    assert EvalConfig(metrics=("muc", "b3", "ceafe")).wants_conll
    assert EvalConfig(metrics=("ceafe", "lea", "b3", "muc")).wants_conll
    assert not EvalConfig(metrics=("ceafm", "lea")).wants_conll


def test_eval_config_accepts_metrics_list():
    cfg = EvalConfig(metrics=["lea", "muc"])
    assert cfg.metrics == ("lea", "muc")


# ---------------------------------------------------------------------------
# singleton filtering


def test_filter_singletons_drops_only_size_one(gold):
    filtered = filter_singletons(gold)
    assert len(gold) == 7 and len(gold.mentions) == 10
    assert len(filtered) == 2 and len(filtered.mentions) == 5
    assert set(filtered.clusters) == {"g_name1", "g_name2"}


def test_filter_singletons_idempotent(gold):
    once = filter_singletons(gold)
    assert filter_singletons(once) == once


def test_filter_singletons_of_all_singletons_is_empty(corpus):
    only = Clustering(
        {"s": [corpus.mention("m", "d1", 0, 0, EVENT)]})
    assert len(filter_singletons(only)) == 0


# ---------------------------------------------------------------------------
# scope partitioning


def test_scope_partition_splits_cross_boundary_cluster(sys_merged, corpus):
    scoped = scope_partition(sys_merged, corpus, "subtopic")
    assert len(scoped) == 6
    sizes = {cid: len(ms) for cid, ms in scoped.clusters.items()}
    assert sizes["a_big@1_1"] == 2  # name1 (d1) + approached (d2)
    assert sizes["a_big@1_2"] == 4
    assert "a_big" not in scoped.clusters


def test_scope_partition_by_topic_is_noop_on_single_topic(sys_merged, corpus):
    assert scope_partition(sys_merged, corpus, "topic") == sys_merged


def test_scope_partition_preserves_mention_set(sys_merged, corpus):
    scoped = scope_partition(sys_merged, corpus, "subtopic")
    assert scoped.spans() == sys_merged.spans()
    assert len(scoped.mentions) == len(sys_merged.mentions)


def test_scope_partition_fixed_point_when_confined(gold, corpus):
    # every gold cluster already sits inside one subtopic
    assert scope_partition(gold, corpus, "subtopic") == gold


def test_scope_partition_resolves_id_collisions():
    da = Document("da", "1", "1_1",
                  (Token("da", 0, 0, "a"), Token("da", 0, 1, "b")))
    db = Document("db", "2", "2_1", (Token("db", 0, 0, "c"),))
    corpus = Corpus([da, db])
    clustering = Clustering({
        "c": [corpus.mention("m1", "da", 0, 0, EVENT),
              corpus.mention("m2", "db", 0, 0, EVENT)],
        "c@1": [corpus.mention("m3", "da", 1, 1, EVENT)],
    })
    scoped = scope_partition(clustering, corpus, "topic")
    assert set(scoped.clusters) == {"c@1", "c@1+", "c@2"}
    assert {m.mention_id for m in scoped.clusters["c@1+"]} == {"m1"}


def test_scope_partition_rejects_bad_inputs(gold, corpus):
    with pytest.raises(ValueError, match="unknown scope"):
        scope_partition(gold, corpus, "corpus")
    stray = Clustering({"x": [Mention("m", "nope", 0, 0, EVENT)]})
    with pytest.raises(ValueError, match="not in corpus"):
        scope_partition(stray, corpus, "topic")


# ---------------------------------------------------------------------------
# evaluate: published fixture numbers, both singleton regimes


def _prf_map(report):
    return {name: (prf.recall, prf.precision, prf.f1)
            for name, prf in report.per_metric.items()}


def test_evaluate_merged_system_excluding_singletons(gold, sys_merged, corpus):
    report = evaluate(gold, sys_merged, corpus)
    assert _prf_map(report) == {
        "muc": approx((1.0, 3 / 5, 3 / 4)),
        "b3": approx((1.0, 13 / 36, 26 / 49)),
        "ceafm": approx((3 / 5, 1 / 2, 6 / 11)),
        "ceafe": approx((1 / 3, 2 / 3, 4 / 9)),
        "lea": approx((1.0, 4 / 15, 8 / 19)),
    }
    assert report.conll == approx((3 / 4 + 26 / 49 + 4 / 9) / 3)


def test_evaluate_spans_system_excluding_singletons(gold, sys_spans, corpus):
    report = evaluate(gold, sys_spans, corpus)
    assert _prf_map(report) == {
        "muc": approx((1.0, 3 / 4, 6 / 7)),
        "b3": approx((1.0, 13 / 18, 26 / 31)),
        "ceafm": approx((1.0, 5 / 6, 10 / 11)),
        "ceafe": approx((9 / 10, 9 / 10, 9 / 10)),
        "lea": approx((1.0, 2 / 3, 4 / 5)),
    }
    assert report.conll == approx((6 / 7 + 26 / 31 + 9 / 10) / 3)


def test_evaluate_merged_system_including_singletons(gold, sys_merged, corpus):
    report = evaluate(gold, sys_merged, corpus,
                      EvalConfig(singletons="include"))
    assert _prf_map(report) == {
        "muc": approx((1.0, 3 / 5, 3 / 4)),
        "b3": approx((1.0, 19 / 30, 38 / 49)),
        "ceafm": approx((7 / 10, 7 / 10, 7 / 10)),
        "ceafe": approx((2 / 3, 14 / 15, 7 / 9)),
        "lea": approx((9 / 10, 14 / 25, 252 / 365)),
    }
    assert report.conll == approx((3 / 4 + 38 / 49 + 7 / 9) / 3)


def test_evaluate_spans_system_including_singletons(gold, sys_spans, corpus):
    report = evaluate(gold, sys_spans, corpus,
                      EvalConfig(singletons="include"))
    assert _prf_map(report) == {
        "muc": approx((1.0, 3 / 4, 6 / 7)),
        "b3": approx((3 / 5, 7 / 12, 42 / 71)),
        "ceafm": approx((1 / 2, 5 / 8, 5 / 9)),
        "ceafe": approx((9 / 35, 9 / 20, 18 / 55)),
        "lea": approx((1 / 2, 1 / 2, 1 / 2)),
    }
    assert report.conll == approx((6 / 7 + 42 / 71 + 18 / 55) / 3)


@pytest.mark.parametrize("mode,s1,s2", [
    ("exclude",
     ["75.0", "53.1", "54.5", "44.4", "42.1", "57.5"],
     ["85.7", "83.9", "90.9", "90.0", "80.0", "86.5"]),
    ("include",
     ["75.0", "77.6", "70.0", "77.8", "69.0", "76.8"],
     ["85.7", "59.2", "55.6", "32.7", "50.0", "59.2"]),
])
def test_percent_table_rows(mode, s1, s2, gold, sys_merged, sys_spans,
                            corpus):
    cfg = EvalConfig(singletons=mode)
    for system, expected in ((sys_merged, s1), (sys_spans, s2)):
        report = evaluate(gold, system, corpus, cfg)
        row = [format_percent(report.per_metric[m].f1) for m in cfg.metrics]
        row.append(format_percent(report.conll))
        assert row == expected


def test_ranking_flips_with_singleton_regime(gold, sys_merged, sys_spans,
                                             corpus):
    exclude = EvalConfig(singletons="exclude")
    include = EvalConfig(singletons="include")
    conll = {
        (mode.singletons, name): evaluate(gold, system, corpus, mode).conll
        for mode in (exclude, include)
        for name, system in (("merged", sys_merged), ("spans", sys_spans))
    }
    assert conll[("exclude", "spans")] > conll[("exclude", "merged")]
    assert conll[("include", "merged")] > conll[("include", "spans")]


def test_detection_is_scored_before_any_filtering(gold, sys_merged,
                                                  sys_spans, corpus):
    for cfg in (EvalConfig(), EvalConfig(singletons="include"),
                EvalConfig(scope="subtopic")):
        merged = evaluate(gold, sys_merged, corpus, cfg).mention_detection
        spans = evaluate(gold, sys_spans, corpus, cfg).mention_detection
        assert (merged.recall, merged.precision, merged.f1) == (1, 1, 1)
        assert (spans.recall, spans.precision, spans.f1) == \
            approx((3 / 5, 3 / 4, 2 / 3))


def test_counts_track_filtering(gold, sys_merged, corpus):
    report = evaluate(gold, sys_merged, corpus)
    assert report.gold_counts == SideCounts(10, 7, 5, 2)
    assert report.system_counts == SideCounts(10, 5, 6, 1)
    unfiltered = evaluate(gold, sys_merged, corpus,
                          EvalConfig(singletons="include"))
    assert unfiltered.gold_counts == SideCounts(10, 7, 10, 7)
    assert unfiltered.system_counts == SideCounts(10, 5, 10, 5)


def test_scope_splits_system_side_only(gold, sys_merged, corpus):
    cfg = EvalConfig(singletons="include", scope="subtopic")
    report = evaluate(gold, sys_merged, corpus, cfg)
    assert report.gold_counts.scored_clusters == 7
    assert report.system_counts.scored_clusters == 6
    # splitting the over-merged cluster restores the within-boundary links
    muc = report.per_metric["muc"]
    assert (muc.recall, muc.precision, muc.f1) == approx((1.0, 3 / 4, 6 / 7))


def test_metric_subset_skips_conll(gold, sys_merged, corpus):
    cfg = EvalConfig(metrics=("muc", "lea"))
    report = evaluate(gold, sys_merged, corpus, cfg)
    assert report.conll is None
    assert tuple(report.per_metric) == ("muc", "lea")
    assert "CONLL" not in render_text(report)
    assert json.loads(render_structured(report))["conll_f1"] is None


def test_evaluate_rejects_kind_mismatch(gold, sys_merged, corpus):
    with pytest.raises(ValueError, match="expected entity"):
        evaluate(gold, sys_merged, corpus, EvalConfig(kind=ENTITY))


def test_evaluate_rejects_invalid_clustering(gold, corpus):
    bad = Clustering({"x": [corpus.mention("m", "d1", 0, 99, EVENT)]})
    with pytest.raises(InvalidClusteringError) as err:
        evaluate(gold, bad, corpus)
    assert err.value.side == "system"
    assert err.value.violations
    with pytest.raises(InvalidClusteringError) as err:
        evaluate(bad, gold, corpus)
    assert err.value.side == "gold"


def test_report_rejects_inconsistent_conll(gold, sys_merged, corpus):
    report = evaluate(gold, sys_merged, corpus)
    with pytest.raises(ValueError, match="mean"):
        dataclasses.replace(report, conll=report.conll + 0.01)


def test_lone_gold_singleton_in_cluster_costs_precision(gold, sys_spans,
                                                        corpus):
    # under exclude, sys_spans loses precision only because the gold
    # singleton "announcement" sits in one of its clusters
    before = evaluate(gold, sys_spans, corpus)
    repaired = Clustering({
        cid: [m for m in members if m.mention_id != "announcement"]
        for cid, members in sys_spans.clusters.items()
    })
    after = evaluate(gold, repaired, corpus)
    for name in ("b3", "ceafe", "lea"):
        assert before.per_metric[name].precision < 1
        assert after.per_metric[name].precision == 1


def test_evaluate_is_deterministic(gold, sys_merged, corpus):
    first = evaluate(gold, sys_merged, corpus)
    second = evaluate(gold, sys_merged, corpus)
    assert first == second
    assert render_text(first) == render_text(second)
    assert render_structured(first) == render_structured(second)


# ---------------------------------------------------------------------------
# rendering


EXPECTED_TEXT = (
    "kind=event  singletons=exclude  scope=corpus  mentions=gold\n"
    "gold: 10 mentions in 7 clusters (scored: 5 in 2)\n"
    "system: 10 mentions in 5 clusters (scored: 6 in 1)\n"
    "mention detection  R 100.0  P 100.0  F1 100.0\n"
    "\n"
    "        MUC                    B3                     CEAFM            "
    "      CEAFE                  LEA                  CONLL\n"
    "        R      P      F1       R      P      F1       R      P      F1"
    "       R      P      F1       R      P      F1     F1\n"
    "scores  100.0  60.0   75.0     100.0  36.1   53.1     60.0   50.0   54"
    ".5     33.3   66.7   44.4     100.0  26.7   42.1   57.5\n"
)


def test_render_text_golden(gold, sys_merged, corpus):
    report = evaluate(gold, sys_merged, corpus)
    assert render_text(report) == EXPECTED_TEXT


def test_render_structured_round_trips(gold, sys_spans, corpus):
    report = evaluate(gold, sys_spans, corpus)
    text = render_structured(report)
    assert text.endswith("\n")
    payload = json.loads(text)
    assert payload["config"] == {
        "kind": "event", "singletons": "exclude", "scope": "corpus",
        "mention_source": "gold", "metrics": list(METRIC_NAMES),
    }
    assert payload["metrics"]["b3"]["precision"] == 13 / 18
    assert payload["conll_f1"] == report.conll
    assert payload["counts"]["system"]["scored_clusters"] == 2
    assert payload["mention_detection"]["f1"] == approx(2 / 3)


@pytest.mark.parametrize("value,expected", [
    (0.0, "0.0"),
    (1.0, "100.0"),
    (0.5625, "56.3"),   # exact .25 tie rounds up, not to even
    (0.0625, "6.3"),
    (4 / 9, "44.4"),
    (26 / 49, "53.1"),
    (2 / 3, "66.7"),
    (6 / 7, "85.7"),
    (9 / 10, "90.0"),
    (0.0004, "0.0"),
])
def test_format_percent(value, expected):
    assert format_percent(value) == expected
