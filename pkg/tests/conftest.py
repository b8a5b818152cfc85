"""Shared fixtures: a small nomination-news corpus with one gold and two
system clusterings whose metric values are known exactly.

System A finds every gold span but over-merges five clusters into one;
system B keeps the right cluster structure but botches two mention
boundaries and drops two mentions.  Between them they exercise every
twinless-mention rule of the metrics.
"""

import pytest

from corefeval.model import EVENT, Clustering, Corpus, Document, Token

# one line per acceptance criterion, echoed into the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def _doc(doc_id, topic_id, subtopic_id, sentences):
    tokens = []
    index = 0
    for s, words in enumerate(sentences):
        for word in words:
            tokens.append(Token(doc_id, s, index, word))
            index += 1
    return Document(doc_id, topic_id, subtopic_id, tuple(tokens))


def build_corpus() -> Corpus:
    d1 = _doc("d1", "1", "1_1", [
        "News that Barack Obama may name Dr. Sanjay Gupta of Emory "
        "University and CNN as next top doctor .".split(),
    ])
    d2 = _doc("d2", "1", "1_1", [
        "CNN management confirmed yesterday that Dr. Gupta had been "
        "approached by the Obama team .".split(),
    ])
    d3 = _doc("d3", "1", "1_2", [
        "President Obama will name Dr. Regina Benjamin as Surgeon General "
        "in a Rose Garden announcement .".split(),
    ])
    d4 = _doc("d4", "1", "1_2", [
        "Obama nominates new surgeon general : genius grant fellow "
        "Dr. Benjamin .".split(),
        "He emphasizes his decision .".split(),
    ])
    return Corpus([d1, d2, d3, d4])


# mention_id -> (doc_id, start, end); all spans are single tokens except
# the two deliberately wrong system B boundaries.
GOLD_SPANS = {
    "news": ("d1", 0, 0),
    "name1": ("d1", 5, 5),
    "emory": ("d1", 10, 11),
    "confirmed": ("d2", 2, 2),
    "yesterday": ("d2", 3, 3),
    "approached": ("d2", 9, 9),
    "name2": ("d3", 3, 3),
    "announcement": ("d3", 14, 14),
    "nominates": ("d4", 1, 1),
    "decision": ("d4", 15, 15),
}

BAD_SPANS = {
    "news_bad": ("d1", 0, 1),
    "emory_bad": ("d1", 10, 10),
}


def _mentions(corpus, names):
    spans = {**GOLD_SPANS, **BAD_SPANS}
    return [corpus.mention(n, *spans[n], EVENT) for n in names]


def build_gold(corpus) -> Clustering:
    return Clustering({
        "g_news": _mentions(corpus, ["news"]),
        "g_emory": _mentions(corpus, ["emory"]),
        "g_confirmed": _mentions(corpus, ["confirmed"]),
        "g_yesterday": _mentions(corpus, ["yesterday"]),
        "g_announcement": _mentions(corpus, ["announcement"]),
        "g_name1": _mentions(corpus, ["name1", "approached"]),
        "g_name2": _mentions(corpus, ["name2", "nominates", "decision"]),
    })


def build_sys_merged(corpus) -> Clustering:
    """All gold spans found, five gold clusters merged into one."""
    return Clustering({
        "a_news": _mentions(corpus, ["news"]),
        "a_emory": _mentions(corpus, ["emory"]),
        "a_confirmed": _mentions(corpus, ["confirmed"]),
        "a_yesterday": _mentions(corpus, ["yesterday"]),
        "a_big": _mentions(corpus, ["announcement", "name1", "approached",
                                    "name2", "nominates", "decision"]),
    })


def build_sys_spans(corpus) -> Clustering:
    """Right cluster structure, wrong boundaries on two mentions and two
    gold mentions missing."""
    return Clustering({
        "b_news": _mentions(corpus, ["news_bad"]),
        "b_emory": _mentions(corpus, ["emory_bad"]),
        "b_c1": _mentions(corpus, ["announcement", "name1", "approached"]),
        "b_c2": _mentions(corpus, ["name2", "nominates", "decision"]),
    })


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.fixture(scope="session")
def gold(corpus):
    return build_gold(corpus)


@pytest.fixture(scope="session")
def sys_merged(corpus):
    return build_sys_merged(corpus)


@pytest.fixture(scope="session")
def sys_spans(corpus):
    return build_sys_spans(corpus)
