"""Cross-document coreference evaluation toolkit.

Scores system clusterings against gold with mention detection decoupled
from coreference quality: MUC, B-cubed, CEAF (mention- and entity-based),
LEA and their CoNLL average, under explicit singleton and evaluation-scope
regimes, plus deterministic baselines and corpus statistics.
"""

from ._backend import backend_name
from .baselines import (
    LINKAGES,
    AggloConfig,
    agglomerative_cluster,
    cluster_documents,
    lexical_pair_scorer,
    singleton_baseline,
    trigram_dice,
)
from .ingest import (
    KindStats,
    ParseError,
    ScoreMatrix,
    StatsReport,
    clustering_text,
    corpus_stats,
    parse_clustering,
    parse_corpus,
    parse_pair_scores,
    write_clustering,
    write_corpus,
    write_pair_scores,
)
from .metrics import (
    PRF,
    Assignment,
    b3_score,
    ceaf_score,
    conll_f1,
    lea_score,
    mention_detection_prf,
    muc_score,
    solve_assignment,
)
from .model import (
    ENTITY,
    EVENT,
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
from .protocol import (
    CONLL_PARTS,
    MENTION_SOURCES,
    METRIC_NAMES,
    SCOPES,
    SINGLETON_MODES,
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

__version__ = "0.1.0"

__all__ = [
    "AggloConfig",
    "Assignment",
    "CONLL_PARTS",
    "Clustering",
    "ClusteringError",
    "Corpus",
    "Document",
    "ENTITY",
    "EVENT",
    "EvalConfig",
    "EvalReport",
    "InvalidClusteringError",
    "KINDS",
    "KindStats",
    "LINKAGES",
    "MENTION_SOURCES",
    "METRIC_NAMES",
    "Mention",
    "PRF",
    "ParseError",
    "SCOPES",
    "SINGLETON_MODES",
    "ScoreMatrix",
    "SideCounts",
    "StatsReport",
    "Token",
    "Violation",
    "__version__",
    "agglomerative_cluster",
    "b3_score",
    "backend_name",
    "ceaf_score",
    "cluster_documents",
    "clustering_text",
    "conll_f1",
    "corpus_stats",
    "evaluate",
    "filter_singletons",
    "format_percent",
    "lea_score",
    "lexical_pair_scorer",
    "mention_detection_prf",
    "muc_score",
    "parse_clustering",
    "parse_corpus",
    "parse_pair_scores",
    "render_structured",
    "render_text",
    "scope_partition",
    "singleton_baseline",
    "solve_assignment",
    "trigram_dice",
    "validate_clustering",
    "write_clustering",
    "write_corpus",
    "write_pair_scores",
]
