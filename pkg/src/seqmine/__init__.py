"""seqmine: sequential pattern mining over sequence databases.

Frequent, constrained, and condensed (closed/maximal and backward
variants) pattern mining with two interchangeable embedding strategies,
plus brute-force reference implementations, a synthetic data generator,
and a benchmarking harness.
"""

from .seqdb import (
    Alphabet,
    FormatError,
    MiningResult,
    Pattern,
    ResultEntry,
    Sequence,
    SequenceDatabase,
    load_database,
    read_asp_facts,
    read_results,
    read_spmf,
    write_asp_facts,
    write_results,
    write_spmf,
)
from .relations import (
    FillGapsFrontier,
    SkipGapsEmbedding,
    fill_gaps_frontier,
    is_prefix,
    is_subitemset,
    is_subsequence,
    skip_gaps_embedding,
    support,
    supports_via,
)
from .miner import (
    DataError,
    MineStats,
    MiningParams,
    MiningTimeout,
    ProjectedView,
    frequent_items,
    locally_frequent_items,
    mine,
    mine_frequent,
    mine_itemset_patterns,
    project,
    root_view,
)
from .constraints import (
    AggregateSpec,
    ChainEmbedding,
    ConstraintError,
    ConstraintSet,
    RegexDfa,
    RegexError,
    aggregate_constraint,
    constrained_embeddings,
    item_constraint,
    length_constraint,
    load_cost_text,
    regex_check,
    regex_compile,
    resolve_costs,
    superpattern_constraint,
)
from .condensed import (
    InsertableRegions,
    OccurrenceBounds,
    backward_filter,
    insertable_regions,
    is_closed,
    is_maximal,
    occurrence_bounds,
)
from .oracle import (
    GuardError,
    OracleConfig,
    oracle_condensed,
    oracle_constrained,
    oracle_embeddings,
    oracle_frequent,
)
from .datagen import GenManifest, GenParams, generate, item_popularity_law
from .bench import BenchRecord, run_suite

__version__ = "0.1.0"
