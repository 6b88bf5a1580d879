"""taxopairs: category hierarchies in, balanced phrase-pair datasets out.

The pipeline stages, each usable on its own:

1. :mod:`taxopairs.dump_ingest` streams MediaWiki SQL dumps (or plain
   edge TSVs) into child→parent title edges.
2. :mod:`taxopairs.graph` builds an immutable, cycle-safe category
   graph with ancestor/sibling/depth queries and a binary snapshot.
3. :mod:`taxopairs.filters` and :mod:`taxopairs.similarity` decide
   which titles are usable and how related two titles look.
4. :mod:`taxopairs.pairs` extracts labeled pairs: direct edges,
   similarity-ranked neutrals, sibling samples.
5. :mod:`taxopairs.dataset` balances them into train/dev splits and
   writes TSV + JSON report artifacts.
6. :mod:`taxopairs.pipeline` and :mod:`taxopairs.cli` wire it together.

Everything downstream of ingestion is a pure function of (inputs,
config, seed): reruns are byte-identical at any worker count.
"""

from .dataset import (
    DatasetSpec,
    Scheme,
    assemble_dataset,
    emit_dataset,
    read_rows_tsv,
    relation_quotas,
    split_evenly,
    write_rows_tsv,
)
from .dump_ingest import (
    CategoryLink,
    IngestReport,
    LinkType,
    PageRecord,
    RawEdge,
    Table,
    category_edges_from_dumps,
    normalize_title,
    parse_sql_dump,
    read_edge_tsv,
    synthesize_dumps,
    write_edge_tsv,
)
from .errors import ConfigError, DataError, TaxopairsError
from .filters import (
    REJECT_REASONS,
    FilterConfig,
    FilterTally,
    ScriptFilter,
    filter_config_from_json,
    passes_filter,
    rejection_reason,
    substring_reject,
)
from .graph import (
    CategoryGraph,
    UNREACHABLE,
    build_graph,
    depth_from_roots,
    is_ancestor,
    load_graph,
    prune_by_depth,
    save_graph,
    siblings,
)
from .pairs import (
    LabeledPair,
    RelationLabel,
    eligible_nodes,
    enumerate_sibling_pairs,
    extract_direct_pairs,
    neutral_candidate_stream,
    sample_neutral_pairs,
    sample_sibling_pairs,
)
from .pipeline import PipelineConfig, run_pipeline
from .seeding import derive_rng
from .similarity import (
    LexicalNGram,
    MissingVectorError,
    PrecomputedVectors,
    SimilarityScorer,
    load_vectors,
    score_many,
    scorer_from_spec,
)
from .sources import EdgeFormat, TaxonomySource, ingest_taxonomy, mix_sources
from .stats import class_composition, top_frequent_words

__version__ = "0.1.0"

__all__ = [
    "CategoryGraph",
    "CategoryLink",
    "ConfigError",
    "DataError",
    "DatasetSpec",
    "EdgeFormat",
    "FilterConfig",
    "FilterTally",
    "IngestReport",
    "LabeledPair",
    "LexicalNGram",
    "LinkType",
    "MissingVectorError",
    "PageRecord",
    "PipelineConfig",
    "PrecomputedVectors",
    "REJECT_REASONS",
    "RawEdge",
    "RelationLabel",
    "Scheme",
    "ScriptFilter",
    "SimilarityScorer",
    "Table",
    "TaxonomySource",
    "TaxopairsError",
    "UNREACHABLE",
    "assemble_dataset",
    "build_graph",
    "category_edges_from_dumps",
    "class_composition",
    "depth_from_roots",
    "derive_rng",
    "eligible_nodes",
    "emit_dataset",
    "enumerate_sibling_pairs",
    "extract_direct_pairs",
    "filter_config_from_json",
    "ingest_taxonomy",
    "is_ancestor",
    "load_graph",
    "load_vectors",
    "mix_sources",
    "neutral_candidate_stream",
    "normalize_title",
    "parse_sql_dump",
    "passes_filter",
    "prune_by_depth",
    "read_edge_tsv",
    "read_rows_tsv",
    "rejection_reason",
    "relation_quotas",
    "run_pipeline",
    "sample_neutral_pairs",
    "sample_sibling_pairs",
    "save_graph",
    "score_many",
    "scorer_from_spec",
    "siblings",
    "split_evenly",
    "substring_reject",
    "synthesize_dumps",
    "top_frequent_words",
    "write_edge_tsv",
    "write_rows_tsv",
]
