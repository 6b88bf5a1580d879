"""End-to-end orchestration: dumps or edge files in, dataset out.

Each stage logs its counts to the module logger (the CLI routes that
to stderr); the emitted report.json carries only machine-independent
numbers, so rerunning an identical configuration yields byte-identical
artifacts. Errors raised inside a stage are re-raised with the stage
name prefixed.
"""

from __future__ import annotations

import gzip
import logging
import resource
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

from .dataset import (
    DatasetSpec,
    Scheme,
    assemble_dataset,
    config_hash,
    describe_scorer,
    emit_dataset,
    relation_quotas,
)
from .dump_ingest import (
    IngestReport,
    RawEdge,
    Table,
    category_edges_from_dumps,
    parse_sql_dump,
    read_edge_tsv,
    write_edge_tsv,
)
from .errors import ConfigError, TaxopairsError
from .filters import FilterConfig, FilterTally, filter_config_from_json
from .graph import CategoryGraph, build_graph, load_graph, save_graph
from .pairs import (
    RelationLabel,
    eligible_nodes,
    extract_direct_pairs,
    sample_neutral_pairs,
    sample_sibling_pairs,
)
from .similarity import scorer_from_spec

logger = logging.getLogger(__name__)


def open_maybe_gzip(path: Path, mode: str = "rb", encoding: str | None = None):
    """Transparent .gz handling for CLI-facing inputs. Parsers always
    receive decompressed streams; compression never reaches them.
    Text modes are plain "r"/"w"; text encoding defaults to UTF-8."""
    gz = str(path).endswith(".gz")
    if "b" in mode:
        return gzip.open(path, mode) if gz else open(path, mode)
    if encoding is None:
        encoding = "utf-8"
    if gz:
        return gzip.open(path, mode + "t", encoding=encoding)
    return open(path, mode, encoding=encoding)


@contextmanager
def _stage(name: str):
    logger.info("stage %s: start", name)
    try:
        yield
    except (TaxopairsError, OSError) as exc:
        exc.args = (f"{name}: {exc}",)
        raise
    logger.info("stage %s: done", name)


@dataclass
class PipelineConfig:
    """Everything one `run` needs. Exactly one input route must be set:
    SQL dump pair, edge TSV, or a saved graph snapshot."""

    out_dir: Path
    scheme: Scheme
    seed: int
    page_sql: Path | None = None
    categorylinks_sql: Path | None = None
    edges_tsv: Path | None = None
    graph_snapshot: Path | None = None
    train_size: int = 100_000
    dev_size: int = 5_000
    neutral_oversample: float = 5.0
    scorer_spec: str = "lexical:3"
    lang_config: Path | None = None
    workers: int = 1
    ancestor_max_depth: int | None = None
    save_edges: Path | None = None
    save_graph_path: Path | None = None

    def validate(self) -> None:
        dump_route = self.page_sql is not None or self.categorylinks_sql is not None
        if dump_route and (self.page_sql is None or self.categorylinks_sql is None):
            raise ConfigError("dump input needs both a page and a categorylinks file")
        routes = sum(
            [dump_route, self.edges_tsv is not None, self.graph_snapshot is not None]
        )
        if routes != 1:
            raise ConfigError(
                "exactly one input is required: SQL dumps, an edge TSV, "
                "or a graph snapshot"
            )
        for label, path in (
            ("page dump", self.page_sql),
            ("categorylinks dump", self.categorylinks_sql),
            ("edge file", self.edges_tsv),
            ("graph snapshot", self.graph_snapshot),
            ("language config", self.lang_config),
        ):
            if path is not None and not Path(path).is_file():
                raise ConfigError(f"{label} not found: {path}")
        kind, _, arg = self.scorer_spec.partition(":")
        if kind == "vectors" and arg and not Path(arg).is_file():
            raise ConfigError(f"vector file not found: {arg}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


def ingest_edges(
    page_sql: Path, categorylinks_sql: Path, report: IngestReport | None = None
) -> list[RawEdge]:
    """Stream both dumps and join them into category-to-parent edges."""
    if report is None:
        report = IngestReport()
    with open_maybe_gzip(page_sql, "rb") as page_stream, open_maybe_gzip(
        categorylinks_sql, "rb"
    ) as links_stream:
        pages = parse_sql_dump(page_stream, Table.PAGE, report=report)
        links = parse_sql_dump(links_stream, Table.CATEGORYLINKS, report=report)
        edges = list(category_edges_from_dumps(pages, links, report=report))
    logger.info(
        "ingest: %d edges from %d rows (%d recoverable errors)",
        len(edges),
        report.rows,
        report.error_total,
    )
    return edges


def load_edges(edges_tsv: Path, report: IngestReport | None = None) -> list[RawEdge]:
    with open_maybe_gzip(edges_tsv, "rb") as fh:
        edges = list(read_edge_tsv(fh, report=report))
    logger.info("loaded %d edges from %s", len(edges), edges_tsv)
    return edges


def acquire_graph(cfg: PipelineConfig, report: dict) -> CategoryGraph:
    """Input route → CategoryGraph, filling report['graph']."""
    graph_report: dict = {}
    if cfg.graph_snapshot is not None:
        with _stage("load-graph"):
            with open(cfg.graph_snapshot, "rb") as fh:
                g = load_graph(fh)
            graph_report = {
                "nodes": g.node_count,
                "unique_edges": g.edge_count,
                "from_snapshot": True,
            }
    else:
        if cfg.edges_tsv is not None:
            with _stage("read-edges"):
                edges = load_edges(cfg.edges_tsv)
        else:
            with _stage("ingest"):
                edges = ingest_edges(cfg.page_sql, cfg.categorylinks_sql)
        if cfg.save_edges is not None:
            with _stage("save-edges"):
                with open(cfg.save_edges, "wb") as fh:
                    write_edge_tsv(edges, fh)
        with _stage("build-graph"):
            g = build_graph(edges, report=graph_report)
            logger.info(
                "graph: %d nodes, %d edges", g.node_count, g.edge_count
            )
    if cfg.save_graph_path is not None:
        with _stage("save-graph"):
            with open(cfg.save_graph_path, "wb") as fh:
                save_graph(g, fh)
    report["graph"] = graph_report
    return g


def run_pipeline(cfg: PipelineConfig) -> dict:
    """ingest → graph → extraction → assembly → emit. Returns the
    final report dict (also written to out_dir/report.json)."""
    cfg.validate()
    report: dict = {}
    g = acquire_graph(cfg, report)

    with _stage("configure"):
        if cfg.lang_config is not None:
            with open(cfg.lang_config, "r", encoding="utf-8") as fh:
                fconf = filter_config_from_json(fh)
        else:
            fconf = FilterConfig()
        spec = DatasetSpec(
            scheme=cfg.scheme,
            seed=cfg.seed,
            train_size=cfg.train_size,
            dev_size=cfg.dev_size,
            neutral_oversample=cfg.neutral_oversample,
            filter=fconf,
        )
        scorer = scorer_from_spec(cfg.scorer_spec, open_text=open_maybe_gzip)
        scorer_desc = describe_scorer(scorer)
        quotas = relation_quotas(spec.scheme, cfg.dev_size)
        for relation, n in relation_quotas(spec.scheme, cfg.train_size).items():
            quotas[relation] = quotas.get(relation, 0) + n

    with _stage("filter"):
        tally = FilterTally()
        eligible = eligible_nodes(g, fconf, tally)
        logger.info(
            "filter: %d of %d nodes eligible", len(eligible), g.node_count
        )
        report["filter"] = tally.to_dict()

    pools: dict[RelationLabel, list] = {}
    with _stage("direct-pairs"):
        direct_report: dict = {}
        direct = extract_direct_pairs(g, fconf, cfg.seed, report=direct_report)
        for pair in direct:
            pools.setdefault(pair.label, []).append(pair)
        logger.info(
            "direct pairs: %d kept of %d edges", len(direct), direct_report["edges_considered"]
        )
        report["direct"] = direct_report

    with _stage("neutral-pairs"):
        neutral_report: dict = {}
        pools[RelationLabel.NEUTRAL] = sample_neutral_pairs(
            g,
            fconf,
            scorer,
            needed=quotas[RelationLabel.NEUTRAL],
            oversample=cfg.neutral_oversample,
            seed=cfg.seed,
            exclude_siblings=spec.scheme.uses_siblings,
            ancestor_max_depth=cfg.ancestor_max_depth,
            workers=cfg.workers,
            report=neutral_report,
        )
        logger.info(
            "neutral pairs: %d selected of %d drawn",
            neutral_report["selected"],
            neutral_report["drawn"],
        )
        report["neutral"] = neutral_report

    if spec.scheme.uses_siblings:
        with _stage("sibling-pairs"):
            sibling_report: dict = {}
            pools[RelationLabel.SIBLING] = sample_sibling_pairs(
                g,
                fconf,
                needed=quotas[RelationLabel.SIBLING],
                seed=cfg.seed,
                report=sibling_report,
            )
            logger.info(
                "sibling pairs: %d selected of %d available",
                sibling_report["selected"],
                sibling_report["population"],
            )
            report["sibling"] = sibling_report

    with _stage("assemble"):
        asm_report: dict = {}
        train, dev = assemble_dataset(spec, pools, report=asm_report)
        report.update(asm_report)

    with _stage("emit"):
        report.update(
            seed=cfg.seed,
            scheme=spec.scheme.value,
            train_size=cfg.train_size,
            dev_size=cfg.dev_size,
            neutral_oversample=cfg.neutral_oversample,
            scorer=scorer_desc,
            config_hash=config_hash(spec, scorer_desc),
        )
        final = emit_dataset(train, dev, Path(cfg.out_dir), report)

    peak_kb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    logger.info("peak memory: %.1f MB (stderr only, never in reports)", peak_kb / 1024)
    return final
