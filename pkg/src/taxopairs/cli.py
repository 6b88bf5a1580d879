"""Command-line entry point.

Subcommands: `ingest` (SQL dumps → edge TSV), `build-graph` (edge TSV →
binary snapshot, optional depth pruning), `extract` (graph or edges →
dataset), `stats` (dataset → token frequency report), `run` (the whole
pipeline). Logs go to stderr; data goes to files. Exit codes: 0 ok,
1 config error, 2 data error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .dataset import Scheme, read_rows_tsv
from .dump_ingest import IngestReport, write_edge_tsv
from .errors import ConfigError, DataError
from .graph import build_graph, depth_from_roots, prune_by_depth, save_graph
from .pipeline import (
    PipelineConfig,
    ingest_edges,
    load_edges,
    open_maybe_gzip,
    run_pipeline,
)
from .stats import class_composition, top_frequent_words

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; here 2 means data error, so
    # route bad flags to the config-error code instead
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


# dataset option name -> (hard default, required). argparse defaults stay
# None so a config file can fill anything a flag did not set explicitly.
_DATASET_DEFAULTS: dict[str, tuple[object, bool]] = {
    "scheme": (None, True),
    "seed": (None, True),
    "out_dir": (None, True),
    "train_size": (100_000, False),
    "dev_size": (5_000, False),
    "oversample": (5.0, False),
    "scorer": ("lexical:3", False),
    "lang_config": (None, False),
    "workers": (1, False),
    "ancestor_max_depth": (None, False),
}

_PATH_KEYS = {"out_dir", "lang_config", "page", "categorylinks", "edges", "graph",
              "save_edges", "save_graph"}


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--config",
        type=Path,
        help="JSON file of option values; explicit flags override it",
    )
    p.add_argument(
        "--scheme",
        choices=[s.value for s in Scheme],
        help="label scheme for the output dataset (required)",
    )
    p.add_argument("--seed", type=int, help="RNG seed (required: no wall-clock default)")
    p.add_argument("--train-size", type=int)
    p.add_argument("--dev-size", type=int)
    p.add_argument("--oversample", type=float, help="neutral candidate multiplier (default 5.0)")
    p.add_argument(
        "--scorer",
        help="similarity scorer: lexical[:n] or vectors:<tsv path> (default lexical:3)",
    )
    p.add_argument("--lang-config", type=Path, help="JSON filter overrides (keywords, script filter, max_len)")
    p.add_argument("--out-dir", type=Path)
    p.add_argument("--workers", type=int, help="processes for similarity scoring (default 1)")
    p.add_argument(
        "--ancestor-max-depth",
        type=int,
        help="bound ancestor checks during neutral sampling (default: unlimited)",
    )


def _merge_config(args, input_keys: tuple[str, ...]) -> None:
    """Resolve each option as: explicit flag, else config file, else
    default; then enforce the required ones."""
    from_file: dict = {}
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                from_file = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad config JSON: {exc}") from None
        if not isinstance(from_file, dict):
            raise ConfigError("config file must hold a JSON object")
        known = set(_DATASET_DEFAULTS) | set(input_keys)
        unknown = set(from_file) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged_defaults = dict(_DATASET_DEFAULTS)
    for key in input_keys:
        merged_defaults.setdefault(key, (None, False))
    for key, (default, required) in merged_defaults.items():
        value = getattr(args, key, None)
        if value is None:
            value = from_file.get(key, default)
            if value is not None and key in _PATH_KEYS:
                value = Path(value)
        if value is None and required:
            raise ConfigError(f"missing required option: --{key.replace('_', '-')}")
        setattr(args, key, value)


def _cmd_ingest(args) -> None:
    report = IngestReport()
    edges = ingest_edges(args.page, args.categorylinks, report=report)
    with open(args.out, "wb") as fh:
        n = write_edge_tsv(edges, fh)
    logger.info("wrote %d edges to %s", n, args.out)
    for reason, count in sorted(report.errors.items()):
        logger.info("recoverable %s: %d", reason, count)


def _cmd_build_graph(args) -> None:
    g = build_graph(load_edges(args.edges))
    if args.root:
        missing = [t for t in args.root if t not in g]
        if missing:
            raise ConfigError(f"root categories not in graph: {missing}")
        depths = depth_from_roots(g, [g.node_id(t) for t in args.root])
        g = prune_by_depth(g, depths, args.min_depth, args.max_depth)
        logger.info(
            "pruned to depth band [%s, %s]: %d nodes, %d edges",
            args.min_depth,
            "inf" if args.max_depth is None else args.max_depth,
            g.node_count,
            g.edge_count,
        )
    elif args.min_depth != 0 or args.max_depth is not None:
        raise ConfigError("depth pruning needs at least one --root")
    with open(args.out, "wb") as fh:
        save_graph(g, fh)
    logger.info("graph snapshot: %d nodes, %d edges -> %s", g.node_count, g.edge_count, args.out)


def _pipeline_config(args, page=None, categorylinks=None, edges=None, graph=None) -> PipelineConfig:
    return PipelineConfig(
        out_dir=args.out_dir,
        scheme=Scheme(args.scheme),
        seed=args.seed,
        page_sql=page,
        categorylinks_sql=categorylinks,
        edges_tsv=edges,
        graph_snapshot=graph,
        train_size=args.train_size,
        dev_size=args.dev_size,
        neutral_oversample=args.oversample,
        scorer_spec=args.scorer,
        lang_config=args.lang_config,
        workers=args.workers,
        ancestor_max_depth=args.ancestor_max_depth,
        save_edges=getattr(args, "save_edges", None),
        save_graph_path=getattr(args, "save_graph", None),
    )


def _cmd_extract(args) -> None:
    _merge_config(args, ("graph", "edges"))
    if (args.graph is None) == (args.edges is None):
        raise ConfigError("extract needs exactly one of --graph or --edges")
    cfg = _pipeline_config(args, edges=args.edges, graph=args.graph)
    run_pipeline(cfg)


def _cmd_run(args) -> None:
    _merge_config(args, ("page", "categorylinks", "edges", "save_edges", "save_graph"))
    dump_route = args.page is not None or args.categorylinks is not None
    if dump_route == (args.edges is not None):
        raise ConfigError("run needs either --page with --categorylinks, or --edges")
    cfg = _pipeline_config(
        args, page=args.page, categorylinks=args.categorylinks, edges=args.edges
    )
    run_pipeline(cfg)


def _cmd_stats(args) -> None:
    path = args.dataset
    if path.is_dir():
        path = path / f"{args.split}.tsv"
    if not path.is_file():
        raise ConfigError(f"dataset file not found: {path}")
    rows = read_rows_tsv(path)
    payload = {
        "rows": len(rows),
        "classes": class_composition(rows),
        "top_words": [[token, count] for token, count in top_frequent_words(
            rows, args.top, frozenset(args.stopword)
        )],
    }
    blob = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if args.out is None:
        sys.stdout.write(blob)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(blob)
        logger.info("stats written to %s", args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="taxopairs", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="parse SQL dumps into an edge TSV")
    p.add_argument("--page", required=True, type=Path, help="page table dump (.sql or .sql.gz)")
    p.add_argument("--categorylinks", required=True, type=Path, help="categorylinks table dump")
    p.add_argument("--out", required=True, type=Path, help="edge TSV to write")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("build-graph", help="build (and optionally prune) a graph snapshot")
    p.add_argument("--edges", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path, help="snapshot file to write")
    p.add_argument("--root", action="append", default=[], help="root category title (repeatable)")
    p.add_argument("--min-depth", type=int, default=0)
    p.add_argument("--max-depth", type=int, default=None)
    p.set_defaults(func=_cmd_build_graph)

    p = sub.add_parser("extract", help="build a dataset from a graph snapshot or edge TSV")
    p.add_argument("--graph", type=Path, help="graph snapshot from build-graph")
    p.add_argument("--edges", type=Path, help="edge TSV")
    _add_dataset_args(p)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("stats", help="token frequency and class composition of a dataset")
    p.add_argument("--dataset", required=True, type=Path, help="dataset directory or TSV file")
    p.add_argument("--split", choices=["train", "dev"], default="train")
    p.add_argument("--top", type=int, default=20)
    p.add_argument("--stopword", action="append", default=[], help="token to exclude (repeatable)")
    p.add_argument("--out", type=Path, default=None, help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("run", help="full pipeline: dumps or edges to dataset")
    p.add_argument("--page", type=Path)
    p.add_argument("--categorylinks", type=Path)
    p.add_argument("--edges", type=Path)
    p.add_argument("--save-edges", type=Path, help="also write the ingested edge TSV here")
    p.add_argument("--save-graph", type=Path, help="also write the graph snapshot here")
    _add_dataset_args(p)
    p.set_defaults(func=_cmd_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        args.func(args)
    except ConfigError as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG
    except DataError as exc:
        logger.error("%s", exc)
        return EXIT_DATA
    except OSError as exc:
        logger.error("%s", exc)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
