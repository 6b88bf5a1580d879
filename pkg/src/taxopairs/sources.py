"""Adapters for external taxonomies and dataset mixing.

Any hierarchy that can be rendered to child-tab-parent text lines
(WordNet hyponym-hypernym exports, Wikidata subclass-of exports, toy
taxonomies) rides the same pipeline as the category dumps: the
contract starts at RawEdge, so filters, sampling, and balancing never
know where the edges came from.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import BinaryIO

from .dataset import Row, split_evenly
from .dump_ingest import IngestReport, RawEdge, read_edge_tsv
from .errors import DataError
from .seeding import derive_rng

logger = logging.getLogger(__name__)


class EdgeFormat(Enum):
    EDGE_TSV = "edge-tsv"


@dataclass(frozen=True)
class TaxonomySource:
    """A named edge collection ready for build_graph."""

    name: str
    edges: tuple[RawEdge, ...]
    provenance_note: str = ""

    def __post_init__(self):
        if not self.name:
            raise ValueError("source name must be non-empty")


def ingest_taxonomy(
    stream: BinaryIO,
    format: EdgeFormat = EdgeFormat.EDGE_TSV,
    name: str = "taxonomy",
    provenance_note: str = "",
    report: IngestReport | None = None,
) -> TaxonomySource:
    """Read an edge export into a TaxonomySource.

    Cycles are allowed (Wikidata has them); build_graph handles them.
    """
    if format is not EdgeFormat.EDGE_TSV:
        raise ValueError(f"unsupported edge format: {format!r}")
    edges = tuple(read_edge_tsv(stream, report=report))
    return TaxonomySource(name=name, edges=edges, provenance_note=provenance_note)


def _balanced_subsample(
    rows: list[Row], quota: int, rng
) -> list[Row]:
    """`quota` rows sampled without replacement, spread evenly over the
    label values present (remainder to lexicographically earliest)."""
    if quota == 0:
        return []
    if not rows:
        raise DataError(f"mix: need {quota} row(s) from an empty dataset")
    by_label: dict[str, list[Row]] = {}
    for row in rows:
        by_label.setdefault(row[2], []).append(row)
    labels = sorted(by_label)
    picked: list[Row] = []
    for label, share in zip(labels, split_evenly(quota, len(labels))):
        group = by_label[label]
        if len(group) < share:
            raise DataError(
                f"mix: class {label!r} has {len(group)} row(s), need {share}"
            )
        picked.extend(rng.sample(group, share))
    return picked


def mix_sources(
    a: list[Row],
    b: list[Row],
    quota_each: int,
    seed: int,
    quota_b: int | None = None,
) -> list[Row]:
    """Blend two emitted datasets into one.

    Takes a seeded uniform subsample of quota_each rows from `a` and
    quota_b (default: quota_each) rows from `b`, each spread evenly
    across that input's label values, then reshuffles the concatenation.
    With quota_each = 0 the result is just the sample of `b`.
    """
    if quota_each < 0 or (quota_b is not None and quota_b < 0):
        raise ValueError("quotas must be >= 0")
    if quota_b is None:
        quota_b = quota_each
    mixed = _balanced_subsample(a, quota_each, derive_rng(seed, "mix:first"))
    mixed += _balanced_subsample(b, quota_b, derive_rng(seed, "mix:second"))
    derive_rng(seed, "mix:shuffle").shuffle(mixed)
    return mixed
