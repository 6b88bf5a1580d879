"""Dataset assembly: class balancing, train/dev split, TSV emission.

A scheme maps output classes to the source relations that feed them:

* threeway: child / parent / neutral
* fourway: child / parent / neutral / sibling
* binary-child-vs-rest: entail = {Child}, rest = {Parent, Neutral, Sibling}
* binary-child-parent-vs-rest: entail = {Child, Parent}, rest = {Neutral, Sibling}

Per split, class quotas are split_size // class_count with the
remainder going to the earliest classes, so class counts differ by at
most one. A class fed by several relations draws equally from each,
remainder again to the earliest relation. Dev quotas are filled before
train from the same shuffled pools, which makes the splits disjoint by
construction.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable

from .errors import ConfigError, DataError
from .filters import FilterConfig
from .pairs import LabeledPair, RelationLabel
from .seeding import derive_rng
from .similarity import LexicalNGram, PrecomputedVectors, SimilarityScorer

logger = logging.getLogger(__name__)

REPORT_VERSION = 1

# output row: (text1, text2, final label string)
Row = tuple[str, str, str]


class Scheme(Enum):
    THREEWAY = "threeway"
    FOURWAY = "fourway"
    BINARY_CHILD_VS_REST = "binary-child-vs-rest"
    BINARY_CHILD_PARENT_VS_REST = "binary-child-parent-vs-rest"

    @property
    def classes(self) -> tuple[tuple[str, tuple[RelationLabel, ...]], ...]:
        return _SCHEME_CLASSES[self]

    @property
    def uses_siblings(self) -> bool:
        return any(
            RelationLabel.SIBLING in relations for _, relations in self.classes
        )

    @property
    def class_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.classes)


_SCHEME_CLASSES: dict[Scheme, tuple[tuple[str, tuple[RelationLabel, ...]], ...]] = {
    Scheme.THREEWAY: (
        ("child", (RelationLabel.CHILD,)),
        ("parent", (RelationLabel.PARENT,)),
        ("neutral", (RelationLabel.NEUTRAL,)),
    ),
    Scheme.FOURWAY: (
        ("child", (RelationLabel.CHILD,)),
        ("parent", (RelationLabel.PARENT,)),
        ("neutral", (RelationLabel.NEUTRAL,)),
        ("sibling", (RelationLabel.SIBLING,)),
    ),
    Scheme.BINARY_CHILD_VS_REST: (
        ("entail", (RelationLabel.CHILD,)),
        (
            "rest",
            (RelationLabel.PARENT, RelationLabel.NEUTRAL, RelationLabel.SIBLING),
        ),
    ),
    Scheme.BINARY_CHILD_PARENT_VS_REST: (
        ("entail", (RelationLabel.CHILD, RelationLabel.PARENT)),
        ("rest", (RelationLabel.NEUTRAL, RelationLabel.SIBLING)),
    ),
}


@dataclass(frozen=True)
class DatasetSpec:
    scheme: Scheme
    seed: int
    train_size: int = 100_000
    dev_size: int = 5_000
    neutral_oversample: float = 5.0
    filter: FilterConfig = field(default_factory=FilterConfig)

    def __post_init__(self):
        if self.train_size <= 0 or self.dev_size <= 0:
            raise ConfigError("train_size and dev_size must be positive")
        if self.neutral_oversample <= 0:
            raise ConfigError("neutral_oversample must be positive")


def split_evenly(total: int, buckets: int) -> list[int]:
    """total split into `buckets` counts differing by <= 1, remainder
    to the earliest buckets: split_evenly(100000, 3) = [33334, 33333, 33333]."""
    if buckets <= 0:
        raise ValueError("buckets must be positive")
    base, extra = divmod(total, buckets)
    return [base + (1 if k < extra else 0) for k in range(buckets)]


def relation_quotas(scheme: Scheme, split_size: int) -> dict[RelationLabel, int]:
    """How many pairs of each source relation one split consumes."""
    out: dict[RelationLabel, int] = {}
    per_class = split_evenly(split_size, len(scheme.classes))
    for (name, relations), class_quota in zip(scheme.classes, per_class):
        for relation, share in zip(relations, split_evenly(class_quota, len(relations))):
            out[relation] = out.get(relation, 0) + share
    return out


def _dedup_pools(
    pools: dict[RelationLabel, list[LabeledPair]]
) -> dict[RelationLabel, list[LabeledPair]]:
    """Drop repeated ordered (text1, text2) pairs globally. Pools are
    visited in relation enum order, so the earliest relation keeps a
    contested pair."""
    seen: set[tuple[str, str]] = set()
    out: dict[RelationLabel, list[LabeledPair]] = {}
    for relation in RelationLabel:
        kept = []
        for pair in pools.get(relation, []):
            key = (pair.text1, pair.text2)
            if key in seen:
                continue
            seen.add(key)
            kept.append(pair)
        out[relation] = kept
    return out


def assemble_dataset(
    spec: DatasetSpec,
    pools: dict[RelationLabel, list[LabeledPair]],
    report: dict | None = None,
) -> tuple[list[Row], list[Row]]:
    """Balanced (train, dev) splits from per-relation pair pools.

    Each relation pool is deduped, shuffled with its own derived RNG,
    then consumed left to right: dev takes its quota first, train takes
    the next slice, so no ordered pair can land in both splits. Both
    splits get a final seeded shuffle. A pool too small for its summed
    quota is an error naming the output class.
    """
    deduped = _dedup_pools(pools)
    for relation in RelationLabel:
        rng = derive_rng(spec.seed, f"assemble:{relation.value}")
        rng.shuffle(deduped[relation])
    cursors: dict[RelationLabel, int] = {r: 0 for r in RelationLabel}
    splits: dict[str, list[Row]] = {"dev": [], "train": []}
    class_counts: dict[str, dict[str, int]] = {"dev": {}, "train": {}}
    # dev first: disjointness falls out of the shared cursors
    for split_name, split_size in (("dev", spec.dev_size), ("train", spec.train_size)):
        per_class = split_evenly(split_size, len(spec.scheme.classes))
        for (class_name, relations), class_quota in zip(spec.scheme.classes, per_class):
            class_counts[split_name][class_name] = class_quota
            for relation, share in zip(
                relations, split_evenly(class_quota, len(relations))
            ):
                pool = deduped[relation]
                start = cursors[relation]
                take = pool[start : start + share]
                if len(take) < share:
                    raise DataError(
                        f"class {class_name!r}: needs {share} more "
                        f"{relation.value} pair(s) for the {split_name} split, "
                        f"pool has {len(pool) - start} left "
                        f"(pool size {len(pool)} after dedup)"
                    )
                cursors[relation] += share
                splits[split_name].extend(
                    (p.text1, p.text2, class_name) for p in take
                )
        derive_rng(spec.seed, f"shuffle:{split_name}").shuffle(splits[split_name])
    if report is not None:
        report["classes"] = {
            "train": class_counts["train"],
            "dev": class_counts["dev"],
        }
        report["pool_sizes"] = {
            r.value: len(deduped[r]) for r in RelationLabel if deduped[r]
        }
    return splits["train"], splits["dev"]


def describe_scorer(scorer: SimilarityScorer) -> str:
    """Path-free scorer fingerprint for reports and config hashing."""
    if isinstance(scorer, LexicalNGram):
        return f"lexical:{scorer.n}"
    if isinstance(scorer, PrecomputedVectors):
        dim = len(next(iter(scorer.table.values()))) if scorer.table else 0
        return f"vectors:dim={dim}:rows={len(scorer.table)}"
    return type(scorer).__name__


def config_hash(spec: DatasetSpec, scorer_desc: str) -> str:
    payload = {
        "scheme": spec.scheme.value,
        "train_size": spec.train_size,
        "dev_size": spec.dev_size,
        "seed": spec.seed,
        "neutral_oversample": spec.neutral_oversample,
        "filter": spec.filter.to_config_dict(),
        "scorer": scorer_desc,
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def write_rows_tsv(rows: Iterable[Row], path: Path) -> int:
    """`text1<TAB>text2<TAB>label` lines, UTF-8, LF. Returns row count."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for text1, text2, label in rows:
            fh.write(f"{text1}\t{text2}\t{label}\n")
            n += 1
    return n


def read_rows_tsv(path: Path) -> list[Row]:
    rows: list[Row] = []
    with open(path, "r", encoding="utf-8", newline="\n") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 3:
                raise DataError(f"{path.name} line {lineno}: expected 3 columns")
            rows.append((parts[0], parts[1], parts[2]))
    return rows


def emit_dataset(
    train: list[Row],
    dev: list[Row],
    out_dir: Path,
    report: dict,
) -> dict:
    """Write train.tsv, dev.tsv, and report.json under out_dir.

    The report must already be free of machine-local detail (no paths,
    no worker counts, no timings) so reruns stay byte-identical; this
    function only adds row counts and the format version.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = dict(report)
    report["report_version"] = REPORT_VERSION
    report["rows"] = {
        "train": write_rows_tsv(train, out_dir / "train.tsv"),
        "dev": write_rows_tsv(dev, out_dir / "dev.tsv"),
    }
    blob = json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    with open(out_dir / "report.json", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(blob)
    return report
