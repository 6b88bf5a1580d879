"""Labeled pair extraction: direct edges, ranked neutrals, siblings.

All sampling is driven by RNGs derived from (seed, purpose) so each
stage has its own reproducible stream. Candidate generation is
single-threaded over canonically ordered inputs; only similarity
scoring fans out across processes, in fixed-size chunks merged back in
order, so results are identical for any worker count.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np

from .errors import DataError
from .filters import FilterConfig, FilterTally, passes_filter, substring_reject
from .graph import CategoryGraph, is_ancestor, siblings
from .seeding import derive_rng
from .similarity import SimilarityScorer, score_many

logger = logging.getLogger(__name__)

SCORE_CHUNK = 1024  # fixed so chunk boundaries never depend on worker count


class RelationLabel(Enum):
    CHILD = "child"
    PARENT = "parent"
    NEUTRAL = "neutral"
    SIBLING = "sibling"


@dataclass(frozen=True)
class LabeledPair:
    text1: str
    text2: str
    label: RelationLabel


def _passing_mask(g: CategoryGraph, f: FilterConfig) -> np.ndarray:
    return np.array([passes_filter(t, f) for t in g.titles], dtype=bool)


def eligible_nodes(
    g: CategoryGraph, f: FilterConfig, tally: FilterTally | None = None
) -> np.ndarray:
    """Ids of filter-passing nodes, ascending (= sorted title order)."""
    if tally is None:
        tally = FilterTally()
    keep = [nid for nid in range(g.node_count) if tally.record(g.titles[nid], f)]
    return np.array(keep, dtype=np.int64)


def extract_direct_pairs(
    g: CategoryGraph,
    f: FilterConfig,
    seed: int,
    report: dict | None = None,
) -> list[LabeledPair]:
    """One Child or Parent pair per retained edge, by seeded coin flip.

    Edges are visited in canonical (child title, parent title) order,
    which is exactly the graph's id order, and the coin is flipped only
    for edges that survive filtering, so the output is a pure function
    of (graph, filter config, seed). Child keeps the edge direction
    (child, parent); Parent swaps it.
    """
    rng = derive_rng(seed, "direct-pairs")
    passing = _passing_mask(g, f)
    out: list[LabeledPair] = []
    considered = rejected_filtered = rejected_substring = 0
    n_child = n_parent = 0
    for child, parent in g.edges():
        considered += 1
        if not (passing[child] and passing[parent]):
            rejected_filtered += 1
            continue
        ct, pt = g.titles[child], g.titles[parent]
        if f.substring_filter and substring_reject(ct, pt):
            rejected_substring += 1
            continue
        if rng.random() < 0.5:
            out.append(LabeledPair(ct, pt, RelationLabel.CHILD))
            n_child += 1
        else:
            out.append(LabeledPair(pt, ct, RelationLabel.PARENT))
            n_parent += 1
    if report is not None:
        report.update(
            edges_considered=considered,
            rejected_filtered=rejected_filtered,
            rejected_substring=rejected_substring,
            kept=len(out),
            child=n_child,
            parent=n_parent,
        )
    return out


def neutral_candidate_stream(
    g: CategoryGraph, f: FilterConfig, seed: int
) -> Iterator[tuple[int, int]]:
    """Endless seeded stream of ordered (i, j) id pairs, i != j.

    Draws uniformly from filter-passing nodes. Taking a longer prefix
    of this stream is exactly what a larger oversample does, so
    enlarging the candidate pool never replaces earlier candidates,
    only appends.
    """
    nodes = eligible_nodes(g, f)
    if len(nodes) < 2:
        raise DataError(
            f"neutral sampling needs >= 2 filter-passing nodes, have {len(nodes)}"
        )
    rng = derive_rng(seed, "neutral-candidates")
    n = len(nodes)
    while True:
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        yield int(nodes[i]), int(nodes[j])


_WORKER_SCORER: SimilarityScorer | None = None


def _init_score_worker(scorer: SimilarityScorer) -> None:
    global _WORKER_SCORER
    _WORKER_SCORER = scorer


def _score_chunk(chunk: list[tuple[str, str]]) -> list[float | None]:
    assert _WORKER_SCORER is not None
    return score_many(_WORKER_SCORER, chunk)


def _score_all(
    scorer: SimilarityScorer,
    text_pairs: list[tuple[str, str]],
    workers: int,
) -> list[float | None]:
    """Chunked scoring; chunk size is fixed and merge order is input
    order, so the result does not depend on `workers`."""
    if workers <= 1 or len(text_pairs) <= SCORE_CHUNK:
        return score_many(scorer, text_pairs)
    chunks = [
        text_pairs[i : i + SCORE_CHUNK] for i in range(0, len(text_pairs), SCORE_CHUNK)
    ]
    out: list[float | None] = []
    with ProcessPoolExecutor(
        max_workers=workers, initializer=_init_score_worker, initargs=(scorer,)
    ) as pool:
        for scored in pool.map(_score_chunk, chunks):
            out.extend(scored)
    return out


def sample_neutral_pairs(
    g: CategoryGraph,
    f: FilterConfig,
    scorer: SimilarityScorer,
    needed: int,
    oversample: float,
    seed: int,
    exclude_siblings: bool,
    ancestor_max_depth: int | None = None,
    workers: int = 1,
    report: dict | None = None,
) -> list[LabeledPair]:
    """Top-`needed` unrelated pairs by similarity score.

    Draws ceil(needed * oversample) ordered candidate pairs from the
    seeded stream, drops duplicates (first orientation wins), rejects
    pairs where either node is an ancestor of the other, where one
    title contains the other, and (optionally) siblings; scores the
    survivors and keeps the `needed` best, ties broken by title order.
    """
    if needed < 0:
        raise ValueError("needed must be >= 0")
    if oversample <= 0:
        raise ValueError("oversample must be positive")
    n_draws = math.ceil(needed * oversample)
    stream = neutral_candidate_stream(g, f, seed)
    seen: set[tuple[int, int]] = set()
    candidates: list[tuple[int, int]] = []
    for _ in range(n_draws):
        i, j = next(stream)
        key = (i, j) if i < j else (j, i)
        if key in seen:
            continue
        seen.add(key)
        candidates.append((i, j))

    valid: list[tuple[str, str]] = []
    rej_ancestor = rej_substring = rej_sibling = 0
    for i, j in candidates:
        if is_ancestor(g, i, j, ancestor_max_depth) or is_ancestor(
            g, j, i, ancestor_max_depth
        ):
            rej_ancestor += 1
            continue
        ti, tj = g.titles[i], g.titles[j]
        if f.substring_filter and substring_reject(ti, tj):
            rej_substring += 1
            continue
        if exclude_siblings and siblings(g, i, j):
            rej_sibling += 1
            continue
        valid.append((ti, tj))

    scores = _score_all(scorer, valid, workers)
    scored = [(s, a, b) for (a, b), s in zip(valid, scores) if s is not None]
    missing = len(valid) - len(scored)
    if missing:
        logger.warning("neutral sampling: %d pair(s) skipped, vector missing", missing)
    scored.sort(key=lambda t: (-t[0], t[1], t[2]))
    if report is not None:
        report.update(
            drawn=n_draws,
            unique=len(candidates),
            rejected_ancestor=rej_ancestor,
            rejected_substring=rej_substring,
            rejected_sibling=rej_sibling,
            missing_vector=missing,
            scored=len(scored),
            selected=min(needed, len(scored)),
        )
    if len(scored) < needed:
        raise DataError(
            f"neutral sampling: needed {needed} pairs, achieved {len(scored)} "
            f"(drew {n_draws}, {len(candidates)} unique, {len(valid)} valid); "
            "raise neutral_oversample or loosen filters"
        )
    return [LabeledPair(a, b, RelationLabel.NEUTRAL) for _, a, b in scored[:needed]]


def enumerate_sibling_pairs(g: CategoryGraph, f: FilterConfig) -> list[tuple[int, int]]:
    """All distinct unordered sibling pairs (i < j) surviving filters
    and substring rejection, sorted by id."""
    passing = _passing_mask(g, f)
    found: set[tuple[int, int]] = set()
    for parent in range(g.node_count):
        kids = [int(k) for k in g.children(parent) if passing[k]]
        for x in range(len(kids)):
            for y in range(x + 1, len(kids)):
                found.add((kids[x], kids[y]))  # children() is sorted
    if f.substring_filter:
        found = {
            (a, b) for a, b in found if not substring_reject(g.titles[a], g.titles[b])
        }
    return sorted(found)


def sample_sibling_pairs(
    g: CategoryGraph,
    f: FilterConfig,
    needed: int,
    seed: int,
    report: dict | None = None,
) -> list[LabeledPair]:
    """Uniform sample without replacement of sibling pairs.

    The population is every distinct unordered pair sharing a direct
    parent, both titles filter-passing, substring rejection applied.
    Each sampled pair's orientation is a seeded coin flip.
    """
    if needed < 0:
        raise ValueError("needed must be >= 0")
    if needed == 0:
        if report is not None:
            report.update(population=0, selected=0)
        return []
    population = enumerate_sibling_pairs(g, f)
    if report is not None:
        report.update(population=len(population), selected=min(needed, len(population)))
    if len(population) < needed:
        raise DataError(
            f"sibling sampling: needed {needed} pairs, achieved {len(population)}"
        )
    rng = derive_rng(seed, "sibling-sample")
    chosen = rng.sample(population, needed)
    out = []
    for a, b in chosen:
        ta, tb = g.titles[a], g.titles[b]
        if rng.random() < 0.5:
            ta, tb = tb, ta
        out.append(LabeledPair(ta, tb, RelationLabel.SIBLING))
    return out
