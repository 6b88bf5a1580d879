"""Dataset reporting helpers: token frequencies, class composition."""

from __future__ import annotations

from collections import Counter
from typing import Iterable

from .dataset import Row

# ranked (token, count) rows, counts non-increasing, ties lexicographic
FrequencyReport = list[tuple[str, int]]


def top_frequent_words(
    rows: Iterable[Row],
    k: int,
    stopwords: frozenset[str] = frozenset(),
) -> FrequencyReport:
    """Most frequent whitespace-split tokens over both texts of every row.

    Case is preserved ("American" and "american" are distinct tokens).
    Ranking is by count descending, ties broken by token ascending.
    `stopwords` are dropped before ranking (exact match, case
    sensitive); pass an empty set to rank everything.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    counts: Counter[str] = Counter()
    for text1, text2, _label in rows:
        for token in text1.split():
            counts[token] += 1
        for token in text2.split():
            counts[token] += 1
    for stop in stopwords:
        counts.pop(stop, None)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


def class_composition(rows: Iterable[Row]) -> dict[str, int]:
    """Label value → row count, keys sorted."""
    counts: Counter[str] = Counter()
    for _t1, _t2, label in rows:
        counts[label] += 1
    return dict(sorted(counts.items()))
