"""Pluggable relatedness scorers for category title pairs.

Two built-ins:

* :class:`LexicalNGram` scores the cosine of character n-gram count
  vectors; self-contained, no data files, the default for tests and
  small runs.
* :class:`PrecomputedVectors` scores the cosine of embeddings loaded
  from a TSV file (``title<TAB>v1 v2 ... vd``), for callers that bring
  their own embedder.

Both return finite floats in [-1, 1] and are exactly symmetric:
score(a, b) == score(b, a) bitwise, because the dot product and the
norm product commute term by term.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from typing import Iterable, Protocol, TextIO

import numpy as np

from .errors import ConfigError, DataError

logger = logging.getLogger(__name__)


class MissingVectorError(DataError):
    """A title has no row in the vector table.

    Recoverable at the pair level: callers count it and move on
    rather than aborting the run.
    """

    def __init__(self, title: str):
        super().__init__(f"no vector for title: {title!r}")
        self.title = title


class SimilarityScorer(Protocol):
    def score(self, a: str, b: str) -> float: ...


def _clamp(x: float) -> float:
    # guard against float drift pushing cosine past +/-1
    return max(-1.0, min(1.0, x))


class LexicalNGram:
    """Cosine over character n-gram counts of the lowercased strings.

    Strings shorter than n contribute themselves as a single feature,
    so score(x, x) is 1.0 for every nonempty x. Empty strings have a
    zero vector and score 0 against everything.
    """

    def __init__(self, n: int = 3):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n

    def _grams(self, text: str) -> Counter[str]:
        low = text.lower()
        if not low:
            return Counter()
        if len(low) < self.n:
            return Counter({low: 1})
        return Counter(low[i : i + self.n] for i in range(len(low) - self.n + 1))

    def score(self, a: str, b: str) -> float:
        ga, gb = self._grams(a), self._grams(b)
        if not ga or not gb:
            return 0.0
        # iterate shared grams in sorted order: deterministic sum order,
        # and the order is identical for (a,b) and (b,a)
        shared = sorted(ga.keys() & gb.keys())
        dot = 0
        for gram in shared:
            dot += ga[gram] * gb[gram]
        if dot == 0:
            return 0.0
        norm2_a = sum(c * c for c in ga.values())
        norm2_b = sum(c * c for c in gb.values())
        # one sqrt over the squared-norm product: identical gram vectors
        # then divide out exactly, so score(x, x) is exactly 1.0
        return _clamp(dot / math.sqrt(norm2_a * norm2_b))


class PrecomputedVectors:
    """Cosine over a title → vector table loaded from file.

    Unknown titles raise :class:`MissingVectorError`. Zero vectors
    score 0 against everything by convention.
    """

    def __init__(self, table: dict[str, np.ndarray]):
        self.table = table

    def score(self, a: str, b: str) -> float:
        va = self.table.get(a)
        if va is None:
            raise MissingVectorError(a)
        vb = self.table.get(b)
        if vb is None:
            raise MissingVectorError(b)
        dot = float(np.dot(va, vb))
        if dot == 0.0:
            return 0.0
        norm2_a = float(np.dot(va, va))
        norm2_b = float(np.dot(vb, vb))
        if norm2_a == 0.0 or norm2_b == 0.0:
            return 0.0
        # one sqrt over the squared-norm product: a title scored against
        # itself divides out exactly, so score(x, x) is exactly 1.0
        return _clamp(dot / math.sqrt(norm2_a * norm2_b))


def load_vectors(stream: TextIO) -> dict[str, np.ndarray]:
    """Read a `title<TAB>v1 v2 ... vd` TSV into a vector table.

    The dimension is fixed by the first row; any later row with a
    different dimension (or an unparsable number) is an error naming
    the 1-based line. Duplicate titles: last row wins, with a warning.
    """
    table: dict[str, np.ndarray] = {}
    dim: int | None = None
    for lineno, line in enumerate(stream, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        title, sep, rest = line.partition("\t")
        if not sep:
            raise DataError(f"vectors line {lineno}: no tab separator")
        parts = rest.split()
        try:
            vec = np.array([float(p) for p in parts], dtype=np.float64)
        except ValueError:
            raise DataError(f"vectors line {lineno}: unparsable number") from None
        if dim is None:
            if len(vec) == 0:
                raise DataError(f"vectors line {lineno}: empty vector")
            dim = len(vec)
        elif len(vec) != dim:
            raise DataError(
                f"vectors line {lineno}: expected {dim} dims, got {len(vec)}"
            )
        if title in table:
            logger.warning("duplicate vector for %r (line %d); keeping the later row", title, lineno)
        table[title] = vec
    return table


def scorer_from_spec(spec: str, open_text=open) -> SimilarityScorer:
    """Build a scorer from a config string.

    `lexical` or `lexical:<n>` → LexicalNGram; `vectors:<path>` →
    PrecomputedVectors loaded from that TSV file. Bad specs are config
    errors, not data errors.
    """
    kind, _, arg = spec.partition(":")
    if kind == "lexical":
        try:
            n = int(arg) if arg else 3
        except ValueError:
            raise ConfigError(f"bad n-gram size in scorer spec: {spec!r}") from None
        if n < 1:
            raise ConfigError("n-gram size must be >= 1")
        return LexicalNGram(n)
    if kind == "vectors":
        if not arg:
            raise ConfigError("vectors scorer needs a path: vectors:<path>")
        with open_text(arg, "r", encoding="utf-8") as fh:
            return PrecomputedVectors(load_vectors(fh))
    raise ConfigError(f"unknown scorer spec: {spec!r}")


def score_many(
    scorer: SimilarityScorer, pairs: Iterable[tuple[str, str]]
) -> list[float | None]:
    """Score a batch; None marks pairs whose vectors are missing."""
    out: list[float | None] = []
    for a, b in pairs:
        try:
            out.append(scorer.score(a, b))
        except MissingVectorError:
            out.append(None)
    return out
