from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for `import oracles`

from taxopairs import CategoryGraph, build_graph
from taxopairs.dump_ingest import RawEdge, read_edge_tsv

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture(scope="session")
def fixture_edges() -> list[RawEdge]:
    with open(FIXTURES / "edges.tsv", "rb") as fh:
        return list(read_edge_tsv(fh))


@pytest.fixture(scope="session")
def fixture_edge_pairs(fixture_edges) -> list[tuple[str, str]]:
    return [(e.child_title, e.parent_title) for e in fixture_edges]


@pytest.fixture(scope="session")
def fixture_graph(fixture_edges) -> CategoryGraph:
    return build_graph(fixture_edges)


@pytest.fixture(scope="session")
def zh_edges() -> list[RawEdge]:
    with open(FIXTURES / "zh_edges.tsv", "rb") as fh:
        return list(read_edge_tsv(fh))


def edges_from_pairs(pairs: list[tuple[str, str]]) -> list[RawEdge]:
    return [RawEdge(c, p) for c, p in pairs]


def random_edge_list(rng: random.Random, max_nodes: int = 50) -> list[tuple[str, str]]:
    """Random digraph as title pairs; cycles and self-loops included."""
    n = rng.randint(2, max_nodes)
    names = [f"n{i:02d}" for i in range(n)]
    edges = []
    for _ in range(rng.randint(1, 3 * n)):
        edges.append((rng.choice(names), rng.choice(names)))
    # force at least one directed cycle on larger graphs
    if n >= 3 and rng.random() < 0.8:
        a, b, c = rng.sample(names, 3)
        edges += [(a, b), (b, c), (c, a)]
    return edges
