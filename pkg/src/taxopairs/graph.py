"""Immutable directed category graph with cycle-safe queries.

Nodes are category titles mapped to dense integer ids; ids follow
sorted title order, so the same edge multiset always produces the same
graph regardless of input order or how the work was split across
workers. Adjacency is stored CSR-style (offset + index arrays) in both
directions: ``parent_*`` maps a child id to its parents, ``child_*`` is
the exact transpose.

Wikipedia's category graph contains cycles, so every traversal here
carries a visited set; nothing assumes a DAG.
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Iterator

import numpy as np

from .dump_ingest import RawEdge
from .errors import DataError

logger = logging.getLogger(__name__)

UNREACHABLE = -1

_SNAPSHOT_MAGIC = b"CATGRAPH"
_SNAPSHOT_VERSION = 1


@dataclass(frozen=True, eq=False)
class CategoryGraph:
    """Dense-id category graph; build with :func:`build_graph`."""

    titles: tuple[str, ...]
    parent_indptr: np.ndarray  # int64, len n+1
    parent_indices: np.ndarray  # int32, len e, sorted within each row
    child_indptr: np.ndarray
    child_indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "_id_by_title", {t: i for i, t in enumerate(self.titles)}
        )

    @property
    def node_count(self) -> int:
        return len(self.titles)

    @property
    def edge_count(self) -> int:
        return int(len(self.parent_indices))

    def node_id(self, title: str) -> int:
        return self._id_by_title[title]

    def __contains__(self, title: str) -> bool:
        return title in self._id_by_title

    def title(self, node: int) -> str:
        return self.titles[node]

    def parents(self, node: int) -> np.ndarray:
        return self.parent_indices[self.parent_indptr[node] : self.parent_indptr[node + 1]]

    def children(self, node: int) -> np.ndarray:
        return self.child_indices[self.child_indptr[node] : self.child_indptr[node + 1]]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield (child_id, parent_id) pairs in canonical (sorted) order."""
        for child in range(self.node_count):
            for parent in self.parents(child):
                yield child, int(parent)

    def edge_title_pairs(self) -> Iterator[RawEdge]:
        for child, parent in self.edges():
            yield RawEdge(self.titles[child], self.titles[parent])


def _csr_from_pairs(pairs: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """CSR arrays for edge id pairs sorted by (row, col). pairs is (e, 2)."""
    counts = np.bincount(pairs[:, 0], minlength=n) if len(pairs) else np.zeros(n, np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, pairs[:, 1].astype(np.int32, copy=True)


def _from_id_edges(titles: tuple[str, ...], id_edges: np.ndarray) -> CategoryGraph:
    n = len(titles)
    if id_edges.size == 0:
        id_edges = np.empty((0, 2), dtype=np.int64)
    forward = id_edges[np.lexsort((id_edges[:, 1], id_edges[:, 0]))]
    backward = id_edges[:, ::-1][np.lexsort((id_edges[:, 0], id_edges[:, 1]))]
    parent_indptr, parent_indices = _csr_from_pairs(forward, n)
    child_indptr, child_indices = _csr_from_pairs(backward, n)
    return CategoryGraph(titles, parent_indptr, parent_indices, child_indptr, child_indices)


def build_graph(edges: Iterable[RawEdge], report: dict | None = None) -> CategoryGraph:
    """Build a CategoryGraph from (child, parent) title edges.

    Duplicate edges collapse to one; self-loops are dropped with a
    counted warning. The node set is every title mentioned by any edge
    (self-loops included), and node ids follow sorted title order, so
    the result is a pure function of the edge multiset.
    """
    children: list[str] = []
    parents: list[str] = []
    for edge in edges:
        children.append(edge.child_title)
        parents.append(edge.parent_title)
    titles = tuple(sorted(set(children) | set(parents)))
    id_by_title = {t: i for i, t in enumerate(titles)}
    if children:
        pairs = np.empty((len(children), 2), dtype=np.int64)
        pairs[:, 0] = [id_by_title[t] for t in children]
        pairs[:, 1] = [id_by_title[t] for t in parents]
        self_loops = int((pairs[:, 0] == pairs[:, 1]).sum())
        if self_loops:
            logger.warning("dropped %d self-loop edge(s)", self_loops)
            pairs = pairs[pairs[:, 0] != pairs[:, 1]]
        unique = np.unique(pairs, axis=0) if len(pairs) else pairs
    else:
        self_loops = 0
        unique = np.empty((0, 2), dtype=np.int64)
    if report is not None:
        report["input_edges"] = len(children)
        report["self_loops_dropped"] = self_loops
        report["unique_edges"] = int(len(unique))
        report["nodes"] = len(titles)
    return _from_id_edges(titles, unique)


def is_ancestor(
    g: CategoryGraph, a: int, b: int, max_depth: int | None = None
) -> bool:
    """True iff `a` is reachable from `b` by one or more parent steps.

    Ancestry is strict: a node is its own ancestor only via a cycle
    through itself. `max_depth` bounds the number of parent steps
    (None = unlimited). Cycle-safe.
    """
    visited = np.zeros(g.node_count, dtype=bool)
    frontier = g.parents(b)
    depth = 1
    while len(frontier) > 0 and (max_depth is None or depth <= max_depth):
        if visited[a] or (frontier == a).any():
            return True
        fresh = frontier[~visited[frontier]]
        visited[fresh] = True
        if len(fresh) == 0:
            break
        frontier = np.concatenate([g.parents(int(u)) for u in fresh]) if len(fresh) else fresh
        frontier = np.unique(frontier)
        frontier = frontier[~visited[frontier]]
        depth += 1
    return False


def siblings(g: CategoryGraph, a: int, b: int) -> bool:
    """True iff `a` and `b` share at least one direct parent."""
    if a == b:
        raise ValueError("siblings() requires two distinct nodes")
    pa, pb = g.parents(a), g.parents(b)
    if len(pa) == 0 or len(pb) == 0:
        return False
    # both rows are sorted
    return bool(len(np.intersect1d(pa, pb, assume_unique=True)))


def depth_from_roots(g: CategoryGraph, roots: Iterable[int]) -> np.ndarray:
    """Shortest hop-count from the root set, following child edges.

    Returns an int32 array indexed by node id; UNREACHABLE (-1) marks
    nodes with no path from any root. BFS with a visited set, so cycles
    are fine. An empty root set is an error.
    """
    root_list = [int(r) for r in roots]
    if not root_list:
        raise DataError("depth_from_roots: empty root set")
    depths = np.full(g.node_count, UNREACHABLE, dtype=np.int32)
    frontier = np.unique(np.array(root_list, dtype=np.int64))
    depths[frontier] = 0
    level = 0
    while len(frontier):
        level += 1
        nxt = (
            np.unique(np.concatenate([g.children(int(u)) for u in frontier]))
            if len(frontier)
            else frontier
        )
        nxt = nxt[depths[nxt] == UNREACHABLE]
        depths[nxt] = level
        frontier = nxt
    return depths


def prune_by_depth(
    g: CategoryGraph,
    depths: np.ndarray,
    min_depth: int = 0,
    max_depth: int | None = None,
) -> CategoryGraph:
    """Induced subgraph on nodes whose depth lies in [min_depth, max_depth].

    Unreachable nodes never survive. Ids are re-densified (sorted title
    order again), so all CategoryGraph invariants hold on the result.
    """
    if max_depth is not None and min_depth > max_depth:
        raise ValueError("min_depth must be <= max_depth")
    keep = depths >= min_depth
    if max_depth is not None:
        keep &= depths <= max_depth
    keep &= depths != UNREACHABLE
    kept_titles = tuple(t for i, t in enumerate(g.titles) if keep[i])
    old_to_new = np.full(g.node_count, -1, dtype=np.int64)
    old_to_new[keep] = np.arange(len(kept_titles))
    kept_edges = [
        (old_to_new[c], old_to_new[p]) for c, p in g.edges() if keep[c] and keep[p]
    ]
    id_edges = np.array(kept_edges, dtype=np.int64) if kept_edges else np.empty((0, 2), np.int64)
    return _from_id_edges(kept_titles, id_edges)


# ---------------------------------------------------------------------------
# Binary snapshot. Layout (all integers little-endian):
#   magic "CATGRAPH" | u32 version | u64 node_count | u64 edge_count
#   u64 title_blob_len | title_blob (UTF-8, concatenated)
#   u64[node_count+1] title_offsets into the blob
#   u64[node_count+1] parent_indptr | u32[edge_count] parent_indices
#   u64[node_count+1] child_indptr  | u32[edge_count] child_indices
# Writing the same graph always produces identical bytes.
# ---------------------------------------------------------------------------


def save_graph(g: CategoryGraph, stream: BinaryIO) -> None:
    """Write the snapshot format documented above."""
    encoded = [t.encode("utf-8") for t in g.titles]
    blob = b"".join(encoded)
    offsets = np.zeros(len(encoded) + 1, dtype="<u8")
    np.cumsum([len(e) for e in encoded], out=offsets[1:])
    stream.write(_SNAPSHOT_MAGIC)
    stream.write(struct.pack("<IQQ", _SNAPSHOT_VERSION, g.node_count, g.edge_count))
    stream.write(struct.pack("<Q", len(blob)))
    stream.write(blob)
    stream.write(offsets.tobytes())
    stream.write(g.parent_indptr.astype("<u8").tobytes())
    stream.write(g.parent_indices.astype("<u4").tobytes())
    stream.write(g.child_indptr.astype("<u8").tobytes())
    stream.write(g.child_indices.astype("<u4").tobytes())


def load_graph(stream: BinaryIO) -> CategoryGraph:
    """Read a snapshot written by :func:`save_graph`."""
    magic = stream.read(len(_SNAPSHOT_MAGIC))
    if magic != _SNAPSHOT_MAGIC:
        raise DataError("not a category-graph snapshot (bad magic)")
    version, n, e = struct.unpack("<IQQ", stream.read(20))
    if version != _SNAPSHOT_VERSION:
        raise DataError(f"unsupported snapshot version {version}")
    (blob_len,) = struct.unpack("<Q", stream.read(8))
    blob = stream.read(blob_len)
    offsets = np.frombuffer(stream.read(8 * (n + 1)), dtype="<u8")
    titles = tuple(
        blob[offsets[i] : offsets[i + 1]].decode("utf-8") for i in range(n)
    )
    parent_indptr = np.frombuffer(stream.read(8 * (n + 1)), dtype="<u8").astype(np.int64)
    parent_indices = np.frombuffer(stream.read(4 * e), dtype="<u4").astype(np.int32)
    child_indptr = np.frombuffer(stream.read(8 * (n + 1)), dtype="<u8").astype(np.int64)
    child_indices = np.frombuffer(stream.read(4 * e), dtype="<u4").astype(np.int32)
    return CategoryGraph(titles, parent_indptr, parent_indices, child_indptr, child_indices)
