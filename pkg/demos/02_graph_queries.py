"""
Category graph queries: ancestry, siblings, depth, pruning
==========================================================

The category hierarchy is a directed graph contributed by hand, so it
contains everything hand-built graphs contain: multiple parents,
diamonds, even cycles. This demo builds the graph from the bundled edge
list and walks through the query surface — all of it cycle-safe.

Run from the repository root::

    python3 demos/02_graph_queries.py
"""

import tempfile
from pathlib import Path

from taxopairs import (
    build_graph,
    depth_from_roots,
    is_ancestor,
    load_graph,
    prune_by_depth,
    read_edge_tsv,
    save_graph,
    siblings,
)

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

# %%
# Build. Node ids are dense and assigned in sorted-title order, so the
# same edge set always produces the same graph, whatever the input order.

report = {}
with open(FIXTURES / "edges.tsv", "rb") as fh:
    g = build_graph(read_edge_tsv(fh), report)
print(f"{g.node_count} categories, {g.edge_count} edges "
      f"(build report: {report})")

# %%
# Local structure: direct parents and children.

holidays = g.node_id("Holidays")
print("\nparents of 'Holidays':", [g.title(p) for p in g.parents(holidays)])
print("children of 'Holidays':", [g.title(c) for c in g.children(holidays)])

# %%
# Ancestry is transitive reachability along child→parent edges. A node
# never counts as its own ancestor unless it sits on a directed cycle.
# max_depth caps the number of hops considered.

eve = g.node_id("New Year's Eve")
for target, cap in (("Days", None), ("Entertainment", None), ("Days", 1)):
    reach = is_ancestor(g, g.node_id(target), eve, max_depth=cap)
    print(f"'{target}' ancestor of 'New Year's Eve' (max_depth={cap}): {reach}")

# %%
# Siblings share at least one direct parent.

pairs = [("Chinese culture", "Folklore"), ("Cantonese music", "Cantonese culture")]
for a, b in pairs:
    print(f"siblings({a!r}, {b!r}) = {siblings(g, g.node_id(a), g.node_id(b))}")

# %%
# Depth is the minimum hop count from a chosen root set — the basis for
# restricting a huge hierarchy to a band of useful generality.

depths = depth_from_roots(g, [g.node_id("Culture")])
reachable = int((depths >= 0).sum())
print(f"\nfrom 'Culture': {reachable} of {g.node_count} categories reachable")
band = prune_by_depth(g, depths, min_depth=1, max_depth=2)
print(f"depth band [1, 2] keeps {band.node_count} categories, e.g. "
      f"{list(band.titles[:5])}")

# %%
# Graphs snapshot to a compact binary file whose bytes depend only on
# the graph, so repeated saves are identical — cheap to cache and diff.

with tempfile.TemporaryDirectory() as scratch:
    snap = Path(scratch) / "graph.catgraph"
    with open(snap, "wb") as fh:
        save_graph(g, fh)
    with open(snap, "rb") as fh:
        reloaded = load_graph(fh)
    same = reloaded.titles == g.titles and reloaded.edge_count == g.edge_count
    print(f"\nsnapshot: {snap.stat().st_size} bytes, roundtrip intact: {same}")
