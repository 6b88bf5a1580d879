"""
Other languages, other taxonomies, blended corpora
==================================================

The pipeline is language- and source-agnostic: filters are configured
per language, any child→parent edge export can replace the Wikipedia
category tables, and finished datasets from different sources blend
into one balanced corpus.

Run from the repository root::

    python3 demos/05_multilingual_and_mixing.py
"""

import io
import tempfile
from pathlib import Path

from taxopairs import (
    EdgeFormat,
    FilterConfig,
    PipelineConfig,
    Scheme,
    build_graph,
    class_composition,
    extract_direct_pairs,
    ingest_taxonomy,
    mix_sources,
    read_rows_tsv,
    run_pipeline,
)

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

with tempfile.TemporaryDirectory() as scratch:
    # %%
    # A language config JSON swaps in translated keyword blacklists and,
    # for non-Latin-script wikis, rejects titles containing pure
    # ASCII-letter tokens (loanwords, template debris). The digit and
    # punctuation rules are script-independent already.

    zh_dir = Path(scratch) / "zh"
    report = run_pipeline(
        PipelineConfig(
            out_dir=zh_dir,
            scheme=Scheme.THREEWAY,
            seed=11,
            edges_tsv=FIXTURES / "zh_edges.tsv",
            train_size=18,
            dev_size=6,
            lang_config=FIXTURES / "lang_zh.json",
        )
    )
    print("Chinese-config run:")
    print(f"  rejected by rule: {report['filter']['rejected']}")
    zh_train = read_rows_tsv(zh_dir / "train.tsv")
    for row in zh_train[:3]:
        print("  " + " | ".join(row))

    # %%
    # Any taxonomy that exports child<TAB>parent rows drops straight in —
    # WordNet hyponym→hypernym links, Wikidata subclass-of chains, or a
    # house ontology. Here: a miniature WordNet-style noun export.

    hyponyms = b"""dog\tcanine
canine\tcarnivore
carnivore\tmammal
cat\tfeline
feline\tcarnivore
oak\ttree
birch\ttree
tree\tplant
"""
    source = ingest_taxonomy(
        io.BytesIO(hyponyms),
        format=EdgeFormat.EDGE_TSV,
        name="wordnet-nouns",
        provenance_note="toy excerpt for the demo",
    )
    graph = build_graph(source.edges)
    pairs = extract_direct_pairs(graph, FilterConfig(), seed=5)
    print(f"\n'{source.name}': {graph.node_count} terms, "
          f"{len(pairs)} labeled pairs, e.g.")
    for p in pairs[:3]:
        print(f"  {p.text1!r} -> {p.text2!r} [{p.label.value}]")

    # %%
    # Datasets from two sources blend with per-source quotas, sampled
    # evenly across each input's labels, then reshuffled. Build a second
    # dataset from the English fixture and mix it with the Chinese one.

    en_dir = Path(scratch) / "en"
    run_pipeline(
        PipelineConfig(
            out_dir=en_dir,
            scheme=Scheme.THREEWAY,
            seed=42,
            edges_tsv=FIXTURES / "edges.tsv",
            train_size=60,
            dev_size=12,
        )
    )
    en_train = read_rows_tsv(en_dir / "train.tsv")

    blended = mix_sources(en_train, zh_train, quota_each=18, seed=3)
    print(f"\nblend of 18 + 18 rows: classes {class_composition(blended)}")
    for row in blended[:4]:
        print("  " + " | ".join(row))
