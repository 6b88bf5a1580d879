"""Balancing, quota arithmetic, dedup, split assembly, file emission."""

from __future__ import annotations

import json
import random
from collections import Counter

import pytest

from taxopairs import (
    DatasetSpec,
    FilterConfig,
    LabeledPair,
    RelationLabel,
    Scheme,
    assemble_dataset,
    emit_dataset,
    read_rows_tsv,
    relation_quotas,
    split_evenly,
    write_rows_tsv,
)
from taxopairs.dataset import config_hash, describe_scorer
from taxopairs.errors import ConfigError, DataError
from taxopairs.similarity import LexicalNGram, PrecomputedVectors

C, P, N, S = (
    RelationLabel.CHILD,
    RelationLabel.PARENT,
    RelationLabel.NEUTRAL,
    RelationLabel.SIBLING,
)


def big_pools(size_each: int = 400) -> dict[RelationLabel, list[LabeledPair]]:
    return {
        rel: [
            LabeledPair(f"{rel.value} left {k}", f"{rel.value} right {k}", rel)
            for k in range(size_each)
        ]
        for rel in RelationLabel
    }


def spec_for(scheme: Scheme, train: int, dev: int, seed: int = 42) -> DatasetSpec:
    return DatasetSpec(scheme=scheme, seed=seed, train_size=train, dev_size=dev)


class TestSplitEvenly:
    def test_examples(self):
        assert split_evenly(100_000, 3) == [33334, 33333, 33333]
        assert split_evenly(100_000, 4) == [25000, 25000, 25000, 25000]
        assert split_evenly(6, 2) == [3, 3]
        assert split_evenly(3, 3) == [1, 1, 1]
        assert split_evenly(5, 3) == [2, 2, 1]
        assert split_evenly(0, 3) == [0, 0, 0]

    def test_properties(self):
        rng = random.Random(0)
        for _ in range(300):
            total, buckets = rng.randint(0, 10_000), rng.randint(1, 12)
            parts = split_evenly(total, buckets)
            assert sum(parts) == total
            assert max(parts) - min(parts) <= 1
            assert parts == sorted(parts, reverse=True)  # remainder leftmost

    def test_zero_buckets_rejected(self):
        with pytest.raises(ValueError):
            split_evenly(10, 0)


class TestRelationQuotas:
    def test_threeway(self):
        assert relation_quotas(Scheme.THREEWAY, 100_000) == {
            C: 33334, P: 33333, N: 33333,
        }

    def test_fourway(self):
        assert relation_quotas(Scheme.FOURWAY, 100) == {C: 25, P: 25, N: 25, S: 25}

    def test_binary_child_vs_rest(self):
        # entail half is all Child; rest half splits across three relations
        assert relation_quotas(Scheme.BINARY_CHILD_VS_REST, 6) == {C: 3, P: 1, N: 1, S: 1}
        assert relation_quotas(Scheme.BINARY_CHILD_VS_REST, 100) == {
            C: 50, P: 17, N: 17, S: 16,
        }

    def test_binary_child_parent_vs_rest(self):
        assert relation_quotas(Scheme.BINARY_CHILD_PARENT_VS_REST, 100) == {
            C: 25, P: 25, N: 25, S: 25,
        }
        # odd quotas: earliest class and earliest relation get the extras
        assert relation_quotas(Scheme.BINARY_CHILD_PARENT_VS_REST, 7) == {
            C: 2, P: 2, N: 2, S: 1,
        }

    def test_totals_match_split_size(self):
        rng = random.Random(1)
        for scheme in Scheme:
            for _ in range(50):
                size = rng.randint(0, 5000)
                assert sum(relation_quotas(scheme, size).values()) == size


class TestAssemble:
    @pytest.mark.parametrize("scheme", list(Scheme))
    @pytest.mark.parametrize("train,dev", [(6, 6), (99, 7), (240, 24)])
    def test_balance_within_one(self, scheme, train, dev):
        spec = spec_for(scheme, train, dev)
        got_train, got_dev = assemble_dataset(spec, big_pools())
        for rows, size in ((got_train, train), (got_dev, dev)):
            assert len(rows) == size
            counts = Counter(label for _, _, label in rows)
            assert set(counts) <= set(scheme.class_names)
            assert max(counts.values()) - min(counts.values()) <= 1

    def test_train_dev_disjoint(self):
        spec = spec_for(Scheme.THREEWAY, 300, 60)
        train, dev = assemble_dataset(spec, big_pools())
        train_keys = {(a, b) for a, b, _ in train}
        dev_keys = {(a, b) for a, b, _ in dev}
        assert not (train_keys & dev_keys)

    def test_duplicate_ordered_pair_kept_once(self):
        pools = big_pools(50)
        clone = pools[C][0]
        pools[N] = [LabeledPair(clone.text1, clone.text2, N)] + pools[N]
        spec = spec_for(Scheme.THREEWAY, 120, 12)
        train, dev = assemble_dataset(spec, pools)
        all_keys = [(a, b) for a, b, _ in train + dev]
        assert len(all_keys) == len(set(all_keys))

    def test_earliest_relation_wins_contested_pair(self):
        # the same ordered pair offered as Child and as Neutral: enum
        # order says Child keeps it, so the neutral pool shrinks
        pools = {
            C: [LabeledPair("x", "y", C)],
            P: [LabeledPair("p", "q", P)],
            N: [LabeledPair("x", "y", N), LabeledPair("m", "n", N)],
        }
        spec = spec_for(Scheme.THREEWAY, 1, 1)
        report = {}
        with pytest.raises(DataError):
            # child pool (1) cannot feed dev (1) and train (1)
            assemble_dataset(spec, pools, report)
        assert report == {}  # report only written on success

    def test_pool_sizes_reported_after_dedup(self):
        pools = {
            C: [LabeledPair("x", "y", C)] * 5 + [LabeledPair("u", "v", C)],
            P: [LabeledPair("a", "b", P), LabeledPair("c", "d", P)],
            N: [LabeledPair("e", "f", N), LabeledPair("g", "h", N)],
        }
        report = {}
        train, dev = assemble_dataset(spec_for(Scheme.THREEWAY, 1, 1), pools, report)
        assert report["pool_sizes"] == {"child": 2, "parent": 2, "neutral": 2}
        # a split of one row goes entirely to the earliest class
        assert report["classes"]["train"] == {"child": 1, "parent": 0, "neutral": 0}
        assert report["classes"]["dev"] == {"child": 1, "parent": 0, "neutral": 0}
        assert {r[2] for r in train} == {"child"} == {r[2] for r in dev}

    def test_shortfall_names_class_and_split(self):
        pools = big_pools(10)
        spec = spec_for(Scheme.FOURWAY, 120, 12)
        with pytest.raises(DataError, match="class 'child'.*train"):
            assemble_dataset(spec, pools)

    def test_deterministic_and_seed_sensitive(self):
        spec = spec_for(Scheme.FOURWAY, 80, 8)
        a = assemble_dataset(spec, big_pools())
        b = assemble_dataset(spec, big_pools())
        c = assemble_dataset(spec_for(Scheme.FOURWAY, 80, 8, seed=43), big_pools())
        assert a == b
        assert a != c

    def test_binary_rest_draws_equally_from_relations(self):
        spec = spec_for(Scheme.BINARY_CHILD_VS_REST, 90, 6)
        train, _ = assemble_dataset(spec, big_pools())
        rest_rows = [(a, b) for a, b, lab in train if lab == "rest"]
        assert len(rest_rows) == 45
        by_relation = Counter(a.split()[0] for a, _ in rest_rows)
        assert by_relation == {"parent": 15, "neutral": 15, "sibling": 15}

    def test_labels_come_from_scheme_classes(self):
        for scheme in Scheme:
            train, dev = assemble_dataset(spec_for(scheme, 12, 4), big_pools())
            labels = {lab for _, _, lab in train + dev}
            assert labels == set(scheme.class_names)

    def test_spec_validation(self):
        with pytest.raises(ConfigError):
            DatasetSpec(scheme=Scheme.THREEWAY, seed=1, train_size=0)
        with pytest.raises(ConfigError):
            DatasetSpec(scheme=Scheme.THREEWAY, seed=1, dev_size=0)
        with pytest.raises(ConfigError):
            DatasetSpec(scheme=Scheme.THREEWAY, seed=1, neutral_oversample=0.0)


class TestSchemes:
    def test_class_structure(self):
        assert Scheme.THREEWAY.class_names == ("child", "parent", "neutral")
        assert Scheme.FOURWAY.class_names == ("child", "parent", "neutral", "sibling")
        assert Scheme.BINARY_CHILD_VS_REST.class_names == ("entail", "rest")
        assert Scheme.BINARY_CHILD_PARENT_VS_REST.class_names == ("entail", "rest")

    def test_sibling_usage(self):
        assert not Scheme.THREEWAY.uses_siblings
        assert Scheme.FOURWAY.uses_siblings
        assert Scheme.BINARY_CHILD_VS_REST.uses_siblings
        assert Scheme.BINARY_CHILD_PARENT_VS_REST.uses_siblings

    def test_values_are_cli_names(self):
        assert {s.value for s in Scheme} == {
            "threeway", "fourway", "binary-child-vs-rest",
            "binary-child-parent-vs-rest",
        }


class TestEmission:
    def test_tsv_roundtrip(self, tmp_path):
        rows = [("a", "b", "child"), ("中华", "文明", "neutral")]
        path = tmp_path / "rows.tsv"
        assert write_rows_tsv(rows, path) == 2
        assert read_rows_tsv(path) == rows
        raw = path.read_bytes()
        assert raw == "a\tb\tchild\n中华\t文明\tneutral\n".encode("utf-8")
        assert b"\r" not in raw

    def test_read_rejects_bad_column_count(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("a\tb\tc\nwrong\n", encoding="utf-8")
        with pytest.raises(DataError, match="line 2"):
            read_rows_tsv(path)

    def test_emit_writes_three_files(self, tmp_path):
        train = [("a", "b", "child")]
        dev = [("c", "d", "parent")]
        out = emit_dataset(train, dev, tmp_path, {"config": {"seed": 1}})
        assert (tmp_path / "train.tsv").exists()
        assert (tmp_path / "dev.tsv").exists()
        report = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
        assert report == out
        assert report["report_version"] == 1
        assert report["rows"] == {"train": 1, "dev": 1}

    def test_emit_empty_splits(self, tmp_path):
        emit_dataset([], [], tmp_path, {})
        assert (tmp_path / "train.tsv").read_bytes() == b""
        report = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
        assert report["rows"] == {"train": 0, "dev": 0}

    def test_emit_is_byte_deterministic(self, tmp_path):
        train = [("a", "b", "child"), ("c", "d", "parent")]
        report = {"classes": {"train": {"child": 1, "parent": 1}}}
        emit_dataset(train, [], tmp_path / "one", dict(report))
        emit_dataset(train, [], tmp_path / "two", dict(report))
        for name in ("train.tsv", "dev.tsv", "report.json"):
            assert (tmp_path / "one" / name).read_bytes() == (
                tmp_path / "two" / name
            ).read_bytes()

    def test_report_json_shape(self, tmp_path):
        emit_dataset([], [], tmp_path, {"b": 1, "a": 2})
        text = (tmp_path / "report.json").read_text(encoding="utf-8")
        assert text.endswith("\n")
        assert text.index('"a"') < text.index('"b"')  # sorted keys


class TestFingerprints:
    def test_describe_scorer(self):
        assert describe_scorer(LexicalNGram(3)) == "lexical:3"
        assert describe_scorer(LexicalNGram(4)) == "lexical:4"
        import numpy as np

        table = {"a": np.ones(8), "b": np.zeros(8)}
        assert describe_scorer(PrecomputedVectors(table)) == "vectors:dim=8:rows=2"

    def test_config_hash_sensitivity(self):
        base = spec_for(Scheme.THREEWAY, 100, 10)
        h = config_hash(base, "lexical:3")
        assert len(h) == 16 and h == config_hash(base, "lexical:3")
        variants = [
            (spec_for(Scheme.FOURWAY, 100, 10), "lexical:3"),
            (spec_for(Scheme.THREEWAY, 101, 10), "lexical:3"),
            (spec_for(Scheme.THREEWAY, 100, 11), "lexical:3"),
            (spec_for(Scheme.THREEWAY, 100, 10, seed=43), "lexical:3"),
            (base, "lexical:4"),
        ]
        for variant_spec, desc in variants:
            assert config_hash(variant_spec, desc) != h
        changed_filter = DatasetSpec(
            scheme=Scheme.THREEWAY, seed=42, train_size=100, dev_size=10,
            filter=FilterConfig(max_len=10),
        )
        assert config_hash(changed_filter, "lexical:3") != h
