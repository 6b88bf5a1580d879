"""End-to-end pipeline runs over the fixture taxonomy (library level)."""

from __future__ import annotations

import gzip
import json
import shutil
from pathlib import Path

import pytest

from oracles import EdgeOracle

from taxopairs import (
    PipelineConfig,
    Scheme,
    build_graph,
    load_graph,
    read_edge_tsv,
    read_rows_tsv,
    run_pipeline,
    save_graph,
)
from taxopairs.errors import ConfigError, DataError
from taxopairs.pipeline import open_maybe_gzip

ASCII_LETTERS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")


def cfg_for(out_dir: Path, fixture_dir: Path, **overrides) -> PipelineConfig:
    base = dict(
        out_dir=out_dir,
        scheme=Scheme.THREEWAY,
        seed=42,
        edges_tsv=fixture_dir / "edges.tsv",
        train_size=60,
        dev_size=12,
    )
    base.update(overrides)
    return PipelineConfig(**base)


def read_outputs(out_dir: Path) -> dict[str, bytes]:
    return {
        name: (out_dir / name).read_bytes()
        for name in ("train.tsv", "dev.tsv", "report.json")
    }


class TestRun:
    def test_threeway_run_report(self, tmp_path, fixture_dir):
        report = run_pipeline(cfg_for(tmp_path / "out", fixture_dir))
        assert report["graph"] == {
            "input_edges": 399,
            "self_loops_dropped": 1,
            "unique_edges": 397,
            "nodes": 251,
        }
        assert report["filter"]["checked"] == 251
        assert report["filter"]["passed"] == 242
        assert report["direct"]["kept"] == 215
        assert report["classes"]["train"] == {"child": 20, "parent": 20, "neutral": 20}
        assert report["classes"]["dev"] == {"child": 4, "parent": 4, "neutral": 4}
        assert report["rows"] == {"train": 60, "dev": 12}
        assert report["report_version"] == 1
        assert len(report["config_hash"]) == 16
        on_disk = json.loads((tmp_path / "out" / "report.json").read_text("utf-8"))
        assert on_disk == report

    def test_emitted_rows_are_sound(self, tmp_path, fixture_dir, fixture_edge_pairs):
        run_pipeline(cfg_for(tmp_path / "out", fixture_dir))
        oracle = EdgeOracle(fixture_edge_pairs)
        for split in ("train", "dev"):
            rows = read_rows_tsv(tmp_path / "out" / f"{split}.tsv")
            for t1, t2, label in rows:
                if label == "child":
                    assert oracle.has_edge(t1, t2), (split, t1, t2)
                elif label == "parent":
                    assert oracle.has_edge(t2, t1), (split, t1, t2)
                else:
                    assert label == "neutral"
                    assert not oracle.is_ancestor(t1, t2)
                    assert not oracle.is_ancestor(t2, t1)

    def test_reruns_are_byte_identical(self, tmp_path, fixture_dir):
        run_pipeline(cfg_for(tmp_path / "a", fixture_dir))
        run_pipeline(cfg_for(tmp_path / "b", fixture_dir))
        assert read_outputs(tmp_path / "a") == read_outputs(tmp_path / "b")

    def test_worker_count_invisible_in_outputs(self, tmp_path, fixture_dir):
        run_pipeline(cfg_for(tmp_path / "a", fixture_dir, workers=1))
        run_pipeline(cfg_for(tmp_path / "b", fixture_dir, workers=4))
        assert read_outputs(tmp_path / "a") == read_outputs(tmp_path / "b")

    def test_report_carries_no_machine_local_detail(self, tmp_path, fixture_dir):
        out = tmp_path / "deeply" / "nested" / "out"
        run_pipeline(cfg_for(out, fixture_dir, workers=3))
        text = (out / "report.json").read_text("utf-8")
        assert str(tmp_path) not in text
        assert "fixtures" not in text
        assert "workers" not in text
        assert "edges.tsv" not in text

    @pytest.mark.parametrize(
        "scheme,train,dev",
        [
            (Scheme.FOURWAY, 80, 16),
            (Scheme.BINARY_CHILD_VS_REST, 90, 12),
            (Scheme.BINARY_CHILD_PARENT_VS_REST, 90, 12),
        ],
    )
    def test_sibling_schemes_run_and_balance(self, tmp_path, fixture_dir, scheme, train, dev):
        report = run_pipeline(
            cfg_for(tmp_path / "out", fixture_dir, scheme=scheme, seed=7,
                    train_size=train, dev_size=dev)
        )
        counts = report["classes"]["train"]
        assert sum(counts.values()) == train
        assert max(counts.values()) - min(counts.values()) <= 1
        if scheme is Scheme.FOURWAY:
            assert "sibling" in counts
            assert report["sibling"]["selected"] > 0


class TestInputRoutes:
    def test_three_routes_same_dataset(self, tmp_path, fixture_dir):
        run_pipeline(cfg_for(tmp_path / "edges", fixture_dir))

        dump_cfg = cfg_for(
            tmp_path / "dumps", fixture_dir, edges_tsv=None,
            page_sql=fixture_dir / "page.sql",
            categorylinks_sql=fixture_dir / "categorylinks.sql",
        )
        run_pipeline(dump_cfg)

        with open(fixture_dir / "edges.tsv", "rb") as fh:
            g = build_graph(read_edge_tsv(fh))
        snap = tmp_path / "graph.bin"
        with open(snap, "wb") as fh:
            save_graph(g, fh)
        run_pipeline(cfg_for(tmp_path / "snap", fixture_dir, edges_tsv=None,
                             graph_snapshot=snap))

        a = read_outputs(tmp_path / "edges")
        b = read_outputs(tmp_path / "dumps")
        c = read_outputs(tmp_path / "snap")
        assert a == b  # reports included: both routes rebuilt the graph
        assert a["train.tsv"] == c["train.tsv"]
        assert a["dev.tsv"] == c["dev.tsv"]

    def test_gzip_transparent_for_edges(self, tmp_path, fixture_dir):
        gz = tmp_path / "edges.tsv.gz"
        with open(fixture_dir / "edges.tsv", "rb") as src, gzip.open(gz, "wb") as dst:
            shutil.copyfileobj(src, dst)
        run_pipeline(cfg_for(tmp_path / "gz", fixture_dir, edges_tsv=gz))
        run_pipeline(cfg_for(tmp_path / "plain", fixture_dir))
        assert read_outputs(tmp_path / "gz") == read_outputs(tmp_path / "plain")

    def test_save_edges_and_graph_side_outputs(self, tmp_path, fixture_dir):
        saved_edges = tmp_path / "edges-copy.tsv"
        saved_graph = tmp_path / "graph.bin"
        run_pipeline(
            cfg_for(tmp_path / "out", fixture_dir, save_edges=saved_edges,
                    save_graph_path=saved_graph)
        )
        assert saved_edges.read_bytes() == (fixture_dir / "edges.tsv").read_bytes()
        with open(saved_graph, "rb") as fh:
            g = load_graph(fh)
        assert g.node_count == 251 and g.edge_count == 397


class TestValidation:
    def test_no_input_route(self, tmp_path, fixture_dir):
        cfg = cfg_for(tmp_path, fixture_dir, edges_tsv=None)
        with pytest.raises(ConfigError, match="exactly one input"):
            run_pipeline(cfg)

    def test_two_input_routes(self, tmp_path, fixture_dir):
        cfg = cfg_for(tmp_path, fixture_dir,
                      graph_snapshot=fixture_dir / "edges.tsv")
        with pytest.raises(ConfigError, match="exactly one input"):
            run_pipeline(cfg)

    def test_dump_route_needs_both_files(self, tmp_path, fixture_dir):
        cfg = cfg_for(tmp_path, fixture_dir, edges_tsv=None,
                      page_sql=fixture_dir / "page.sql")
        with pytest.raises(ConfigError, match="both"):
            run_pipeline(cfg)

    def test_missing_input_file(self, tmp_path, fixture_dir):
        cfg = cfg_for(tmp_path, fixture_dir, edges_tsv=tmp_path / "nope.tsv")
        with pytest.raises(ConfigError, match="not found"):
            run_pipeline(cfg)

    def test_missing_vector_file(self, tmp_path, fixture_dir):
        cfg = cfg_for(tmp_path, fixture_dir, scorer_spec="vectors:/no/such/file.tsv")
        with pytest.raises(ConfigError, match="vector file"):
            run_pipeline(cfg)

    def test_bad_worker_count(self, tmp_path, fixture_dir):
        cfg = cfg_for(tmp_path, fixture_dir, workers=0)
        with pytest.raises(ConfigError, match="workers"):
            run_pipeline(cfg)

    def test_failures_name_their_stage_and_emit_nothing(self, tmp_path, fixture_dir):
        # a starved candidate pool cannot meet the neutral quota
        cfg = cfg_for(tmp_path / "out", fixture_dir, neutral_oversample=0.001)
        with pytest.raises(DataError, match="^neutral-pairs: "):
            run_pipeline(cfg)
        assert not (tmp_path / "out").exists()


class TestLanguageConfigRoute:
    def test_chinese_dataset_has_no_latin_tokens(self, tmp_path, fixture_dir):
        cfg = PipelineConfig(
            out_dir=tmp_path / "zh",
            scheme=Scheme.THREEWAY,
            seed=11,
            edges_tsv=fixture_dir / "zh_edges.tsv",
            train_size=18,
            dev_size=6,
            lang_config=fixture_dir / "lang_zh.json",
        )
        report = run_pipeline(cfg)
        assert report["filter"]["rejected"]["latin_token"] >= 2
        assert report["filter"]["rejected"]["keyword"] >= 3
        for split in ("train", "dev"):
            rows = read_rows_tsv(tmp_path / "zh" / f"{split}.tsv")
            for t1, t2, _ in rows:
                for token in f"{t1} {t2}".split():
                    assert not set(token) & ASCII_LETTERS, token

    def test_zh_decoys_survive_without_lang_config(self, tmp_path, fixture_dir):
        # without the language overrides the Latin-token decoys pass the
        # default filters, proving the config is what excludes them
        cfg = PipelineConfig(
            out_dir=tmp_path / "plain",
            scheme=Scheme.THREEWAY,
            seed=11,
            edges_tsv=fixture_dir / "zh_edges.tsv",
            train_size=18,
            dev_size=6,
        )
        report = run_pipeline(cfg)
        assert report["filter"]["rejected"]["latin_token"] == 0
        assert report["filter"]["passed"] > 44


class TestOpenMaybeGzip:
    def test_binary_plain_and_gz(self, tmp_path):
        plain = tmp_path / "x.bin"
        plain.write_bytes(b"abc")
        with open_maybe_gzip(plain, "rb") as fh:
            assert fh.read() == b"abc"
        gz = tmp_path / "x.bin.gz"
        with gzip.open(gz, "wb") as fh:
            fh.write(b"abc")
        with open_maybe_gzip(gz, "rb") as fh:
            assert fh.read() == b"abc"

    def test_text_plain_and_gz(self, tmp_path):
        gz = tmp_path / "x.txt.gz"
        with gzip.open(gz, "wt", encoding="utf-8") as fh:
            fh.write("中华\n")
        with open_maybe_gzip(gz, "r") as fh:
            assert fh.read() == "中华\n"
        plain = tmp_path / "x.txt"
        plain.write_text("中华\n", encoding="utf-8")
        with open_maybe_gzip(plain, "r") as fh:
            assert fh.read() == "中华\n"
