from __future__ import annotations

import csv
import json

import numpy as np
import pytest

from aggrospeech.cli import main
from aggrospeech.config import load_config
from aggrospeech.errors import ConfigError
from aggrospeech.features import default_registry, read_feature_store
from aggrospeech.features.registry import FeatureGroup
from aggrospeech.runlog import MANIFEST_NAME
from aggrospeech.testing.synthetic import blobs, save_matrix, write_corpus

FAST_GRID = "grid:\n  kernels: [linear]\n  C: [0.1, 1.0]\n"
LABELS = ["OAG_T", "NAG", "CAG_T", "NAG", "OAG_NT", "CAG_NT", "NAG", "IRR"]


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.fixture
def small_corpus(tmp_path):
    # 5 labelled intervals over 2 files, one of them IRR
    return write_corpus(tmp_path / "corpus", {"a": ("hi", ["OAG_T", "NAG", "IRR"]), "b": ("en", ["CAG_NT", "NAG"])})


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    manifest = write_corpus(root / "data", {f"c{i}": ("hi" if i % 2 else "en", LABELS) for i in range(6)})
    cfg = root / "cfg.yaml"
    cfg.write_text(f"manifest: {manifest}\n" + FAST_GRID)
    return cfg


def test_extract_counts_rows(small_corpus, tmp_path):
    out = tmp_path / "out"
    assert main(["extract", "--manifest", str(small_corpus), "--out", str(out)]) == 0
    rows = _rows(out / "features.csv")
    assert len(rows) == 1 + 4
    assert rows[0][:3] == ["segment_id", "language", "class"]
    assert [r[2] for r in rows[1:]] == ["OAG", "NAG", "CAG", "NAG"]
    assert [r[1] for r in rows[1:]] == ["hi", "hi", "en", "en"]
    assert len(_rows(out / "features_flags.csv")) == 5
    m = read_feature_store(out / "features.csv")
    assert m.X.shape == (4, len(default_registry()))
    assert (out / MANIFEST_NAME).exists()


def test_language_filter(small_corpus, tmp_path):
    out = tmp_path / "out"
    assert main(["extract", "--manifest", str(small_corpus), "--out", str(out), "--language", "en"]) == 0
    assert [r[1] for r in _rows(out / "features.csv")[1:]] == ["en", "en"]


def test_empty_manifest(tmp_path, caplog):
    m = tmp_path / "empty.csv"
    m.write_text("audio,textgrid,language\n")
    out = tmp_path / "out"
    with caplog.at_level("WARNING"):
        assert main(["extract", "--manifest", str(m), "--out", str(out)]) == 0
    assert len(_rows(out / "features.csv")) == 1
    assert any("no files" in r.message for r in caplog.records)


def test_missing_textgrid_names_path(small_corpus, tmp_path, capsys):
    (small_corpus.parent / "b.TextGrid").unlink()
    code = main(["extract", "--manifest", str(small_corpus), "--out", str(tmp_path / "out")])
    assert code == 2
    assert "b.TextGrid" in capsys.readouterr().err


def test_continue_on_error(small_corpus, tmp_path):
    (small_corpus.parent / "b.TextGrid").write_text("not a textgrid\n")
    out = tmp_path / "out"
    assert main(["extract", "--manifest", str(small_corpus), "--out", str(out), "--continue-on-error"]) == 0
    assert [r[0] for r in _rows(out / "features.csv")[1:]] == ["a#2", "a#4"]


def test_missing_manifest(tmp_path, capsys):
    assert main(["extract", "--manifest", str(tmp_path / "nope.csv"), "--out", str(tmp_path)]) == 2
    assert "nope.csv" in capsys.readouterr().err


def test_usage_and_config_errors(tmp_path):
    with pytest.raises(SystemExit) as e:
        main(["extract", "--jobs", "many"])
    assert e.value.code == 1
    bad = tmp_path / "bad.yaml"
    bad.write_text("seed: 1\nmystery_key: 3\n")
    assert main(["stats", "--config", str(bad)]) == 1
    assert main(["extract", "--out", str(tmp_path)]) == 1   # no manifest configured


def test_config_defaults_and_overrides(tmp_path):
    cfg = load_config(None)
    assert cfg.seed == 0 and cfg.split.fractions == (0.8, 0.1, 0.1) and cfg.language == "all"
    p = tmp_path / "c.yaml"
    p.write_text("seed: 5\nmanifest: m.csv\nframe:\n  window_length: 0.03\n")
    cfg = load_config(p, {"seed": 9})
    assert cfg.seed == 9
    assert cfg.manifest == tmp_path / "m.csv"
    assert cfg.feature_config().frame.window_length == 0.03
    p.write_text("split:\n  fractions: [0.5, 0.5, 0.5]\n")
    with pytest.raises(ConfigError):
        load_config(p)


def _run_all(cfg, out, jobs):
    for cmd in ("extract", "stats", "train", "evaluate", "ablate", "report"):
        assert main([cmd, "--config", str(cfg), "--out", str(out), "--jobs", str(jobs)]) == 0, cmd


def test_full_pipeline_is_deterministic_across_jobs(corpus, tmp_path):
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    _run_all(corpus, a, 1)
    _run_all(corpus, b, 2)
    _run_all(corpus, c, 1)
    names = sorted(p.name for p in a.iterdir() if p.name != MANIFEST_NAME)
    assert {"features.csv", "features_flags.csv", "stats_report.csv", "stats_report.json", "class_means.csv",
            "model.json", "validation.json", "evaluation.json", "confusion_matrix.csv",
            "classification_report.csv", "ablation.csv", "ablation.json", "summary.txt"} == set(names)
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name
        assert (a / name).read_bytes() == (c / name).read_bytes(), name
    assert len(_rows(a / "stats_report.csv")) == 1 + 9
    assert len(_rows(a / "ablation.csv")) == 1 + 8
    assert main(["validate", "--out", str(a)]) == 0

    manifest = json.loads((a / MANIFEST_NAME).read_text())
    assert set(manifest["commands"]) == {"extract", "stats", "train", "evaluate", "ablate", "report"}
    assert len([p for p in a.iterdir() if p.name == MANIFEST_NAME]) == 1
    assert manifest["commands"]["stats"]["inputs"]["features.csv"] == manifest["commands"]["extract"]["outputs"]["features.csv"]


def test_validate_flags_broken_files(corpus, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["extract", "--config", str(corpus), "--out", str(out)]) == 0
    assert main(["validate", "--out", str(out)]) == 0
    (out / "evaluation.json").write_text('{"classes": []}')
    assert main(["validate", "--out", str(out)]) == 2
    assert "evaluation.json" in capsys.readouterr().out


@pytest.fixture(scope="module")
def blob_store(tmp_path_factory):
    root = tmp_path_factory.mktemp("blobs")
    path = root / "features.csv"
    save_matrix(blobs(n_per_class=(90, 90, 90), seed=4, registry=default_registry(), separation=4.0), path)
    cfg = root / "cfg.yaml"
    cfg.write_text(FAST_GRID)
    return path, cfg


def test_train_then_evaluate_blobs(blob_store, tmp_path):
    store, cfg = blob_store
    out = tmp_path / "out"
    assert main(["train", "--config", str(cfg), "--store", str(store), "--out", str(out)]) == 0
    assert main(["evaluate", "--config", str(cfg), "--store", str(store), "--out", str(out)]) == 0
    doc = json.loads((out / "evaluation.json").read_text())
    assert doc["overall"]["accuracy"] >= 0.95
    assert set(doc) >= {"confusion_matrix", "per_class", "overall", "params"}
    assert np.array(doc["confusion_matrix"]).sum() == doc["params"]["test_size"]
    val = json.loads((out / "validation.json").read_text())
    assert val["split"]["sizes"] == {"train": 216, "validate": 27, "test": 27}


def test_evaluate_registry_mismatch(blob_store, tmp_path, capsys):
    store, cfg = blob_store
    out = tmp_path / "out"
    assert main(["train", "--config", str(cfg), "--store", str(store), "--out", str(out)]) == 0
    m = read_feature_store(store)
    narrow = tmp_path / "narrow.csv"
    save_matrix(m.project([FeatureGroup.SHIMMER, FeatureGroup.F0]), narrow)
    assert main(["evaluate", "--config", str(cfg), "--store", str(narrow), "--out", str(out)]) == 2
    assert "registry" in capsys.readouterr().err


def test_stats_single_class(tmp_path, capsys):
    m = blobs(n_per_class=(0, 0, 12), registry=default_registry())
    store = tmp_path / "one.csv"
    save_matrix(m, store)
    assert main(["stats", "--store", str(store), "--out", str(tmp_path)]) == 2
    assert "class" in capsys.readouterr().err


def test_stats_missing_feature(tmp_path):
    m = blobs(n_per_class=(10, 10, 10), registry=default_registry()).project([FeatureGroup.SHIMMER])
    store = tmp_path / "s.csv"
    save_matrix(m, store)
    assert main(["stats", "--store", str(store), "--out", str(tmp_path)]) == 2


def test_ablate_default_plan_rows(blob_store, tmp_path):
    store, cfg = blob_store
    out = tmp_path / "out"
    assert main(["ablate", "--config", str(cfg), "--store", str(store), "--out", str(out)]) == 0
    assert len(_rows(out / "ablation.csv")) == 1 + 8


def test_report_without_outputs(tmp_path, capsys):
    assert main(["report", "--out", str(tmp_path)]) == 0
    assert "no outputs" in capsys.readouterr().out


def test_store_round_trip(tmp_path):
    m = blobs(n_per_class=(5, 6, 7), registry=default_registry(), seed=9)
    p = tmp_path / "f.csv"
    save_matrix(m, p)
    back = read_feature_store(p)
    assert back.registry.manifest() == m.registry.manifest()
    assert np.array_equal(back.X, m.X)
    assert back.labels == m.labels and back.segment_ids == m.segment_ids


def test_init_config_is_loadable(tmp_path, capsys):
    assert main(["init-config"]) == 0
    p = tmp_path / "c.yaml"
    p.write_text(capsys.readouterr().out)
    assert load_config(p).grid.C == (0.1, 1.0, 10.0, 100.0)
