from __future__ import annotations

import json

import numpy as np
import pytest

from aggrospeech.ablation import CSV_COLUMNS, AblationPlan, run_ablation, write_ablation
from aggrospeech.classifier import SplitSpec, build_grid, split
from aggrospeech.classifier.pipeline import evaluate_split, fit_matrix
from aggrospeech.features.registry import GROUP_ORDER, FeatureGroup, default_registry
from aggrospeech.testing.synthetic import additive_signal, shimmer_only_signal

# reduced grid keeps the 8-row fixtures fast; the protocol is unchanged
FAST = dict(kernels=("linear",), Cs=(0.1, 1.0))

ROW_NAMES = ["Shimmer", "+F0", "+Jitter", "+Intensity", "+Spectral Flux",
             "+Mean length of voiced and voiceless regions",
             "+Rate of loudness peaks + continuous voiced regions per second"]


@pytest.fixture(scope="module")
def shimmer_rows():
    return run_ablation(shimmer_only_signal(seed=0), AblationPlan(split=SplitSpec(seed=0), **FAST))


@pytest.fixture(scope="module")
def additive_rows():
    return run_ablation(additive_signal(seed=0), AblationPlan(split=SplitSpec(seed=0), **FAST))


def test_table_structure(additive_rows):
    assert len(additive_rows) == 8
    assert [r.prefix for r in additive_rows[:7]] == ROW_NAMES
    assert additive_rows[7].prefix.startswith("+Extended")
    sizes = default_registry().group_sizes()
    assert [r.feature_count for r in additive_rows] == list(np.cumsum([sizes[g] for g in GROUP_ORDER]))


def test_shimmer_only_is_flat(shimmer_rows):
    first = shimmer_rows[0].accuracy
    for r in shimmer_rows[1:]:
        assert abs(r.accuracy - first) <= 0.02, (r.prefix, r.accuracy, first)


def test_additive_is_non_decreasing(additive_rows):
    acc = [r.accuracy for r in additive_rows]
    assert all(b >= a for a, b in zip(acc, acc[1:])), acc
    assert acc[-1] > acc[0]


def test_row_one_equals_direct_run():
    m = additive_signal(seed=1)
    plan = AblationPlan(groups=(FeatureGroup.SHIMMER,), split=SplitSpec(seed=1), **FAST)
    rows = run_ablation(m, plan)
    assert len(rows) == 1
    sub = m.project([FeatureGroup.SHIMMER])
    outcome = fit_matrix(sub, SplitSpec(seed=1), build_grid(2, **{"kernels": ("linear",), "Cs": (0.1, 1.0)}))
    _, rep = evaluate_split(outcome.model, sub, outcome.split.test)
    assert rows[0].accuracy == rep.accuracy
    assert rows[0].weighted_f1 == rep.weighted.f1
    assert (rows[0].kernel, rows[0].C, rows[0].gamma) == (outcome.search.best.kernel, outcome.search.best.C,
                                                          outcome.search.best.gamma)


def test_split_shared_across_rows():
    m = additive_signal(seed=2)
    labels = np.asarray(m.labels)
    a = split(labels, SplitSpec(seed=2))
    b = split(np.asarray(m.project([FeatureGroup.SHIMMER]).labels), SplitSpec(seed=2))
    assert np.array_equal(a.test, b.test)


def test_deterministic(tmp_path):
    m = additive_signal(seed=3, n_per_type=60)
    plan = AblationPlan(split=SplitSpec(seed=3), **FAST)
    d1, d2 = tmp_path / "a", tmp_path / "b"
    d1.mkdir(), d2.mkdir()
    write_ablation(run_ablation(m, plan), d1)
    write_ablation(run_ablation(m, plan, jobs=2), d2)
    for name in ("ablation.csv", "ablation.json"):
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes()


def test_output_files(additive_rows, tmp_path):
    paths = write_ablation(additive_rows, tmp_path)
    header = paths["csv"].read_text().splitlines()[0]
    assert header == ",".join(CSV_COLUMNS)
    doc = json.loads(paths["json"].read_text())
    assert len(doc["rows"]) == 8


def test_plan_must_be_increasing():
    with pytest.raises(ValueError):
        AblationPlan(groups=(FeatureGroup.F0, FeatureGroup.SHIMMER))
    with pytest.raises(ValueError):
        AblationPlan(groups=())
