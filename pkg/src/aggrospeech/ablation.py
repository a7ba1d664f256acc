"""Cumulative feature-group ablation: one classifier run per growing group prefix."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classifier.data import SplitSpec, split
from .classifier.grid import build_grid
from .classifier.pipeline import evaluate_split, fit_matrix
from .classifier.smo import SvmParams
from .features.registry import GROUP_ORDER, FeatureGroup

PREFIX_NAMES = {
    FeatureGroup.SHIMMER: "Shimmer",
    FeatureGroup.F0: "+F0",
    FeatureGroup.JITTER: "+Jitter",
    FeatureGroup.INTENSITY: "+Intensity",
    FeatureGroup.SPECTRAL_FLUX: "+Spectral Flux",
    FeatureGroup.VOICED_LEN: "+Mean length of voiced and voiceless regions",
    FeatureGroup.PEAK_RATE_CVD: "+Rate of loudness peaks + continuous voiced regions per second",
    FeatureGroup.EXTENDED: "+Extended GeMAPS descriptors (MFCC, formants, HNR, spectral balance)",
}

CSV_COLUMNS = ("prefix", "n_features", "accuracy", "weighted_f1", "kernel", "C", "gamma")


@dataclass(frozen=True)
class AblationPlan:
    groups: tuple[FeatureGroup, ...] = GROUP_ORDER
    split: SplitSpec = SplitSpec()
    kernels: tuple[str, ...] = ("linear", "rbf")
    Cs: tuple[float, ...] = (0.1, 1.0, 10.0, 100.0)
    gammas: tuple = ("1/d", 0.01, 0.1)
    base: SvmParams = SvmParams()
    class_weighting: bool = False

    def __post_init__(self):
        ranks = [GROUP_ORDER.index(FeatureGroup(g)) for g in self.groups]
        if not ranks or ranks != sorted(set(ranks)):
            raise ValueError("ablation groups must be a non-empty, strictly increasing subsequence")

    def prefixes(self) -> list[tuple[FeatureGroup, ...]]:
        return [tuple(self.groups[:k + 1]) for k in range(len(self.groups))]


@dataclass(frozen=True)
class AblationRow:
    prefix: str
    feature_count: int
    accuracy: float
    weighted_f1: float
    kernel: str
    C: float
    gamma: float | None

    def as_dict(self) -> dict:
        return {"prefix": self.prefix, "n_features": self.feature_count, "accuracy": self.accuracy,
                "weighted_f1": self.weighted_f1, "kernel": self.kernel, "C": self.C, "gamma": self.gamma}


def run_ablation(matrix, plan: AblationPlan = AblationPlan(), jobs: int = 1) -> list[AblationRow]:
    """Train and test on each cumulative group prefix.

    One split (from the plan's seed) is shared by every row, and the grid
    search is re-run per row, so rows differ only in their columns.
    """
    the_split = split(np.asarray(matrix.labels), plan.split)
    rows = []
    for k, prefix in enumerate(plan.prefixes()):
        sub = matrix.project(prefix)
        grid = build_grid(sub.X.shape[1], plan.kernels, plan.Cs, plan.gammas)
        outcome = fit_matrix(sub, plan.split, grid, plan.base, plan.class_weighting, jobs, the_split)
        _, report = evaluate_split(outcome.model, sub, the_split.test)
        best = outcome.search.best
        name = PREFIX_NAMES[prefix[-1]]
        rows.append(AblationRow(name.lstrip("+") if k == 0 else name, sub.X.shape[1], report.accuracy, report.weighted.f1,
                                best.kernel, best.C, best.gamma))
    return rows


def write_ablation(rows, out_dir: str | Path) -> dict[str, Path]:
    out_dir = Path(out_dir)
    paths = {"csv": out_dir / "ablation.csv", "json": out_dir / "ablation.json"}
    with open(paths["csv"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow([r.prefix, r.feature_count, repr(r.accuracy), repr(r.weighted_f1),
                        r.kernel, repr(r.C), "" if r.gamma is None else repr(r.gamma)])
    paths["json"].write_text(json.dumps({"rows": [r.as_dict() for r in rows]}, indent=2) + "\n",
                             encoding="utf-8")
    return paths
