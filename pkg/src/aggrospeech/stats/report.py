"""Per-feature ANOVA + Tukey correlate report, with CSV/JSON emitters."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from ..corpus.labels import CLASS_ORDER
from ..errors import ClassTooSmall, DegenerateVariance, MissingFeature
from ..features.registry import STUDY_FEATURES
from .anova import AnovaResult, GroupedSamples, one_way_anova
from .tukey import DEFAULT_ALPHAS, TukeyResult, tukey_hsd


@dataclass(frozen=True)
class FeatureRow:
    feature: str
    anova: AnovaResult | None
    tukey: TukeyResult | None
    degenerate: bool = False


@dataclass(frozen=True)
class CorrelateReport:
    classes: tuple[str, ...]
    rows: tuple[FeatureRow, ...]
    class_means: tuple[tuple[str, tuple[float, ...]], ...]
    class_counts: tuple[int, ...]

    def row(self, feature: str) -> FeatureRow:
        for r in self.rows:
            if r.feature == feature:
                return r
        raise KeyError(feature)

    @property
    def pair_names(self) -> list[tuple[str, str]]:
        return list(combinations(self.classes, 2))


def correlate_report(matrix, study_features=STUDY_FEATURES, alphas=DEFAULT_ALPHAS) -> CorrelateReport:
    names = matrix.registry.names
    for f in study_features:
        if f not in names:
            raise MissingFeature(f"feature store lacks study feature {f!r}")
    labels = np.asarray(matrix.labels)
    classes = []
    for c in CLASS_ORDER:
        n = int((labels == c.value).sum())
        if n == 1:
            raise ClassTooSmall(f"class {c.value} has a single sample")
        if n >= 2:
            classes.append(c.value)
    if len(classes) < 2:
        raise ClassTooSmall("need at least two classes with two or more samples each")

    rows, means = [], []
    for f in study_features:
        col = matrix.column(f)
        grouped = GroupedSamples(f, tuple((c, col[labels == c]) for c in classes))
        means.append((f, tuple(float(v.mean()) for v in grouped.values)))
        try:
            anova = one_way_anova(grouped)
        except DegenerateVariance:
            rows.append(FeatureRow(f, None, None, degenerate=True))
            continue
        rows.append(FeatureRow(f, anova, tukey_hsd(grouped, alphas, anova)))
    counts = tuple(int((labels == c).sum()) for c in classes)
    return CorrelateReport(tuple(classes), tuple(rows), tuple(means), counts)


def _alpha_tag(alpha: float) -> str:
    return f"{alpha:g}".replace("0.", "")


def report_records(report: CorrelateReport, alphas=DEFAULT_ALPHAS) -> list[dict]:
    records = []
    for row in report.rows:
        rec = {"feature": row.feature, "degenerate": row.degenerate}
        a = row.anova
        rec.update({
            "F": a.f_statistic if a else None,
            "df_between": a.df_between if a else None,
            "df_within": a.df_within if a else None,
            "p": a.p_value if a else None,
            "p_underflow": a.p_underflow if a else False,
        })
        pairs = {(p.class_a, p.class_b): p for p in row.tukey.pairs} if row.tukey else {}
        for ca, cb in report.pair_names:
            p = pairs.get((ca, cb))
            key = f"{ca}_{cb}"
            rec[f"mean_diff_{key}"] = p.mean_diff if p else None
            rec[f"q_{key}"] = p.q_statistic if p else None
            rec[f"p_{key}"] = p.p_value if p else None
            for alpha in alphas:
                rec[f"sig{_alpha_tag(alpha)}_{key}"] = p.significant_at(alpha) if p else False
        records.append(rec)
    return records


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_report(report: CorrelateReport, out_dir: str | Path, alphas=DEFAULT_ALPHAS) -> dict[str, Path]:
    out_dir = Path(out_dir)
    records = report_records(report, alphas)
    paths = {
        "csv": out_dir / "stats_report.csv",
        "json": out_dir / "stats_report.json",
        "means": out_dir / "class_means.csv",
    }
    header = list(records[0]) if records else ["feature"]
    with open(paths["csv"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for rec in records:
            w.writerow([_cell(rec[h]) for h in header])
    doc = {
        "classes": list(report.classes),
        "class_counts": dict(zip(report.classes, report.class_counts)),
        "alphas": list(alphas),
        "features": records,
    }
    paths["json"].write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    with open(paths["means"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["feature", *report.classes])
        for f, m in report.class_means:
            w.writerow([f, *(repr(x) for x in m)])
        w.writerow(["n", *report.class_counts])
    return paths
