from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..corpus.labels import CLASS_ORDER

CLASSES = tuple(c.value for c in CLASS_ORDER)


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    counts: np.ndarray          # [true][predicted]
    classes: tuple[str, ...] = CLASSES

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class ClassificationReport:
    per_class: dict
    accuracy: float
    weighted: ClassMetrics
    macro: ClassMetrics

    def as_dict(self) -> dict:
        def m(x: ClassMetrics):
            return {"precision": x.precision, "recall": x.recall, "f1": x.f1, "support": x.support}
        return {
            "per_class": {c: m(v) for c, v in self.per_class.items()},
            "overall": {"accuracy": self.accuracy, "weighted": m(self.weighted), "macro": m(self.macro)},
        }


def confusion_matrix(y_true, y_pred, classes=CLASSES) -> ConfusionMatrix:
    index = {c: k for k, c in enumerate(classes)}
    counts = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(counts, tuple(classes))


def _ratio(num: float, den: float) -> float:
    return float(num / den) if den else 0.0


def classification_report(cm: ConfusionMatrix) -> ClassificationReport:
    """Per-class precision/recall/F1 plus accuracy and weighted/macro averages.

    Any ratio with a zero denominator is reported as 0.0. Weighted averages
    use the true-class counts, so weighted recall equals accuracy.
    """
    c = np.asarray(cm.counts, dtype=np.float64)
    diag = np.diag(c)
    rows, cols = c.sum(axis=1), c.sum(axis=0)
    total = c.sum()
    per = {}
    for k, name in enumerate(cm.classes):
        p = _ratio(diag[k], cols[k])
        r = _ratio(diag[k], rows[k])
        f = _ratio(2 * p * r, p + r)
        per[name] = ClassMetrics(p, r, f, int(rows[k]))
    w = rows / total if total else np.zeros_like(rows)
    stack = np.array([[m.precision, m.recall, m.f1] for m in per.values()])
    wp, _, wf = (w @ stack).tolist() if total else (0.0, 0.0, 0.0)
    # sum_c (n_c / N) * (tp_c / n_c) collapses to the accuracy; use it directly so the identity is exact
    wr = _ratio(diag.sum(), total)
    mp, mr, mf = stack.mean(axis=0).tolist()
    return ClassificationReport(
        per_class=per,
        accuracy=_ratio(diag.sum(), total),
        weighted=ClassMetrics(wp, wr, wf, int(total)),
        macro=ClassMetrics(mp, mr, mf, int(total)),
    )


def evaluate(model, X, labels) -> tuple[ConfusionMatrix, ClassificationReport]:
    cm = confusion_matrix(labels, model.predict(X))
    return cm, classification_report(cm)


def evaluation_document(cm: ConfusionMatrix, report: ClassificationReport, params: dict) -> dict:
    body = report.as_dict()
    return {
        "classes": list(cm.classes),
        "confusion_matrix": cm.counts.tolist(),
        "per_class": body["per_class"],
        "overall": body["overall"],
        "params": params,
    }


REPORT_COLUMNS = ("class", "precision", "recall", "f1", "support")


def write_evaluation(cm: ConfusionMatrix, report: ClassificationReport, params: dict,
                     out_dir: str | Path) -> dict[str, Path]:
    out_dir = Path(out_dir)
    paths = {"json": out_dir / "evaluation.json",
             "confusion": out_dir / "confusion_matrix.csv",
             "report": out_dir / "classification_report.csv"}
    doc = evaluation_document(cm, report, params)
    paths["json"].write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    with open(paths["confusion"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["true\\pred", *cm.classes])
        for c, row in zip(cm.classes, cm.counts.tolist()):
            w.writerow([c, *row])
    with open(paths["report"], "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        rows = [(c, m) for c, m in report.per_class.items()]
        rows += [("weighted avg", report.weighted), ("macro avg", report.macro)]
        for name, m in rows:
            w.writerow([name, repr(m.precision), repr(m.recall), repr(m.f1), m.support])
        w.writerow(["accuracy", "", "", repr(report.accuracy), int(cm.counts.sum())])
    return paths
