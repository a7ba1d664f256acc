"""CSV feature store plus degeneracy-flag sidecar."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..corpus.labels import CoarseClass
from ..errors import DataError
from .extract import FLAG_NAMES, FeatureVector
from .registry import FeatureRegistry

META_COLUMNS = ("segment_id", "language", "class")


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    registry: FeatureRegistry
    X: np.ndarray
    segment_ids: tuple[str, ...]
    languages: tuple[str, ...]
    labels: tuple[str, ...]

    def __len__(self):
        return len(self.X)

    def column(self, name: str) -> np.ndarray:
        return self.X[:, self.registry.index(name)]

    def rows(self, mask) -> "FeatureMatrix":
        idx = np.flatnonzero(mask) if np.asarray(mask).dtype == bool else np.asarray(mask, dtype=int)
        return FeatureMatrix(self.registry, self.X[idx],
                             tuple(self.segment_ids[i] for i in idx),
                             tuple(self.languages[i] for i in idx),
                             tuple(self.labels[i] for i in idx))

    def for_language(self, language: str) -> "FeatureMatrix":
        if language in ("all", None, ""):
            return self
        return self.rows(np.array([lang == language for lang in self.languages], dtype=bool))

    def project(self, groups) -> "FeatureMatrix":
        cols = self.registry.columns_for(groups)
        return FeatureMatrix(self.registry.subset(groups), self.X[:, cols],
                             self.segment_ids, self.languages, self.labels)

    @classmethod
    def from_vectors(cls, registry: FeatureRegistry, vectors) -> "FeatureMatrix":
        vectors = list(vectors)
        X = np.array([v.values for v in vectors], dtype=np.float64).reshape(len(vectors), len(registry))
        return cls(registry, X, tuple(v.segment_id for v in vectors),
                   tuple(v.language for v in vectors), tuple(v.coarse_class for v in vectors))


def _fmt(x: float) -> str:
    return repr(float(x))


def write_feature_store(path: str | Path, registry: FeatureRegistry, vectors) -> None:
    vectors = list(vectors)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(META_COLUMNS) + registry.column_names())
        for v in vectors:
            w.writerow([v.segment_id, v.language, v.coarse_class] + [_fmt(x) for x in v.values])


def flags_path(store_path: str | Path) -> Path:
    p = Path(store_path)
    return p.with_name(p.stem + "_flags.csv")


def write_flags(path: str | Path, vectors) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["segment_id", *FLAG_NAMES])
        for v in vectors:
            w.writerow([v.segment_id] + [int(bool(v.flags.get(f, False))) for f in FLAG_NAMES])


def read_feature_store(path: str | Path) -> FeatureMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty feature store") from None
        if tuple(header[:3]) != META_COLUMNS:
            raise DataError(f"{path}: header must start with {', '.join(META_COLUMNS)}")
        registry = FeatureRegistry.from_columns(header[3:])
        ids, langs, labels, rows = [], [], [], []
        for lineno, row in enumerate(reader, 2):
            if len(row) != len(header):
                raise DataError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            if row[2] not in CoarseClass.__members__:
                raise DataError(f"{path}:{lineno}: unknown class {row[2]!r}")
            ids.append(row[0])
            langs.append(row[1])
            labels.append(row[2])
            try:
                rows.append([float(x) for x in row[3:]])
            except ValueError:
                raise DataError(f"{path}:{lineno}: non-numeric feature value") from None
    X = np.array(rows, dtype=np.float64).reshape(len(rows), len(registry))
    if not np.isfinite(X).all():
        raise DataError(f"{path}: non-finite feature values")
    return FeatureMatrix(registry, X, tuple(ids), tuple(langs), tuple(labels))
