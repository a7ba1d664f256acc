"""One-vs-one multiclass SVM on standardized features."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ..corpus.labels import CLASS_ORDER
from ..errors import RegistryMismatch, SingleLabel
from .data import Scaler
from .smo import BinaryModel, SvmParams, train_pair_smo


@dataclass(eq=False)
class TrainedModel:
    classes: tuple[str, ...]
    scaler: Scaler
    submodels: list[tuple[str, str, BinaryModel]]
    params: SvmParams
    registry_manifest: str = ""
    class_weighting: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def n_features(self) -> int:
        return len(self.scaler.mean)

    def _check(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise RegistryMismatch(f"model expects {self.n_features} features, got {X.shape[1]}")
        return X

    def decision_values(self, X) -> np.ndarray:
        Z = self.scaler.transform(self._check(X))
        return np.column_stack([m.decision_function(Z) for _, _, m in self.submodels])

    def predict(self, X) -> np.ndarray:
        return vote(self.decision_values(X), self.submodels, self.classes)


def vote(decisions: np.ndarray, submodels, classes) -> np.ndarray:
    """Majority vote; ties go to the larger summed signed decision value, then class order."""
    decisions = np.atleast_2d(decisions)
    index = {c: k for k, c in enumerate(classes)}
    out = []
    for row in decisions:
        votes = np.zeros(len(classes))
        margin = np.zeros(len(classes))
        for (a, b, _), f in zip(submodels, row):
            votes[index[a] if f > 0 else index[b]] += 1
            margin[index[a]] += f
            margin[index[b]] -= f
        best = max(range(len(classes)), key=lambda k: (votes[k], margin[k], -k))
        out.append(classes[best])
    return np.array(out, dtype=object)


def class_weights(labels, classes) -> dict[str, float]:
    """C multipliers N / (k * N_c) for the classes present."""
    labels = np.asarray(labels)
    n, k = len(labels), len(classes)
    return {c: n / (k * int((labels == c).sum())) for c in classes}


def fit_ovo(Z, labels, params: SvmParams, class_weighting: bool = False):
    """Train one binary SVM per class pair on already-standardized features."""
    labels = np.asarray(labels)
    present = [c.value for c in CLASS_ORDER if np.any(labels == c.value)]
    if len(present) < 2:
        raise SingleLabel("training data holds fewer than two classes")
    weights = class_weights(labels, present) if class_weighting else None
    submodels = []
    for a, b in combinations(present, 2):
        mask = (labels == a) | (labels == b)
        y = np.where(labels[mask] == a, 1.0, -1.0)
        C = None
        if weights is not None:
            C = np.where(y > 0, params.C * weights[a], params.C * weights[b])
        submodels.append((a, b, train_pair_smo(Z[mask], y, params, C=C)))
    return tuple(present), submodels


def train_model(X_train, labels, params: SvmParams, registry_manifest: str = "",
                class_weighting: bool = False) -> TrainedModel:
    scaler = Scaler.fit(X_train)
    classes, submodels = fit_ovo(scaler.transform(X_train), labels, params, class_weighting)
    return TrainedModel(classes, scaler, submodels, params, registry_manifest, class_weighting)
