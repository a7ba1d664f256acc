"""Stratified train/validate/test splitting and z-score standardization."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import ClassTooSmallWarning


@dataclass(frozen=True)
class SplitSpec:
    fractions: tuple[float, float, float] = (0.8, 0.1, 0.1)
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        if len(self.fractions) != 3 or any(f < 0 for f in self.fractions):
            raise ValueError("fractions must be three non-negative numbers")
        if abs(sum(self.fractions) - 1.0) > 1e-9:
            raise ValueError("fractions must sum to 1")


@dataclass(frozen=True, eq=False)
class Split:
    train: np.ndarray
    validate: np.ndarray
    test: np.ndarray


def largest_remainder(n: int, fractions) -> list[int]:
    """Integer counts summing to ``n`` proportional to ``fractions``; ties go to earlier parts."""
    quotas = [n * f for f in fractions]
    counts = [int(np.floor(q)) for q in quotas]
    order = sorted(range(len(quotas)), key=lambda k: (-(quotas[k] - counts[k]), k))
    for k in order[:n - sum(counts)]:
        counts[k] += 1
    return counts


def _allocate(idx: np.ndarray, fractions, rng) -> list[np.ndarray]:
    idx = rng.permutation(idx)
    counts = largest_remainder(len(idx), fractions)
    # every split gets at least one example when there are enough to go round
    if len(idx) >= 3:
        for k in (1, 2):
            if fractions[k] > 0 and counts[k] == 0 and counts[0] > 1:
                counts[k] += 1
                counts[0] -= 1
    bounds = np.cumsum([0] + counts)
    return [np.sort(idx[bounds[k]:bounds[k + 1]]) for k in range(3)]


def split(labels, spec: SplitSpec = SplitSpec()) -> Split:
    """Deterministic disjoint, exhaustive split of row indices."""
    labels = np.asarray(labels)
    rng = np.random.default_rng(spec.seed)
    parts: list[list[np.ndarray]] = [[], [], []]
    if spec.stratified:
        for cls in sorted(set(labels.tolist())):
            idx = np.flatnonzero(labels == cls)
            if len(idx) < 3:
                warnings.warn(f"class {cls} has {len(idx)} sample(s); all placed in train",
                              ClassTooSmallWarning)
                parts[0].append(idx)
                continue
            for k, chunk in enumerate(_allocate(idx, spec.fractions, rng)):
                parts[k].append(chunk)
    else:
        for k, chunk in enumerate(_allocate(np.arange(len(labels)), spec.fractions, rng)):
            parts[k].append(chunk)
    out = [np.sort(np.concatenate(p)) if p else np.zeros(0, dtype=int) for p in parts]
    return Split(*(o.astype(int) for o in out))


@dataclass(frozen=True, eq=False)
class Scaler:
    mean: np.ndarray
    std: np.ndarray

    @property
    def constant(self) -> np.ndarray:
        return self.std == 0

    @classmethod
    def fit(cls, X) -> "Scaler":
        X = np.asarray(X, dtype=np.float64)
        return cls(X.mean(axis=0), X.std(axis=0))

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        safe = np.where(self.std > 0, self.std, 1.0)
        return np.where(self.constant, 0.0, (X - self.mean) / safe)


def standardize(train, *others):
    """Fit a scaler on ``train`` and apply it to every split; returns (scaled..., scaler)."""
    scaler = Scaler.fit(train)
    return (scaler.transform(train), *(scaler.transform(o) for o in others), scaler)
