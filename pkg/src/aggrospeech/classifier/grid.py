"""Grid search over kernel, C and gamma, scored by validation accuracy."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import EmptyGrid
from .multiclass import TrainedModel, fit_ovo
from .data import Scaler
from .smo import SvmParams

DEFAULT_C = (0.1, 1.0, 10.0, 100.0)
DEFAULT_GAMMA = ("1/d", 0.01, 0.1)


@dataclass(frozen=True)
class GridPoint:
    kernel: str
    C: float
    gamma: float | None = None

    def params(self, base: SvmParams = SvmParams()) -> SvmParams:
        return SvmParams(self.kernel, self.C, self.gamma, base.smo_tolerance, base.max_passes)

    def as_dict(self) -> dict:
        return {"kernel": self.kernel, "C": self.C, "gamma": self.gamma}


def build_grid(n_features: int, kernels=("linear", "rbf"), Cs=DEFAULT_C, gammas=DEFAULT_GAMMA) -> list[GridPoint]:
    """Expand a grid; gamma ``"1/d"`` resolves to 1 / n_features. Linear points carry no gamma."""
    resolved = []
    for g in gammas:
        val = 1.0 / max(n_features, 1) if g == "1/d" else float(g)
        if val not in resolved:
            resolved.append(val)
    grid = []
    for kernel in kernels:
        for C in Cs:
            if kernel == "linear":
                grid.append(GridPoint("linear", float(C)))
            else:
                grid.extend(GridPoint(kernel, float(C), g) for g in resolved)
    return grid


@dataclass(eq=False)
class GridSearchResult:
    best: GridPoint
    model: TrainedModel
    scores: list[tuple[GridPoint, float]]

    @property
    def best_accuracy(self) -> float:
        return dict((p, s) for p, s in self.scores)[self.best]


def _fit_point(args):
    point, Z_train, y_train, Z_val, y_val, base, class_weighting = args
    classes, subs = fit_ovo(Z_train, y_train, point.params(base), class_weighting)
    probe = TrainedModel(classes, Scaler(np.zeros(Z_train.shape[1]), np.ones(Z_train.shape[1])),
                         subs, point.params(base))
    acc = float(np.mean(probe.predict(Z_val) == np.asarray(y_val, dtype=object))) if len(y_val) else 0.0
    return classes, subs, acc


def _select(scores: list[tuple[GridPoint, float]]) -> int:
    # highest accuracy, then smaller C, then smaller gamma, then grid order
    return min(range(len(scores)),
               key=lambda k: (-scores[k][1], scores[k][0].C, scores[k][0].gamma or 0.0, k))


def grid_search(X_train, y_train, X_val, y_val, grid, base: SvmParams = SvmParams(),
                class_weighting: bool = False, jobs: int = 1, registry_manifest: str = "") -> GridSearchResult:
    """Train every grid point on the training split and keep the best on validation.

    The validation split is only ever used for scoring. Results do not
    depend on ``jobs``: points are evaluated independently and reduced in
    grid order.
    """
    grid = list(grid)
    if not grid:
        raise EmptyGrid("grid search needs at least one point")
    scaler = Scaler.fit(X_train)
    Z_train, Z_val = scaler.transform(X_train), scaler.transform(X_val)
    y_train, y_val = np.asarray(y_train), np.asarray(y_val)
    tasks = [(p, Z_train, y_train, Z_val, y_val, base, class_weighting) for p in grid]
    if jobs > 1 and len(grid) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            fitted = list(pool.map(_fit_point, tasks))
    else:
        fitted = [_fit_point(t) for t in tasks]
    scores = [(p, acc) for p, (_, _, acc) in zip(grid, fitted)]
    k = _select(scores)
    classes, subs, _ = fitted[k]
    model = TrainedModel(classes, scaler, subs, grid[k].params(base), registry_manifest, class_weighting)
    return GridSearchResult(grid[k], model, scores)
