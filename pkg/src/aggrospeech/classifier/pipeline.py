"""Split -> grid search -> evaluate, on a feature matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SingleLabel
from .data import Split, SplitSpec, split
from .grid import GridSearchResult, build_grid, grid_search
from .metrics import ClassificationReport, ConfusionMatrix, evaluate
from .smo import SvmParams


@dataclass(eq=False)
class FitOutcome:
    split: Split
    search: GridSearchResult

    @property
    def model(self):
        return self.search.model


def fit_matrix(matrix, spec: SplitSpec = SplitSpec(), grid=None, base: SvmParams = SvmParams(),
               class_weighting: bool = False, jobs: int = 1, the_split: Split | None = None) -> FitOutcome:
    labels = np.asarray(matrix.labels)
    if len(set(labels.tolist())) < 2:
        raise SingleLabel("dataset holds fewer than two classes")
    sp = the_split if the_split is not None else split(labels, spec)
    if grid is None:
        grid = build_grid(matrix.X.shape[1])
    search = grid_search(matrix.X[sp.train], labels[sp.train], matrix.X[sp.validate], labels[sp.validate],
                         grid, base, class_weighting, jobs, matrix.registry.manifest())
    return FitOutcome(sp, search)


def evaluate_split(model, matrix, indices) -> tuple[ConfusionMatrix, ClassificationReport]:
    labels = np.asarray(matrix.labels)
    return evaluate(model, matrix.X[indices], labels[indices])
