from .data import Scaler, Split, SplitSpec, largest_remainder, split, standardize
from .grid import GridPoint, GridSearchResult, build_grid, grid_search
from .metrics import (ClassificationReport, ClassMetrics, ConfusionMatrix, classification_report,
                      confusion_matrix, evaluate)
from .modelio import load_model, save_model
from .multiclass import TrainedModel, train_model, vote
from .pipeline import FitOutcome, evaluate_split, fit_matrix
from .smo import BinaryModel, SvmParams, dual_objective, kernel_matrix, train_pair_smo

__all__ = [
    "BinaryModel", "ClassMetrics", "ClassificationReport", "ConfusionMatrix", "FitOutcome",
    "GridPoint", "GridSearchResult", "Scaler", "Split", "SplitSpec", "SvmParams", "TrainedModel",
    "build_grid", "classification_report", "confusion_matrix", "dual_objective", "evaluate",
    "evaluate_split", "fit_matrix", "grid_search", "kernel_matrix", "largest_remainder",
    "load_model", "save_model", "split", "standardize", "train_model", "train_pair_smo", "vote",
]
