"""Schema checks for every file the command line writes."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import jsonschema

from .classifier.metrics import REPORT_COLUMNS
from .ablation import CSV_COLUMNS as ABLATION_COLUMNS
from .features.extract import FLAG_NAMES
from .features.registry import FeatureRegistry
from .features.store import META_COLUMNS

_NUM = {"type": "number"}
_NUM_OR_NULL = {"type": ["number", "null"]}
_METRICS = {
    "type": "object",
    "required": ["precision", "recall", "f1", "support"],
    "properties": {"precision": _NUM, "recall": _NUM, "f1": _NUM, "support": {"type": "integer"}},
}

JSON_SCHEMAS = {
    "model.json": {
        "type": "object",
        "required": ["magic", "format_version", "registry", "classes", "params", "scaler", "submodels"],
        "properties": {
            "magic": {"const": "AGGRO-SVM"},
            "format_version": {"const": 1},
            "registry": {"type": "string"},
            "classes": {"type": "array", "items": {"type": "string"}, "minItems": 2},
            "params": {"type": "object", "required": ["kernel", "C", "gamma"]},
            "scaler": {"type": "object", "required": ["mean", "std", "constant"]},
            "submodels": {"type": "array", "minItems": 1, "items": {
                "type": "object",
                "required": ["classes", "kernel", "bias", "dual_coef", "support_vectors"],
            }},
        },
    },
    "validation.json": {
        "type": "object",
        "required": ["best", "validation_accuracy", "scores", "split", "n_features"],
        "properties": {
            "validation_accuracy": _NUM,
            "scores": {"type": "array", "items": {"type": "object", "required": ["kernel", "C", "gamma", "accuracy"]}},
            "split": {"type": "object", "required": ["seed", "fractions", "sizes"]},
        },
    },
    "evaluation.json": {
        "type": "object",
        "required": ["classes", "confusion_matrix", "per_class", "overall", "params"],
        "properties": {
            "confusion_matrix": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
            "per_class": {"type": "object", "additionalProperties": _METRICS},
            "overall": {"type": "object", "required": ["accuracy", "weighted", "macro"],
                        "properties": {"accuracy": _NUM, "weighted": _METRICS, "macro": _METRICS}},
        },
    },
    "stats_report.json": {
        "type": "object",
        "required": ["classes", "class_counts", "alphas", "features"],
        "properties": {
            "features": {"type": "array", "items": {
                "type": "object",
                "required": ["feature", "degenerate", "F", "df_between", "df_within", "p", "p_underflow"],
                "properties": {"F": _NUM_OR_NULL, "p": _NUM_OR_NULL, "degenerate": {"type": "boolean"}},
            }},
        },
    },
    "ablation.json": {
        "type": "object",
        "required": ["rows"],
        "properties": {"rows": {"type": "array", "items": {
            "type": "object",
            "required": list(ABLATION_COLUMNS),
            "properties": {"accuracy": _NUM, "weighted_f1": _NUM, "n_features": {"type": "integer"}},
        }}},
    },
    "run_manifest.json": {
        "type": "object",
        "required": ["tool", "version", "commands"],
        "properties": {"commands": {"type": "object", "additionalProperties": {
            "type": "object",
            "required": ["config_sha256", "inputs", "outputs", "started", "finished"],
        }}},
    },
}


def _header(path: Path) -> list[str]:
    with open(path, newline="", encoding="utf-8") as fh:
        return next(csv.reader(fh), [])


def _check_features(path: Path) -> list[str]:
    h = _header(path)
    if tuple(h[:3]) != META_COLUMNS:
        return [f"header must start with {', '.join(META_COLUMNS)}"]
    try:
        FeatureRegistry.from_columns(h[3:])
    except Exception as exc:  # noqa: BLE001 - any registry failure is a schema failure
        return [str(exc)]
    return []


def _fixed(columns):
    def check(path: Path) -> list[str]:
        h = _header(path)
        return [] if tuple(h) == tuple(columns) else [f"header {h} != {list(columns)}"]
    return check


def _prefix(columns):
    def check(path: Path) -> list[str]:
        h = _header(path)
        return [] if tuple(h[:len(columns)]) == tuple(columns) else [f"header must start with {list(columns)}"]
    return check


CSV_CHECKS = {
    "features.csv": _check_features,
    "features_flags.csv": _fixed(("segment_id", *FLAG_NAMES)),
    "stats_report.csv": _prefix(("feature", "degenerate", "F", "df_between", "df_within", "p", "p_underflow")),
    "class_means.csv": _prefix(("feature",)),
    "ablation.csv": _fixed(ABLATION_COLUMNS),
    "classification_report.csv": _fixed(REPORT_COLUMNS),
    "confusion_matrix.csv": _prefix(("true\\pred",)),
}


def validate_file(path: str | Path) -> list[str]:
    """Problems found in ``path``; an empty list means it is valid. Unknown names are skipped."""
    path = Path(path)
    name = path.name
    if name in JSON_SCHEMAS:
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            return [f"invalid JSON: {exc}"]
        v = jsonschema.Draft202012Validator(JSON_SCHEMAS[name])
        return [f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in v.iter_errors(doc)]
    if name in CSV_CHECKS:
        return CSV_CHECKS[name](path)
    return []


def known(path: str | Path) -> bool:
    name = Path(path).name
    return name in JSON_SCHEMAS or name in CSV_CHECKS


def validate_dir(out_dir: str | Path) -> dict[str, list[str]]:
    """Validate every known output file in ``out_dir``."""
    out_dir = Path(out_dir)
    return {p.name: validate_file(p) for p in sorted(out_dir.iterdir()) if p.is_file() and known(p)}
