"""JSON model container.

Floats are written with ``repr`` precision by the json module, so a
write/read round trip reproduces every array bit for bit.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import DataError
from .data import Scaler
from .multiclass import TrainedModel
from .smo import BinaryModel, SvmParams

MAGIC = "AGGRO-SVM"
FORMAT_VERSION = 1


def model_to_dict(model: TrainedModel) -> dict:
    p = model.params
    return {
        "magic": MAGIC,
        "format_version": FORMAT_VERSION,
        "registry": model.registry_manifest,
        "standardized": True,
        "classes": list(model.classes),
        "class_weighting": model.class_weighting,
        "params": {"kernel": p.kernel, "C": p.C, "gamma": p.gamma,
                   "smo_tolerance": p.smo_tolerance, "max_passes": p.max_passes},
        "scaler": {"mean": model.scaler.mean.tolist(), "std": model.scaler.std.tolist(),
                   "constant": model.scaler.constant.tolist()},
        "submodels": [
            {
                "classes": [a, b],
                "kernel": m.kernel,
                "gamma": m.gamma,
                "C": p.C,
                "bias": m.bias,
                "converged": m.converged,
                "dual_coef": m.dual_coef.tolist(),
                "support_vectors": m.support_vectors.tolist(),
            }
            for a, b, m in model.submodels
        ],
        "meta": model.meta,
    }


def model_from_dict(doc: dict) -> TrainedModel:
    if doc.get("magic") != MAGIC:
        raise DataError("not a model file (bad magic)")
    if doc.get("format_version") != FORMAT_VERSION:
        raise DataError(f"unsupported model format version {doc.get('format_version')}")
    n = len(doc["scaler"]["mean"])
    subs = []
    for s in doc["submodels"]:
        sv = np.array(s["support_vectors"], dtype=np.float64).reshape(-1, n)
        subs.append((s["classes"][0], s["classes"][1],
                     BinaryModel(s["kernel"], s["gamma"], sv, np.array(s["dual_coef"], dtype=np.float64),
                                 float(s["bias"]), bool(s["converged"]))))
    scaler = Scaler(np.array(doc["scaler"]["mean"], dtype=np.float64),
                    np.array(doc["scaler"]["std"], dtype=np.float64))
    return TrainedModel(tuple(doc["classes"]), scaler, subs, SvmParams(**doc["params"]),
                        doc["registry"], bool(doc["class_weighting"]), dict(doc.get("meta", {})))


def save_model(model: TrainedModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=1) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> TrainedModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not a model file ({exc})") from None
    return model_from_dict(doc)
