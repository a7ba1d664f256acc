"""Command-line entry point: ``aggrospeech <command> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .ablation import AblationPlan, run_ablation, write_ablation
from .classifier.data import SplitSpec, split
from .classifier.grid import build_grid
from .classifier.metrics import write_evaluation
from .classifier.modelio import load_model, save_model
from .classifier.pipeline import evaluate_split, fit_matrix
from .config import PipelineConfig, default_config_yaml, load_config
from .corpus.manifest import read_manifest
from .corpus.segments import SegmentConfig, extract_segments
from .corpus.textgrid import read_textgrid
from .corpus.wav import read_wav
from .errors import AggroError, ConfigError, DataError, NumericError, RegistryMismatch
from .features.extract import extract_segment_features
from .features.registry import default_registry
from .features.store import FeatureMatrix, flags_path, read_feature_store, write_feature_store, write_flags
from .runlog import RunManifest, now
from .stats.report import correlate_report, write_report
from .validate import validate_dir, validate_file

log = logging.getLogger("aggrospeech")

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # usage errors share the config exit code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="YAML config file")
    p.add_argument("--seed", type=int, help="split seed")
    p.add_argument("--language", choices=("hi", "en", "all"), help="language filter")
    p.add_argument("--out", type=Path, help="output directory")
    p.add_argument("--jobs", type=int, help="worker processes (results do not depend on it)")
    p.add_argument("--continue-on-error", action="store_true", default=None,
                   help="skip files that fail to parse instead of aborting")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aggrospeech", description="Acoustic aggression analysis pipeline.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", help="extract features for every labelled segment in a corpus manifest")
    _common(p)
    p.add_argument("--manifest", type=Path, help="CSV/TSV manifest: audio, textgrid, language")

    for name, text in (("stats", "ANOVA and Tukey HSD over the study features"),
                       ("train", "grid-search and train the SVM"),
                       ("evaluate", "score a trained model on the held-out test split"),
                       ("ablate", "cumulative feature-group ablation")):
        p = sub.add_parser(name, help=text)
        _common(p)
        p.add_argument("--store", type=Path, help="feature store (default: OUT/features.csv)")
        if name == "evaluate":
            p.add_argument("--model", type=Path, help="model file (default: OUT/model.json)")

    p = sub.add_parser("validate", help="schema-check output files")
    _common(p)
    p.add_argument("paths", nargs="*", type=Path, help="files to check (default: every output in OUT)")

    p = sub.add_parser("report", help="print a plain-text summary of the outputs in OUT")
    _common(p)

    p = sub.add_parser("init-config", help="print a config file with every default filled in")
    return parser


def _config(args) -> PipelineConfig:
    overrides = {
        "seed": args.seed,
        "language": args.language,
        "out": args.out,
        "jobs": args.jobs,
        "continue_on_error": args.continue_on_error,
        "manifest": getattr(args, "manifest", None),
    }
    return load_config(args.config, {k: v for k, v in overrides.items() if v is not None})


def _load_store(cfg: PipelineConfig, args) -> tuple[Path, FeatureMatrix]:
    path = args.store or cfg.out / "features.csv"
    if not Path(path).exists():
        raise DataError(f"feature store not found: {path}")
    matrix = read_feature_store(path)
    if cfg.language != "all":
        matrix = matrix.for_language(cfg.language)
    return Path(path), matrix


def _dump(path: Path, doc) -> Path:
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return path


# extract -------------------------------------------------------------------

def _extract_entry(task):
    entry, seg_cfg, feat_cfg = task
    for p in (entry.audio, entry.textgrid):
        if not p.exists():
            return None, f"{p}: file not found", EXIT_DATA
    try:
        clip = read_wav(entry.audio)
    except AggroError as exc:
        return None, f"{entry.audio}: {exc}", exc.exit_code
    try:
        tiers = read_textgrid(entry.textgrid)
        segments = extract_segments(clip, tiers, seg_cfg, entry.clip_ref)
        registry = default_registry()
        vectors = [extract_segment_features(s, entry.language, feat_cfg, registry) for s in segments]
    except AggroError as exc:
        return None, f"{entry.textgrid}: {exc}", exc.exit_code
    return vectors, None, EXIT_OK


def cmd_extract(cfg: PipelineConfig, args) -> tuple[list, list]:
    if cfg.manifest is None:
        raise ConfigError("extract needs a corpus manifest (--manifest or 'manifest' in the config)")
    if not cfg.manifest.exists():
        raise DataError(f"manifest not found: {cfg.manifest}")
    entries = read_manifest(cfg.manifest)
    if cfg.language != "all":
        entries = [e for e in entries if e.language == cfg.language]
    if not entries:
        log.warning("manifest %s lists no files; writing an empty feature store", cfg.manifest)
    seg_cfg = SegmentConfig(cfg.tier_name, cfg.turn_tier_name, cfg.min_duration)
    tasks = [(e, seg_cfg, cfg.feature_config()) for e in entries]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_extract_entry, tasks))
    else:
        results = [_extract_entry(t) for t in tasks]

    vectors = []
    for entry, (vecs, err, code) in zip(entries, results):
        if err is None:
            vectors.extend(vecs)
            continue
        if not cfg.continue_on_error:
            raise {EXIT_CONFIG: ConfigError, EXIT_NUMERIC: NumericError}.get(code, DataError)(err)
        log.error("skipping %s", err)
    cfg.out.mkdir(parents=True, exist_ok=True)
    store = cfg.out / "features.csv"
    write_feature_store(store, default_registry(), vectors)
    write_flags(flags_path(store), vectors)
    log.info("wrote %d segment rows to %s", len(vectors), store)
    inputs = [cfg.manifest] + [p for e in entries for p in (e.audio, e.textgrid) if p.exists()]
    return inputs, [store, flags_path(store)]


# stats / train / evaluate / ablate ----------------------------------------

def cmd_stats(cfg: PipelineConfig, args):
    store, matrix = _load_store(cfg, args)
    report = correlate_report(matrix)
    cfg.out.mkdir(parents=True, exist_ok=True)
    paths = write_report(report, cfg.out)
    return [store], list(paths.values())


def _grid(cfg: PipelineConfig, n_features: int):
    return build_grid(n_features, cfg.grid.kernels, cfg.grid.C, cfg.grid.gamma)


def cmd_train(cfg: PipelineConfig, args):
    store, matrix = _load_store(cfg, args)
    spec = cfg.split_spec()
    outcome = fit_matrix(matrix, spec, _grid(cfg, matrix.X.shape[1]), cfg.svm_base(),
                         cfg.grid.class_weighting, cfg.jobs)
    model = outcome.model
    split_doc = {"seed": spec.seed, "fractions": list(spec.fractions), "stratified": spec.stratified,
                 "language": cfg.language}
    model.meta.update({"split": split_doc})
    cfg.out.mkdir(parents=True, exist_ok=True)
    model_path = cfg.out / "model.json"
    save_model(model, model_path)
    sp = outcome.split
    validation = {
        "best": outcome.search.best.as_dict(),
        "validation_accuracy": outcome.search.best_accuracy,
        "scores": [{**p.as_dict(), "accuracy": acc} for p, acc in outcome.search.scores],
        "split": {**split_doc, "sizes": {"train": len(sp.train), "validate": len(sp.validate),
                                         "test": len(sp.test)}},
        "n_features": int(matrix.X.shape[1]),
    }
    val_path = _dump(cfg.out / "validation.json", validation)
    log.info("best %s, validation accuracy %.4f", outcome.search.best.as_dict(), outcome.search.best_accuracy)
    return [store], [model_path, val_path]


def cmd_evaluate(cfg: PipelineConfig, args):
    store, matrix = _load_store(cfg, args)
    model_path = args.model or cfg.out / "model.json"
    if not Path(model_path).exists():
        raise DataError(f"model file not found: {model_path}")
    model = load_model(model_path)
    if model.registry_manifest != matrix.registry.manifest():
        raise RegistryMismatch(f"model {model_path} was trained on a different feature registry than {store}")
    sd = model.meta.get("split", {})
    spec = SplitSpec(tuple(sd.get("fractions", cfg.split.fractions)), int(sd.get("seed", cfg.seed)),
                     bool(sd.get("stratified", cfg.split.stratified)))
    sp = split(np.asarray(matrix.labels), spec)
    cm, report = evaluate_split(model, matrix, sp.test)
    p = model.params
    params = {"kernel": p.kernel, "C": p.C, "gamma": p.gamma, "seed": spec.seed,
              "fractions": list(spec.fractions), "test_size": len(sp.test)}
    cfg.out.mkdir(parents=True, exist_ok=True)
    paths = write_evaluation(cm, report, params, cfg.out)
    log.info("test accuracy %.4f", report.accuracy)
    return [store, Path(model_path)], list(paths.values())


def cmd_ablate(cfg: PipelineConfig, args):
    store, matrix = _load_store(cfg, args)
    plan = AblationPlan(split=cfg.split_spec(), kernels=tuple(cfg.grid.kernels), Cs=tuple(cfg.grid.C),
                        gammas=tuple(cfg.grid.gamma), base=cfg.svm_base(),
                        class_weighting=cfg.grid.class_weighting)
    rows = run_ablation(matrix, plan, cfg.jobs)
    cfg.out.mkdir(parents=True, exist_ok=True)
    paths = write_ablation(rows, cfg.out)
    return [store], list(paths.values())


# validate / report ---------------------------------------------------------

def cmd_validate(cfg: PipelineConfig, args) -> int:
    if args.paths:
        results = {str(p): (validate_file(p) if p.exists() else ["file not found"]) for p in args.paths}
    else:
        if not cfg.out.is_dir():
            raise DataError(f"output directory not found: {cfg.out}")
        results = validate_dir(cfg.out)
    bad = 0
    for name, problems in results.items():
        print(f"{'ok  ' if not problems else 'FAIL'} {name}")
        for msg in problems:
            print(f"     {msg}")
        bad += bool(problems)
    return EXIT_DATA if bad else EXIT_OK


def summary_text(out_dir: Path) -> str:
    lines = ["pipeline outputs", ""]
    store = out_dir / "features.csv"
    if store.exists():
        m = read_feature_store(store)
        counts = {c: m.labels.count(c) for c in ("OAG", "CAG", "NAG")}
        lines.append(f"features: {len(m)} segments x {m.X.shape[1]} features; "
                     + ", ".join(f"{c}={n}" for c, n in counts.items()))
    stats = out_dir / "stats_report.json"
    if stats.exists():
        doc = json.loads(stats.read_text(encoding="utf-8"))
        lines += ["", "acoustic correlates (one-way ANOVA):"]
        for rec in doc["features"]:
            if rec["degenerate"]:
                lines.append(f"  {rec['feature']:<20} degenerate (no within-group variance)")
            else:
                lines.append(f"  {rec['feature']:<20} F={rec['F']:.3f}  p={rec['p']:.3g}")
    val = out_dir / "validation.json"
    if val.exists():
        doc = json.loads(val.read_text(encoding="utf-8"))
        lines += ["", f"model: {doc['best']}  validation accuracy {doc['validation_accuracy']:.4f}"]
    ev = out_dir / "evaluation.json"
    if ev.exists():
        doc = json.loads(ev.read_text(encoding="utf-8"))
        lines += ["", f"test accuracy {doc['overall']['accuracy']:.4f}",
                  f"  {'class':<14}{'P':>6}{'R':>6}{'F1':>6}{'n':>6}"]
        rows = list(doc["per_class"].items()) + [("weighted avg", doc["overall"]["weighted"])]
        for name, m in rows:
            lines.append(f"  {name:<14}{m['precision']:>6.2f}{m['recall']:>6.2f}{m['f1']:>6.2f}{m['support']:>6}")
    abl = out_dir / "ablation.json"
    if abl.exists():
        doc = json.loads(abl.read_text(encoding="utf-8"))
        lines += ["", "ablation (cumulative feature groups):"]
        for r in doc["rows"]:
            lines.append(f"  {100 * r['accuracy']:6.2f}  {r['n_features']:>3}  {r['prefix']}")
    if len(lines) == 2:
        lines.append("(no outputs yet)")
    return "\n".join(lines) + "\n"


def cmd_report(cfg: PipelineConfig, args):
    if not cfg.out.is_dir():
        raise DataError(f"output directory not found: {cfg.out}")
    text = summary_text(cfg.out)
    sys.stdout.write(text)
    path = cfg.out / "summary.txt"
    path.write_text(text, encoding="utf-8")
    return [], [path]


COMMANDS = {
    "extract": cmd_extract,
    "stats": cmd_stats,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "ablate": cmd_ablate,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    if args.command == "init-config":
        sys.stdout.write(default_config_yaml())
        return EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = _config(args)
        if args.command == "validate":
            return cmd_validate(cfg, args)
        started = now()
        inputs, outputs = COMMANDS[args.command](cfg, args)
        run = RunManifest.load(cfg.out)
        run.record(args.command, cfg.digest(), inputs, outputs, started, argv)
        run.save()
    except AggroError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
