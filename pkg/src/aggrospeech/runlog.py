"""Per-directory run manifest: what was run, on which inputs, producing which outputs."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

MANIFEST_NAME = "run_manifest.json"
TOOL = "aggrospeech"


def file_sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _key(path: Path, root: Path) -> str:
    try:
        return path.resolve().relative_to(root.resolve()).as_posix()
    except ValueError:
        return str(path.resolve())


@dataclass
class RunManifest:
    """One JSON file per output directory; each command replaces its own entry."""

    root: Path
    commands: dict = field(default_factory=dict)

    @property
    def path(self) -> Path:
        return self.root / MANIFEST_NAME

    @classmethod
    def load(cls, root: str | Path) -> "RunManifest":
        root = Path(root)
        p = root / MANIFEST_NAME
        if p.exists():
            try:
                doc = json.loads(p.read_text(encoding="utf-8"))
                return cls(root, dict(doc.get("commands", {})))
            except (json.JSONDecodeError, AttributeError):
                pass
        return cls(root)

    def record(self, command: str, config_digest: str, inputs, outputs, started: str,
               argv: list[str] | None = None) -> None:
        self.commands[command] = {
            "config_sha256": config_digest,
            "inputs": {_key(Path(p), self.root): file_sha256(p) for p in inputs},
            "outputs": {_key(Path(p), self.root): file_sha256(p) for p in outputs},
            "argv": list(argv or []),
            "started": started,
            "finished": _now(),
        }

    def save(self) -> None:
        doc = {"tool": TOOL, "version": __version__,
               "commands": {k: self.commands[k] for k in sorted(self.commands)}}
        self.path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


now = _now
