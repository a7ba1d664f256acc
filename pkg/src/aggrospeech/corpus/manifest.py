"""Corpus manifest: one row per recording, ``audio, textgrid, language``."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigError

LANGUAGES = ("hi", "en")


@dataclass(frozen=True)
class ManifestEntry:
    audio: Path
    textgrid: Path
    language: str

    @property
    def clip_ref(self) -> str:
        return self.audio.stem


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        return []
    delimiter = "\t" if "\t" in lines[0] else ","
    reader = csv.reader(lines, delimiter=delimiter)
    header = [h.strip().lower() for h in next(reader)]
    if header[:3] != ["audio", "textgrid", "language"]:
        raise ConfigError(f"{path}: manifest header must be audio, textgrid, language")
    entries = []
    for lineno, row in enumerate(reader, 2):
        if len(row) < 3:
            raise ConfigError(f"{path}:{lineno}: expected 3 columns")
        audio, grid, lang = (c.strip() for c in row[:3])
        if lang not in LANGUAGES:
            raise ConfigError(f"{path}:{lineno}: language must be one of {LANGUAGES}, got {lang!r}")
        entries.append(ManifestEntry(path.parent / audio, path.parent / grid, lang))
    return entries


def write_manifest(path: str | Path, entries) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["audio", "textgrid", "language"])
        for e in entries:
            w.writerow([str(e.audio), str(e.textgrid), e.language])
