"""Reader/writer for Praat TextGrid files in the long text format.

Only interval tiers are supported. Point tiers (``TextTier``), the short
text format and the binary format are rejected with a descriptive error.
"""

from __future__ import annotations

import codecs
import re
from dataclasses import dataclass
from pathlib import Path

from ..errors import OverlappingIntervals, PointTierUnsupported, TextGridSyntaxError

_EPS = 1e-9
_KV = re.compile(r'^\s*([A-Za-z][\w :]*?)\s*(?:\[\s*\d*\s*\])?\s*:?\s*(?:=\s*(.*?))?\s*$')


@dataclass(frozen=True)
class Interval:
    xmin: float
    xmax: float
    text: str

    @property
    def duration(self) -> float:
        return self.xmax - self.xmin


@dataclass(frozen=True)
class IntervalTier:
    name: str
    xmin: float
    xmax: float
    intervals: tuple[Interval, ...]

    def __len__(self):
        return len(self.intervals)


def decode_text(raw: bytes) -> str:
    """Decode TextGrid bytes, honouring a UTF-8 or UTF-16 byte-order mark."""
    if raw.startswith(codecs.BOM_UTF8):
        return raw[len(codecs.BOM_UTF8):].decode("utf-8")
    if raw.startswith(codecs.BOM_UTF16_LE) or raw.startswith(codecs.BOM_UTF16_BE):
        return raw.decode("utf-16")
    return raw.decode("utf-8")


class _Cursor:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    def _skip_blank(self):
        while self.pos < len(self.lines) and not self.lines[self.pos].strip():
            self.pos += 1

    @property
    def lineno(self) -> int:
        return self.pos + 1

    def peek(self) -> str | None:
        self._skip_blank()
        if self.pos >= len(self.lines):
            return None
        return self.lines[self.pos]

    def raw(self) -> str:
        line = self.peek()
        if line is None:
            raise TextGridSyntaxError("unexpected end of file", self.pos + 1)
        self.pos += 1
        return line

    def entry(self, key: str) -> str | None:
        """Consume a ``key = value`` line (or a ``key [n]:`` header) and return the value."""
        lineno = self.lineno
        line = self.raw()
        m = _KV.match(line)
        if not m or " ".join(m.group(1).split()) != key:
            raise TextGridSyntaxError(f"expected {key!r}, found {line.strip()!r}", lineno)
        value = m.group(2)
        if value is not None and value.startswith('"'):
            value = self._finish_string(value, lineno)
        return value

    def _finish_string(self, start: str, lineno: int) -> str:
        buf = start
        while not _string_closed(buf):
            if self.pos >= len(self.lines):
                raise TextGridSyntaxError("unterminated string", lineno)
            buf += "\n" + self.lines[self.pos]
            self.pos += 1
        return buf

    def number(self, key: str) -> float:
        lineno = self.lineno
        value = self.entry(key)
        try:
            return float(value)
        except (TypeError, ValueError):
            raise TextGridSyntaxError(f"{key} is not a number: {value!r}", lineno) from None

    def integer(self, key: str) -> int:
        lineno = self.lineno
        value = self.number(key)
        if value != int(value) or value < 0:
            raise TextGridSyntaxError(f"{key} must be a non-negative integer", lineno)
        return int(value)

    def string(self, key: str) -> str:
        lineno = self.lineno
        value = self.entry(key)
        if value is None or not value.startswith('"') or not _string_closed(value):
            raise TextGridSyntaxError(f"{key} must be a quoted string", lineno)
        return _unquote(value)


def _string_closed(s: str) -> bool:
    # Praat escapes '"' by doubling it, so a string is closed after an odd quote count.
    body = s.rstrip()
    if len(body) < 2 or not body.endswith('"'):
        return False
    return body.count('"') % 2 == 0


def _unquote(s: str) -> str:
    return s.strip()[1:-1].replace('""', '"')


def _quote(s: str) -> str:
    return '"' + s.replace('"', '""') + '"'


def parse_textgrid(text: str) -> list[IntervalTier]:
    if text.startswith("﻿"):
        text = text[1:]
    if text.lstrip().startswith("ooBinaryFile"):
        raise TextGridSyntaxError("binary TextGrid files are not supported", 1)
    cur = _Cursor(text)
    if cur.string("File type") != "ooTextFile":
        raise TextGridSyntaxError("file type must be ooTextFile", 1)
    if cur.string("Object class") != "TextGrid":
        raise TextGridSyntaxError("object class must be TextGrid", 2)
    nxt = cur.peek()
    if nxt is not None and "=" not in nxt:
        raise TextGridSyntaxError("short text format is not supported; save as long text", cur.lineno)
    cur.number("xmin")
    cur.number("xmax")
    nxt = cur.peek()
    if nxt is not None and nxt.strip().startswith("tiers?"):
        if "<exists>" not in nxt:
            cur.raw()
            return []
        cur.raw()
    size = cur.integer("size")
    cur.entry("item")
    tiers = []
    for _ in range(size):
        cur.entry("item")
        lineno = cur.lineno
        cls = cur.string("class")
        if cls == "TextTier":
            raise PointTierUnsupported(f"point tier at line {lineno} is not supported")
        if cls != "IntervalTier":
            raise TextGridSyntaxError(f"unknown tier class {cls!r}", lineno)
        name = cur.string("name")
        txmin = cur.number("xmin")
        txmax = cur.number("xmax")
        n = cur.integer("intervals: size")
        intervals = []
        for _ in range(n):
            cur.entry("intervals")
            lineno = cur.lineno
            a = cur.number("xmin")
            b = cur.number("xmax")
            label = cur.string("text")
            if not a < b:
                raise TextGridSyntaxError(f"interval [{a}, {b}] has xmin >= xmax", lineno)
            if a < txmin - _EPS or b > txmax + _EPS:
                raise TextGridSyntaxError(
                    f"interval [{a}, {b}] outside tier bounds [{txmin}, {txmax}]", lineno
                )
            intervals.append(Interval(a, b, label))
        tiers.append(_validated(IntervalTier(name, txmin, txmax, tuple(intervals))))
    return tiers


def _validated(tier: IntervalTier) -> IntervalTier:
    ordered = tuple(sorted(tier.intervals, key=lambda iv: iv.xmin))
    for prev, nxt in zip(ordered, ordered[1:]):
        if nxt.xmin < prev.xmax - _EPS:
            raise OverlappingIntervals(
                f"tier {tier.name!r}: [{prev.xmin}, {prev.xmax}] {prev.text!r} overlaps "
                f"[{nxt.xmin}, {nxt.xmax}] {nxt.text!r}"
            )
    return IntervalTier(tier.name, tier.xmin, tier.xmax, ordered)


def read_textgrid(path: str | Path) -> list[IntervalTier]:
    return parse_textgrid(decode_text(Path(path).read_bytes()))


def serialize_textgrid(tiers: list[IntervalTier], xmin: float | None = None,
                       xmax: float | None = None) -> str:
    if xmin is None:
        xmin = min((t.xmin for t in tiers), default=0.0)
    if xmax is None:
        xmax = max((t.xmax for t in tiers), default=0.0)
    out = [
        'File type = "ooTextFile"',
        'Object class = "TextGrid"',
        "",
        f"xmin = {float(xmin)!r} ",
        f"xmax = {float(xmax)!r} ",
        "tiers? <exists> " if tiers else "tiers? <absent> ",
    ]
    if tiers:
        out += [f"size = {len(tiers)} ", "item []: "]
    for i, tier in enumerate(tiers, 1):
        out += [
            f"    item [{i}]:",
            '        class = "IntervalTier" ',
            f"        name = {_quote(tier.name)} ",
            f"        xmin = {float(tier.xmin)!r} ",
            f"        xmax = {float(tier.xmax)!r} ",
            f"        intervals: size = {len(tier.intervals)} ",
        ]
        for j, iv in enumerate(tier.intervals, 1):
            out += [
                f"        intervals [{j}]:",
                f"            xmin = {float(iv.xmin)!r} ",
                f"            xmax = {float(iv.xmax)!r} ",
                f"            text = {_quote(iv.text)} ",
            ]
    return "\n".join(out) + "\n"
