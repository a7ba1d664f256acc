"""Glottal cycle marking and the local jitter/shimmer perturbation measures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InsufficientPeriods, NoVoicedRegion
from .framing import FrameConfig
from .pitch import PitchTrack

# search window for the next cycle mark, as a fraction of the local period
SEARCH_LO = 0.8
SEARCH_HI = 1.25


@dataclass(frozen=True, eq=False)
class PeriodSequence:
    """Per-cycle period lengths (s) and peak amplitudes, grouped by voiced region."""

    periods: tuple[np.ndarray, ...]
    amplitudes: tuple[np.ndarray, ...]

    @property
    def count(self) -> int:
        return sum(len(p) for p in self.periods)

    @property
    def pair_count(self) -> int:
        return sum(max(len(p) - 1, 0) for p in self.periods)

    @property
    def amplitude_degenerate(self) -> bool:
        return self.count == 0 or all(not np.any(a > 0) for a in self.amplitudes)


def voiced_runs(mask) -> list[tuple[int, int]]:
    """Maximal runs of True as half-open (start, stop) index pairs."""
    m = np.concatenate([[False], np.asarray(mask, dtype=bool), [False]])
    edges = np.flatnonzero(np.diff(m.astype(np.int8)))
    return list(zip(edges[::2].tolist(), edges[1::2].tolist()))


def _refine(y: np.ndarray, k: int) -> float:
    if 0 < k < len(y) - 1:
        a, b, c = y[k - 1], y[k], y[k + 1]
        den = a - 2 * b + c
        if den < 0:
            return k + float(np.clip(0.5 * (a - c) / den, -0.5, 0.5))
    return float(k)


def _mark_region(x: np.ndarray, start: int, stop: int, period_at) -> list[int]:
    seg = x[start:stop]
    if len(seg) == 0:
        return []
    polarity = 1.0 if seg.max() >= -seg.min() else -1.0
    y = polarity * x
    first_span = int(np.ceil(period_at(start)))
    k = start + int(np.argmax(y[start:min(stop, start + first_span)]))
    if y[k] <= 0:
        return []
    marks = [k]
    while True:
        t = period_at(k)
        lo = int(np.floor(k + SEARCH_LO * t))
        hi = int(np.ceil(k + SEARCH_HI * t))
        if lo >= stop:
            break
        hi = min(hi, stop - 1)
        if hi < lo:
            break
        k = lo + int(np.argmax(y[lo:hi + 1]))
        if y[k] <= 0:
            break
        marks.append(k)
    return marks


def detect_periods(clip, track: PitchTrack, frame_cfg: FrameConfig = FrameConfig()) -> PeriodSequence:
    """Place one mark per glottal cycle inside every voiced region.

    Marks are waveform peaks, each searched in a window of 0.8-1.25 local
    periods after the previous one, where the local period comes from the
    F0 track.
    """
    runs = voiced_runs(track.voiced)
    if not runs:
        raise NoVoicedRegion("no voiced frames")
    sr = clip.sample_rate
    x = np.asarray(clip.samples, dtype=np.float64)
    win, hop = frame_cfg.window_samples(sr), frame_cfg.hop_samples(sr)
    f0 = np.asarray(track.f0, dtype=np.float64)

    periods, amps = [], []
    for a, b in runs:
        start = a * hop
        stop = min(len(x), (b - 1) * hop + win)

        def period_at(p, a=a, b=b):
            i = int(np.clip(round((p - win / 2) / hop), a, b - 1))
            return sr / f0[i]

        marks = _mark_region(x, start, stop, period_at)
        if len(marks) < 2:
            continue
        pol = 1.0 if x[start:stop].max() >= -x[start:stop].min() else -1.0
        fine = np.array([_refine(pol * x, k) for k in marks])
        periods.append(np.diff(fine) / sr)
        amps.append(np.array([np.abs(x[m0:m1]).max() for m0, m1 in zip(marks, marks[1:])]))
    return PeriodSequence(tuple(periods), tuple(amps))


def _pair_perturbation(groups: tuple[np.ndarray, ...]) -> tuple[np.ndarray, float]:
    diffs = [np.abs(np.diff(g)) for g in groups if len(g) >= 2]
    if not diffs:
        raise InsufficientPeriods("need at least two consecutive periods in one voiced region")
    mean_level = float(np.concatenate(groups).mean())
    return np.concatenate(diffs), mean_level


def jitter_values(p: PeriodSequence) -> np.ndarray:
    """Per-pair |T_i - T_(i-1)| relative to the mean period; their mean is local jitter."""
    diffs, mean_t = _pair_perturbation(p.periods)
    return diffs / mean_t


def shimmer_values(p: PeriodSequence) -> np.ndarray:
    diffs, mean_a = _pair_perturbation(p.amplitudes)
    if mean_a <= 0:
        return np.zeros_like(diffs)
    return diffs / mean_a


def jitter_local(p: PeriodSequence) -> float:
    return float(jitter_values(p).mean())


def shimmer_local(p: PeriodSequence) -> float:
    """Local shimmer; 0.0 for all-zero amplitudes (see ``amplitude_degenerate``)."""
    return float(shimmer_values(p).mean())
