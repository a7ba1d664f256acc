"""Autocorrelation pitch tracker.

Per frame the normalized cross-correlation of the frame with its lagged
self is computed for every lag in ``[sr/f_max, sr/f_min]``. The chosen lag
is the shortest local maximum reaching ``octave_ratio`` of the best peak,
which suppresses the period-doubling errors a plain argmax makes on
near-stationary voicing. Frames are centred on the spectral analysis frames
so all tracks share one frame count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .framing import FrameConfig, frame_array, frame_count


@dataclass(frozen=True)
class PitchConfig:
    f_min: float = 50.0
    f_max: float = 600.0
    window_length: float = 0.040
    voicing_threshold: float = 0.45
    silence_db: float = -50.0
    octave_ratio: float = 0.9

    def __post_init__(self):
        if self.f_min < 50.0 or self.f_max > 620.0 or self.f_min >= self.f_max:
            raise ValueError("pitch search range must satisfy 50 <= f_min < f_max <= 620")


@dataclass(frozen=True, eq=False)
class PitchTrack:
    f0: np.ndarray          # Hz, 0 where unvoiced
    voiced: np.ndarray      # bool
    strength: np.ndarray    # interpolated correlation peak, forced (ignores voicing decision)

    def __len__(self):
        return len(self.f0)


def _pitch_frames(x: np.ndarray, sr: int, frame_cfg: FrameConfig, pitch_win: int) -> np.ndarray:
    win, hop = frame_cfg.window_samples(sr), frame_cfg.hop_samples(sr)
    n = frame_count(len(x), win, hop)
    offset = (win - pitch_win) // 2
    pad = pitch_win
    padded = np.concatenate([np.zeros(pad), x, np.zeros(pad)])
    # pitch frame i starts where spectral frame i starts, shifted so both share a centre
    start = pad + offset
    view = frame_array(padded[start:], pitch_win, hop)
    return view[:n]


def normalized_autocorrelation(frames: np.ndarray, max_lag: int) -> np.ndarray:
    """NCCF r[f, lag] for lags 0..max_lag, each frame DC-removed."""
    frames = frames - frames.mean(axis=1, keepdims=True)
    w = frames.shape[1]
    nfft = 1 << (2 * w - 1).bit_length()
    spec = np.fft.rfft(frames, nfft, axis=1)
    acf = np.fft.irfft(spec * np.conj(spec), nfft, axis=1)[:, :max_lag + 1]
    sq = frames ** 2
    csum = np.concatenate([np.zeros((len(frames), 1)), np.cumsum(sq, axis=1)], axis=1)
    lags = np.arange(max_lag + 1)
    e_head = csum[:, w - lags]                 # sum x[0 : w-lag]^2
    e_tail = csum[:, -1:] - csum[:, lags]      # sum x[lag : w]^2
    denom = np.sqrt(e_head * e_tail)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(denom > 0, acf / np.where(denom > 0, denom, 1.0), 0.0)
    return r


def _pick_lag(r: np.ndarray, lo: int, hi: int, octave_ratio: float):
    seg = r[lo - 1:hi + 2]
    core = seg[1:-1]
    peaks = np.flatnonzero((core >= seg[:-2]) & (core > seg[2:]))
    if len(peaks) == 0:
        return None
    best = core[peaks].max()
    if best <= 0:
        return None
    k = peaks[np.argmax(core[peaks] >= octave_ratio * best)] + lo
    a, b, c = r[k - 1], r[k], r[k + 1]
    den = a - 2 * b + c
    delta = 0.5 * (a - c) / den if den != 0 else 0.0
    delta = float(np.clip(delta, -0.5, 0.5))
    peak = b - 0.25 * (a - c) * delta
    return k + delta, peak


def estimate_f0(clip, cfg: PitchConfig = PitchConfig(), frame_cfg: FrameConfig = FrameConfig()) -> PitchTrack:
    sr = clip.sample_rate
    x = np.asarray(clip.samples, dtype=np.float64)
    pitch_win = int(round(cfg.window_length * sr))
    lo = max(2, int(np.ceil(sr / cfg.f_max)))
    hi = min(int(np.floor(sr / cfg.f_min)), pitch_win - 2)
    frames = _pitch_frames(x, sr, frame_cfg, pitch_win)
    n = len(frames)
    f0 = np.zeros(n)
    strength = np.zeros(n)
    voiced = np.zeros(n, dtype=bool)
    if n == 0:
        return PitchTrack(f0, voiced, strength)

    rms = np.sqrt(np.mean(frames ** 2, axis=1))
    top = rms.max()
    if top <= 0:
        return PitchTrack(f0, voiced, strength)
    with np.errstate(divide="ignore"):
        rel_db = 20 * np.log10(rms / top)
    r = normalized_autocorrelation(frames, hi + 1)
    for i in range(n):
        if rms[i] <= 0:
            continue
        picked = _pick_lag(r[i], lo, hi, cfg.octave_ratio)
        if picked is None:
            continue
        lag, peak = picked
        strength[i] = min(peak, 1.0)
        if peak >= cfg.voicing_threshold and rel_db[i] >= cfg.silence_db:
            voiced[i] = True
            f0[i] = sr / lag
    return PitchTrack(f0, voiced, strength)
