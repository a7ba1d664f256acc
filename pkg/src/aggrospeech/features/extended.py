"""Extended GeMAPS-style descriptors: MFCC 1-4, formants, HNR, spectral balance."""

from __future__ import annotations

import numpy as np
from scipy.fft import dct
from scipy.linalg import solve_toeplitz

from .framing import FrameConfig, frame_array, window
from .pitch import PitchTrack

N_MEL = 26
N_MFCC = 4
PRE_EMPHASIS = 0.97
FORMANT_MIN_HZ = 90.0
FORMANT_MAX_BW = 400.0
HNR_CLAMP = 100.0
EPS = 1e-12

EXTENDED_LLDS = (
    "mfcc1", "mfcc2", "mfcc3", "mfcc4",
    "f1_freq", "f1_bw", "f1_amp",
    "f2_freq", "f2_bw", "f2_amp",
    "f3_freq", "f3_bw", "f3_amp",
    "hnr", "alpha_ratio", "hammarberg", "slope_0_500", "slope_500_1500",
)
# descriptors whose functionals are taken over voiced frames only
VOICED_ONLY = frozenset(n for n in EXTENDED_LLDS if n[0] == "f" and n[1].isdigit()) | {"hnr"}


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m) / 2595.0) - 1.0)


def mel_filterbank(sample_rate: int, nfft: int, n_bands: int = N_MEL) -> np.ndarray:
    """Triangular filters equally spaced on the mel scale from 0 Hz to Nyquist."""
    edges = mel_to_hz(np.linspace(0.0, hz_to_mel(sample_rate / 2), n_bands + 2))
    freqs = np.fft.rfftfreq(nfft, 1.0 / sample_rate)
    bank = np.zeros((n_bands, len(freqs)))
    for b in range(n_bands):
        lo, mid, hi = edges[b:b + 3]
        up = (freqs - lo) / (mid - lo)
        down = (hi - freqs) / (hi - mid)
        bank[b] = np.clip(np.minimum(up, down), 0.0, None)
    return bank


def mfcc(power: np.ndarray, sample_rate: int, nfft: int) -> np.ndarray:
    bands = power @ mel_filterbank(sample_rate, nfft).T
    ceps = dct(np.log(bands + EPS), type=2, norm="ortho", axis=1)
    return ceps[:, 1:N_MFCC + 1]


def lpc(frame: np.ndarray, order: int) -> np.ndarray | None:
    """Autocorrelation-method LPC polynomial [1, a1, ..., ap], or None for silent frames."""
    n = len(frame)
    r = np.correlate(frame, frame, "full")[n - 1:n + order]
    if r[0] <= 0:
        return None
    r = r.copy()
    r[0] *= 1.0 + 1e-9
    a = solve_toeplitz(r[:order], -r[1:order + 1])
    return np.concatenate([[1.0], a])


def formants_from_lpc(poly: np.ndarray, sample_rate: int, n_formants: int = 3):
    roots = np.roots(poly)
    roots = roots[np.imag(roots) > 0]
    freqs = np.angle(roots) * sample_rate / (2 * np.pi)
    bws = -np.log(np.abs(roots)) * sample_rate / np.pi
    keep = (freqs > FORMANT_MIN_HZ) & (freqs < sample_rate / 2 - 50) & (bws < FORMANT_MAX_BW)
    order = np.argsort(freqs[keep])
    freqs, bws = freqs[keep][order], bws[keep][order]
    out_f = np.full(n_formants, np.nan)
    out_b = np.full(n_formants, np.nan)
    k = min(n_formants, len(freqs))
    out_f[:k], out_b[:k] = freqs[:k], bws[:k]
    return out_f, out_b


def lpc_order(sample_rate: int) -> int:
    return int(round(2 + sample_rate / 1000))


def hnr_from_strength(strength) -> np.ndarray:
    """Harmonics-to-noise ratio from a normalized autocorrelation peak, dB in [-100, 100]."""
    r = np.clip(np.asarray(strength, dtype=np.float64), 0.0, 1.0)
    with np.errstate(divide="ignore"):
        hnr = 10.0 * np.log10(r / (1.0 - r))
    return np.clip(np.nan_to_num(hnr, nan=-HNR_CLAMP, posinf=HNR_CLAMP, neginf=-HNR_CLAMP),
                   -HNR_CLAMP, HNR_CLAMP)


def _band(freqs, lo, hi):
    return (freqs >= lo) & (freqs < hi)


def spectral_balance(power: np.ndarray, freqs: np.ndarray):
    """Alpha ratio, Hammarberg index and the two spectral slopes per frame."""
    db = 10.0 * np.log10(power + EPS)
    low = power[:, _band(freqs, 50, 1000)].sum(axis=1)
    high = power[:, _band(freqs, 1000, 5000)].sum(axis=1)
    alpha = 10.0 * np.log10((low + EPS) / (high + EPS))
    b02, b25 = _band(freqs, 0, 2000), _band(freqs, 2000, 5000)
    hammarberg = (db[:, b02].max(axis=1) if b02.any() else 0.0) - (db[:, b25].max(axis=1) if b25.any() else 0.0)
    return alpha, hammarberg, _slope(db, freqs, 0, 500), _slope(db, freqs, 500, 1500)


def _slope(db, freqs, lo, hi):
    sel = (freqs >= lo) & (freqs <= hi)
    if sel.sum() < 2:
        return np.zeros(len(db))
    f = freqs[sel] - freqs[sel].mean()
    return (db[:, sel] - db[:, sel].mean(axis=1, keepdims=True)) @ f / (f @ f)


def extended_llds(clip, track: PitchTrack, frame_cfg: FrameConfig = FrameConfig()) -> dict[str, np.ndarray]:
    sr = clip.sample_rate
    x = np.asarray(clip.samples, dtype=np.float64)
    win, hop, nfft = frame_cfg.window_samples(sr), frame_cfg.hop_samples(sr), frame_cfg.nfft(sr)
    frames = frame_array(x, win, hop) * window(frame_cfg.window_function, win)
    power = np.abs(np.fft.rfft(frames, nfft, axis=1)) ** 2
    freqs = np.fft.rfftfreq(nfft, 1.0 / sr)
    n = len(frames)
    out: dict[str, np.ndarray] = {}

    ceps = mfcc(power, sr, nfft)
    for i in range(N_MFCC):
        out[f"mfcc{i + 1}"] = ceps[:, i]

    emph = np.concatenate([x[:1], x[1:] - PRE_EMPHASIS * x[:-1]])
    lpc_frames = frame_array(emph, win, hop) * window("hamming", win)
    db = 10.0 * np.log10(power + EPS)
    order = lpc_order(sr)
    form = np.full((n, 3, 3), np.nan)   # frame, formant, (freq, bw, amp)
    voiced = np.asarray(track.voiced, dtype=bool)[:n]
    for i in np.flatnonzero(voiced):
        poly = lpc(lpc_frames[i], order)
        if poly is None:
            continue
        f, b = formants_from_lpc(poly, sr)
        f0_bin = int(round(track.f0[i] * nfft / sr))
        for k in range(3):
            if np.isnan(f[k]):
                continue
            bin_k = int(round(f[k] * nfft / sr))
            form[i, k] = (f[k], b[k], db[i, bin_k] - db[i, f0_bin])
    for k in range(3):
        out[f"f{k + 1}_freq"] = form[:, k, 0]
        out[f"f{k + 1}_bw"] = form[:, k, 1]
        out[f"f{k + 1}_amp"] = form[:, k, 2]

    hnr = hnr_from_strength(track.strength[:n])
    out["hnr"] = np.where(voiced, hnr, np.nan)
    alpha, hamm, s1, s2 = spectral_balance(power, freqs)
    out["alpha_ratio"] = alpha
    out["hammarberg"] = hamm
    out["slope_0_500"] = s1
    out["slope_500_1500"] = s2
    return out
