"""Frame-level descriptors: intensity, spectral flux, voicing run statistics, loudness peaks."""

from __future__ import annotations

import numpy as np

from .periods import voiced_runs

INTENSITY_EPS = 1e-12


def compute_intensity(frames: np.ndarray) -> np.ndarray:
    """10*log10(mean square + 1e-12) per frame, so silence bottoms out at -120 dB."""
    return 10.0 * np.log10(np.mean(np.asarray(frames) ** 2, axis=1) + INTENSITY_EPS)


def magnitude_spectra(frames: np.ndarray, nfft: int) -> np.ndarray:
    return np.abs(np.fft.rfft(frames, nfft, axis=1))


def spectral_flux(frames: np.ndarray, nfft: int) -> np.ndarray:
    """L2 distance between consecutive L2-normalized magnitude spectra; frame 0 is 0."""
    mag = magnitude_spectra(frames, nfft)
    norm = np.linalg.norm(mag, axis=1, keepdims=True)
    unit = np.divide(mag, norm, out=np.zeros_like(mag), where=norm > 0)
    flux = np.zeros(len(frames))
    if len(frames) > 1:
        flux[1:] = np.linalg.norm(np.diff(unit, axis=0), axis=1)
    return flux


def voiced_region_stats(voiced, hop: float, duration: float | None = None) -> tuple[float, float, float]:
    """Return (mean voiced run s, mean unvoiced run s, voiced runs per second)."""
    voiced = np.asarray(voiced, dtype=bool)
    if duration is None:
        duration = len(voiced) * hop
    on = voiced_runs(voiced)
    off = voiced_runs(~voiced)
    mvd = float(np.mean([b - a for a, b in on]) * hop) if on else 0.0
    mvl = float(np.mean([b - a for a, b in off]) * hop) if off else 0.0
    cvd = len(on) / duration if duration > 0 else 0.0
    return mvd, mvl, cvd


def loudness_peaks(intensity, peak_delta: float = 1.0) -> np.ndarray:
    x = np.asarray(intensity, dtype=np.float64)
    if len(x) < 3:
        return np.zeros(0, dtype=int)
    mid = x[1:-1]
    hit = (mid - x[:-2] >= peak_delta) & (mid - x[2:] >= peak_delta)
    return np.flatnonzero(hit) + 1


def rate_of_loudness_peaks(intensity, hop: float, duration: float | None = None,
                           peak_delta: float = 1.0) -> float:
    if duration is None:
        duration = len(intensity) * hop
    if duration <= 0:
        return 0.0
    return len(loudness_peaks(intensity, peak_delta)) / duration
