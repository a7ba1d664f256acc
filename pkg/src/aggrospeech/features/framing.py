from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import TooShort

WINDOWS = ("hann", "hamming", "rect")


@dataclass(frozen=True)
class FrameConfig:
    window_length: float = 0.025
    hop_length: float = 0.010
    window_function: str = "hann"
    fft_size: int | None = None

    def __post_init__(self):
        if not 0 < self.hop_length <= self.window_length:
            raise ValueError("need 0 < hop_length <= window_length")
        if self.window_function not in WINDOWS:
            raise ValueError(f"window_function must be one of {WINDOWS}")
        if self.fft_size is not None and self.fft_size & (self.fft_size - 1):
            raise ValueError("fft_size must be a power of two")

    def window_samples(self, sample_rate: int) -> int:
        return int(round(self.window_length * sample_rate))

    def hop_samples(self, sample_rate: int) -> int:
        return int(round(self.hop_length * sample_rate))

    def nfft(self, sample_rate: int) -> int:
        w = self.window_samples(sample_rate)
        n = self.fft_size or 1 << (w - 1).bit_length()
        if n < w:
            raise ValueError(f"fft_size {n} shorter than window ({w} samples)")
        return n


def window(name: str, length: int) -> np.ndarray:
    """Periodic analysis window."""
    n = np.arange(length)
    if name == "hann":
        return 0.5 - 0.5 * np.cos(2 * np.pi * n / length)
    if name == "hamming":
        return 0.54 - 0.46 * np.cos(2 * np.pi * n / length)
    if name == "rect":
        return np.ones(length)
    raise ValueError(f"unknown window {name!r}")


def frame_count(n_samples: int, win: int, hop: int) -> int:
    if n_samples < win:
        return 0
    return (n_samples - win) // hop + 1


def frame_array(x: np.ndarray, win: int, hop: int) -> np.ndarray:
    """Strided (n_frames, win) view of ``x``; raises TooShort below one window."""
    n = frame_count(len(x), win, hop)
    if n == 0:
        raise TooShort(f"{len(x)} samples is shorter than one {win}-sample window")
    return np.lib.stride_tricks.sliding_window_view(x, win)[::hop][:n]


def frame_signal(clip, cfg: FrameConfig = FrameConfig(), window_function: str | None = None) -> np.ndarray:
    sr = clip.sample_rate
    win, hop = cfg.window_samples(sr), cfg.hop_samples(sr)
    frames = frame_array(np.asarray(clip.samples, dtype=np.float64), win, hop)
    return frames * window(window_function or cfg.window_function, win)
