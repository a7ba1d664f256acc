"""Segment-level feature extraction: LLD tracks, then functionals."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InsufficientPeriods, NoVoicedRegion, RegistryMismatch
from .extended import EXTENDED_LLDS, VOICED_ONLY, extended_llds
from .framing import FrameConfig, frame_signal
from .functionals import mean_std, semitones, ten_functionals
from .lld import compute_intensity, rate_of_loudness_peaks, spectral_flux, voiced_region_stats
from .periods import PeriodSequence, detect_periods, jitter_values, shimmer_values, voiced_runs
from .pitch import PitchConfig, PitchTrack, estimate_f0
from .registry import TEN_FUNCTIONALS, FeatureRegistry, default_registry

FLAG_NAMES = ("f0_empty", "jitter_empty", "shimmer_empty", "shimmer_zero_amplitude",
              "formant_empty", "hnr_empty")


@dataclass(frozen=True)
class FeatureConfig:
    frame: FrameConfig = FrameConfig()
    pitch: PitchConfig = PitchConfig()
    peak_delta: float = 1.0


@dataclass(frozen=True, eq=False)
class LldBundle:
    f0: np.ndarray
    voiced: np.ndarray
    strength: np.ndarray
    intensity: np.ndarray
    loudness: np.ndarray
    spectral_flux: np.ndarray
    extended: dict = field(default_factory=dict)
    hop: float = 0.01
    duration: float = 0.0

    def __len__(self):
        return len(self.f0)

    @property
    def pitch(self) -> PitchTrack:
        return PitchTrack(self.f0, self.voiced, self.strength)


@dataclass(frozen=True, eq=False)
class FeatureVector:
    values: np.ndarray
    segment_id: str = ""
    coarse_class: str = ""
    language: str = ""
    flags: dict = field(default_factory=dict)


def compute_llds(clip, cfg: FeatureConfig = FeatureConfig()) -> LldBundle:
    rect = frame_signal(clip, cfg.frame, window_function="rect")
    windowed = frame_signal(clip, cfg.frame)
    track = estimate_f0(clip, cfg.pitch, cfg.frame)
    ms = np.mean(rect ** 2, axis=1)
    return LldBundle(
        f0=track.f0,
        voiced=track.voiced,
        strength=track.strength,
        intensity=compute_intensity(rect),
        loudness=ms,
        spectral_flux=spectral_flux(windowed, cfg.frame.nfft(clip.sample_rate)),
        extended=extended_llds(clip, track, cfg.frame),
        hop=cfg.frame.hop_samples(clip.sample_rate) / clip.sample_rate,
        duration=clip.duration,
    )


def try_detect_periods(clip, bundle: LldBundle, cfg: FeatureConfig = FeatureConfig()) -> PeriodSequence:
    try:
        return detect_periods(clip, bundle.pitch, cfg.frame)
    except NoVoicedRegion:
        return PeriodSequence((), ())


def _perturbation(fn, periods):
    try:
        vals = fn(periods)
    except InsufficientPeriods:
        return (0.0, 0.0), True
    return mean_std(vals), False


def all_functionals(bundle: LldBundle, periods: PeriodSequence,
                    peak_delta: float = 1.0) -> tuple[dict[str, float], dict[str, bool]]:
    out: dict[str, float] = {}
    flags = dict.fromkeys(FLAG_NAMES, False)
    hop = bundle.hop

    (out["shimmer_mean"], out["shimmer_std"]), flags["shimmer_empty"] = _perturbation(shimmer_values, periods)
    flags["shimmer_zero_amplitude"] = periods.count > 0 and periods.amplitude_degenerate

    f0_pieces = [semitones(bundle.f0[a:b]) for a, b in voiced_runs(bundle.voiced)]
    vals, flags["f0_empty"] = ten_functionals(f0_pieces, hop)
    out.update(zip((f"f0_{f}" for f in TEN_FUNCTIONALS), vals))

    (out["jitter_mean"], out["jitter_std"]), flags["jitter_empty"] = _perturbation(jitter_values, periods)

    vals, _ = ten_functionals([bundle.intensity], hop)
    out.update(zip((f"intensity_{f}" for f in TEN_FUNCTIONALS), vals))

    out["spectral_flux_mean"], out["spectral_flux_std"] = mean_std(bundle.spectral_flux)

    mvd, mvl, cvd = voiced_region_stats(bundle.voiced, hop, bundle.duration)
    out["mvd"], out["mvl"] = mvd, mvl
    out["rlp"] = rate_of_loudness_peaks(bundle.intensity, hop, bundle.duration, peak_delta)
    out["cvd"] = cvd

    for lld in EXTENDED_LLDS:
        track = np.asarray(bundle.extended[lld], dtype=np.float64)
        if lld in VOICED_ONLY:
            track = track[bundle.voiced[:len(track)]]
        out[f"{lld}_mean"], out[f"{lld}_std"] = mean_std(track)
    flags["formant_empty"] = not np.isfinite(bundle.extended["f1_freq"]).any()
    flags["hnr_empty"] = not np.isfinite(bundle.extended["hnr"]).any()
    return out, flags


def apply_functionals(bundle: LldBundle, periods: PeriodSequence,
                      registry: FeatureRegistry | None = None, peak_delta: float = 1.0) -> FeatureVector:
    registry = registry or default_registry()
    named, flags = all_functionals(bundle, periods, peak_delta)
    try:
        values = np.array([named[n] for n in registry.names], dtype=np.float64)
    except KeyError as exc:
        raise RegistryMismatch(f"registry names unknown feature {exc.args[0]!r}") from None
    return FeatureVector(values=values, flags=flags)


def extract_clip_features(clip, cfg: FeatureConfig = FeatureConfig(),
                          registry: FeatureRegistry | None = None) -> FeatureVector:
    bundle = compute_llds(clip, cfg)
    periods = try_detect_periods(clip, bundle, cfg)
    return apply_functionals(bundle, periods, registry, cfg.peak_delta)


def extract_segment_features(segment, language: str = "", cfg: FeatureConfig = FeatureConfig(),
                             registry: FeatureRegistry | None = None) -> FeatureVector:
    fv = extract_clip_features(segment.audio, cfg, registry)
    return FeatureVector(fv.values, segment.segment_id, segment.coarse_class.value, language, fv.flags)
