from .extract import (FeatureConfig, FeatureVector, LldBundle, apply_functionals, compute_llds,
                      extract_clip_features, extract_segment_features)
from .framing import FrameConfig, frame_signal
from .lld import compute_intensity, rate_of_loudness_peaks, spectral_flux, voiced_region_stats
from .periods import PeriodSequence, detect_periods, jitter_local, shimmer_local
from .pitch import PitchConfig, PitchTrack, estimate_f0
from .registry import STUDY_FEATURES, FeatureGroup, FeatureRegistry, default_registry
from .store import FeatureMatrix, read_feature_store, write_feature_store

__all__ = [
    "FeatureConfig", "FeatureGroup", "FeatureMatrix", "FeatureRegistry", "FeatureVector",
    "FrameConfig", "LldBundle", "PeriodSequence", "PitchConfig", "PitchTrack", "STUDY_FEATURES",
    "apply_functionals", "compute_intensity", "compute_llds", "default_registry", "detect_periods",
    "estimate_f0", "extract_clip_features", "extract_segment_features", "frame_signal",
    "jitter_local", "rate_of_loudness_peaks", "read_feature_store", "shimmer_local",
    "spectral_flux", "voiced_region_stats", "write_feature_store",
]
