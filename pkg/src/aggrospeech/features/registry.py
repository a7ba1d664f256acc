"""Named, grouped feature layout shared by extraction, the feature store and models."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..errors import RegistryMismatch
from .extended import EXTENDED_LLDS

REGISTRY_VERSION = 1

TEN_FUNCTIONALS = ("mean", "std", "p20", "p50", "p80", "range",
                   "rise_mean", "rise_std", "fall_mean", "fall_std")


class FeatureGroup(str, Enum):
    # declaration order is the cumulative ablation order
    SHIMMER = "SHIMMER"
    F0 = "F0"
    JITTER = "JITTER"
    INTENSITY = "INTENSITY"
    SPECTRAL_FLUX = "SPECTRAL_FLUX"
    VOICED_LEN = "VOICED_LEN"
    PEAK_RATE_CVD = "PEAK_RATE_CVD"
    EXTENDED = "EXTENDED"


GROUP_ORDER = tuple(FeatureGroup)

# the nine correlate-study features, one scalar each
STUDY_FEATURES = (
    "f0_mean", "intensity_mean", "jitter_mean", "shimmer_mean", "rlp",
    "mvd", "mvl", "cvd", "spectral_flux_mean",
)


@dataclass(frozen=True)
class FeatureRegistry:
    entries: tuple[tuple[str, FeatureGroup], ...]
    version: int = REGISTRY_VERSION

    def __post_init__(self):
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise ValueError("feature names must be unique")
        ranks = [GROUP_ORDER.index(g) for _, g in self.entries]
        if ranks != sorted(ranks):
            raise ValueError("features must be ordered by group")

    def __len__(self):
        return len(self.entries)

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.entries]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def group_sizes(self) -> dict[FeatureGroup, int]:
        sizes = {g: 0 for g in GROUP_ORDER}
        for _, g in self.entries:
            sizes[g] += 1
        return sizes

    def columns_for(self, groups) -> list[int]:
        wanted = {FeatureGroup(g) for g in groups}
        return [i for i, (_, g) in enumerate(self.entries) if g in wanted]

    def subset(self, groups) -> "FeatureRegistry":
        cols = self.columns_for(groups)
        return FeatureRegistry(tuple(self.entries[i] for i in cols), self.version)

    def column_names(self) -> list[str]:
        """Feature-store header names: ``GROUP.name``."""
        return [f"{g.value}.{n}" for n, g in self.entries]

    def manifest(self) -> str:
        lines = [f"# feature registry v{self.version}", f"# {len(self)} features"]
        lines += [f"{g.value}\t{n}" for n, g in self.entries]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_manifest(cls, text: str) -> "FeatureRegistry":
        version = REGISTRY_VERSION
        entries = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line.startswith("# feature registry v"):
                    version = int(line.rsplit("v", 1)[1])
                continue
            group, name = line.split("\t")
            entries.append((name, FeatureGroup(group)))
        return cls(tuple(entries), version)

    @classmethod
    def from_columns(cls, columns) -> "FeatureRegistry":
        entries = []
        for col in columns:
            group, _, name = col.partition(".")
            try:
                entries.append((name, FeatureGroup(group)))
            except ValueError:
                raise RegistryMismatch(f"column {col!r} is not GROUP.name") from None
        return cls(tuple(entries))

    def require_same(self, other: "FeatureRegistry") -> None:
        if self.entries != other.entries or self.version != other.version:
            raise RegistryMismatch(
                f"registry mismatch: {len(self)} features (v{self.version}) vs "
                f"{len(other)} features (v{other.version})"
            )


def default_registry() -> FeatureRegistry:
    e: list[tuple[str, FeatureGroup]] = []
    e += [("shimmer_mean", FeatureGroup.SHIMMER), ("shimmer_std", FeatureGroup.SHIMMER)]
    e += [(f"f0_{f}", FeatureGroup.F0) for f in TEN_FUNCTIONALS]
    e += [("jitter_mean", FeatureGroup.JITTER), ("jitter_std", FeatureGroup.JITTER)]
    e += [(f"intensity_{f}", FeatureGroup.INTENSITY) for f in TEN_FUNCTIONALS]
    e += [("spectral_flux_mean", FeatureGroup.SPECTRAL_FLUX), ("spectral_flux_std", FeatureGroup.SPECTRAL_FLUX)]
    e += [("mvd", FeatureGroup.VOICED_LEN), ("mvl", FeatureGroup.VOICED_LEN)]
    e += [("rlp", FeatureGroup.PEAK_RATE_CVD), ("cvd", FeatureGroup.PEAK_RATE_CVD)]
    for lld in EXTENDED_LLDS:
        e += [(f"{lld}_mean", FeatureGroup.EXTENDED), (f"{lld}_std", FeatureGroup.EXTENDED)]
    return FeatureRegistry(tuple(e))
