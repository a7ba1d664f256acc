"""Pipeline configuration: a YAML file with full defaulting, overridable from the command line."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .classifier.data import SplitSpec
from .classifier.smo import SvmParams
from .errors import ConfigError
from .features.extract import FeatureConfig
from .features.framing import FrameConfig
from .features.pitch import PitchConfig


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class FrameSection(_Strict):
    window_length: float = Field(0.025, gt=0)
    hop_length: float = Field(0.010, gt=0)
    window_function: Literal["hann", "hamming", "rect"] = "hann"


class PitchSection(_Strict):
    f_min: float = Field(50.0, gt=0)
    f_max: float = Field(600.0, gt=0)
    window_length: float = Field(0.040, gt=0)
    voicing_threshold: float = Field(0.45, ge=0, le=1)
    silence_db: float = Field(-50.0, le=0)

    @model_validator(mode="after")
    def _range(self):
        if self.f_min >= self.f_max:
            raise ValueError("pitch.f_min must be below pitch.f_max")
        return self


class SplitSection(_Strict):
    fractions: tuple[float, float, float] = (0.8, 0.1, 0.1)
    stratified: bool = True

    @field_validator("fractions")
    @classmethod
    def _sum(cls, v):
        if any(f < 0 for f in v) or abs(sum(v) - 1.0) > 1e-9:
            raise ValueError("split fractions must be non-negative and sum to 1")
        return v


class GridSection(_Strict):
    kernels: tuple[Literal["linear", "rbf"], ...] = ("linear", "rbf")
    C: tuple[float, ...] = (0.1, 1.0, 10.0, 100.0)
    gamma: tuple[Union[float, Literal["1/d"]], ...] = ("1/d", 0.01, 0.1)
    smo_tolerance: float = Field(1e-3, gt=0)
    max_passes: int = Field(500, ge=1)
    class_weighting: bool = False

    @field_validator("C")
    @classmethod
    def _positive(cls, v):
        if any(c <= 0 for c in v):
            raise ValueError("grid.C values must be positive")
        return v


class PipelineConfig(_Strict):
    """Every knob of a run. Relative paths resolve against the config file's directory."""

    manifest: Optional[Path] = None
    out: Path = Path("out")
    language: Literal["hi", "en", "all"] = "all"
    seed: int = 0
    jobs: int = Field(1, ge=1)
    continue_on_error: bool = False
    registry_version: Literal[1] = 1
    tier_name: str = "Aggression"
    turn_tier_name: str = "Turn"
    min_duration: float = Field(0.2, ge=0)
    peak_delta: float = Field(1.0, gt=0)
    frame: FrameSection = FrameSection()
    pitch: PitchSection = PitchSection()
    split: SplitSection = SplitSection()
    grid: GridSection = GridSection()

    def feature_config(self) -> FeatureConfig:
        return FeatureConfig(
            frame=FrameConfig(self.frame.window_length, self.frame.hop_length, self.frame.window_function),
            pitch=PitchConfig(self.pitch.f_min, self.pitch.f_max, self.pitch.window_length,
                              self.pitch.voicing_threshold, self.pitch.silence_db),
            peak_delta=self.peak_delta,
        )

    def split_spec(self) -> SplitSpec:
        return SplitSpec(tuple(self.split.fractions), self.seed, self.split.stratified)

    def svm_base(self) -> SvmParams:
        return SvmParams(smo_tolerance=self.grid.smo_tolerance, max_passes=self.grid.max_passes)

    def snapshot(self) -> dict:
        return json.loads(self.model_dump_json())

    def digest(self) -> str:
        blob = json.dumps(self.snapshot(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> PipelineConfig:
    """Read ``path`` (if any), apply ``overrides`` on top and validate."""
    data: dict = {}
    base = Path.cwd()
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: invalid YAML: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
        base = path.parent
    data = {**data, **{k: v for k, v in (overrides or {}).items() if v is not None}}
    try:
        cfg = PipelineConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"invalid configuration: {exc}") from None
    updates = {}
    if cfg.manifest is not None and not cfg.manifest.is_absolute() and "manifest" not in (overrides or {}):
        updates["manifest"] = base / cfg.manifest
    if not cfg.out.is_absolute() and "out" not in (overrides or {}):
        updates["out"] = base / cfg.out
    return cfg.model_copy(update=updates) if updates else cfg


def default_config_yaml() -> str:
    return yaml.safe_dump(json.loads(PipelineConfig().model_dump_json()), sort_keys=False)
