from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ClassTooSmall, DataError, DegenerateVariance
from .distributions import f_sf

P_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class GroupedSamples:
    feature_name: str
    groups: tuple[tuple[str, np.ndarray], ...]

    def __post_init__(self):
        groups = tuple((str(name), np.asarray(v, dtype=np.float64)) for name, v in self.groups)
        if len(groups) < 2:
            raise ClassTooSmall(f"{self.feature_name}: need at least 2 groups, got {len(groups)}")
        for name, v in groups:
            if len(v) < 2:
                raise ClassTooSmall(f"{self.feature_name}: group {name} has {len(v)} sample(s), need 2")
            if not np.isfinite(v).all():
                raise DataError(f"{self.feature_name}: group {name} holds non-finite values")
        object.__setattr__(self, "groups", groups)

    @classmethod
    def from_mapping(cls, feature_name: str, mapping) -> "GroupedSamples":
        return cls(feature_name, tuple(mapping.items()))

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.groups]

    @property
    def values(self) -> list[np.ndarray]:
        return [v for _, v in self.groups]


@dataclass(frozen=True)
class AnovaResult:
    f_statistic: float
    df_between: int
    df_within: int
    p_value: float
    group_means: tuple[float, ...]
    ms_within: float
    p_underflow: bool = False


def _sums_of_squares(values):
    grand = np.concatenate(values).mean()
    ssb = sum(len(v) * (v.mean() - grand) ** 2 for v in values)
    ssw = sum(((v - v.mean()) ** 2).sum() for v in values)
    return float(ssb), float(ssw)


def one_way_anova(g: GroupedSamples) -> AnovaResult:
    values = g.values
    k = len(values)
    n = sum(len(v) for v in values)
    ssb, ssw = _sums_of_squares(values)
    scale = sum(float((v ** 2).sum()) for v in values)
    if ssw <= 1e-14 * max(scale, 1e-300):
        raise DegenerateVariance(f"{g.feature_name}: pooled within-group variance is zero")
    df_b, df_w = k - 1, n - k
    msw = ssw / df_w
    f = (ssb / df_b) / msw
    p = f_sf(f, df_b, df_w)
    underflow = p < P_FLOOR
    return AnovaResult(float(f), df_b, df_w, 0.0 if underflow else p,
                       tuple(float(v.mean()) for v in values), msw, underflow)
