from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .anova import GroupedSamples, one_way_anova
from .distributions import studentized_range_cdf, studentized_range_critical

DEFAULT_ALPHAS = (0.05, 0.01)


@dataclass(frozen=True)
class TukeyPair:
    class_a: str
    class_b: str
    mean_diff: float
    q_statistic: float
    p_value: float
    significant: tuple[tuple[float, bool], ...]

    def significant_at(self, alpha: float) -> bool:
        return dict(self.significant)[alpha]

    @property
    def significant_at_05(self) -> bool:
        return self.significant_at(0.05)

    @property
    def significant_at_01(self) -> bool:
        return self.significant_at(0.01)


@dataclass(frozen=True)
class TukeyResult:
    pairs: tuple[TukeyPair, ...]
    critical_values: tuple[tuple[float, float], ...]
    df_within: int


def tukey_q(mean_a: float, mean_b: float, n_a: int, n_b: int, msw: float) -> float:
    """Tukey-Kramer studentized difference for possibly unequal group sizes."""
    return abs(mean_a - mean_b) / math.sqrt(msw / 2.0 * (1.0 / n_a + 1.0 / n_b))


def tukey_hsd(g: GroupedSamples, alphas=DEFAULT_ALPHAS, anova=None) -> TukeyResult:
    anova = anova or one_way_anova(g)
    k = len(g.groups)
    crit = {a: studentized_range_critical(k, float(anova.df_within), a) for a in alphas}
    pairs = []
    for (name_a, va), (name_b, vb) in combinations(g.groups, 2):
        diff = float(va.mean() - vb.mean())
        q = float(tukey_q(va.mean(), vb.mean(), len(va), len(vb), anova.ms_within))
        p = 1.0 - studentized_range_cdf(q, k, float(anova.df_within))
        pairs.append(TukeyPair(name_a, name_b, diff, q, min(max(p, 0.0), 1.0),
                               tuple((a, bool(q > crit[a])) for a in alphas)))
    return TukeyResult(tuple(pairs), tuple(crit.items()), anova.df_within)
