from .anova import AnovaResult, GroupedSamples, one_way_anova
from .distributions import betainc_regularized, f_sf, studentized_range_cdf, studentized_range_critical
from .report import CorrelateReport, correlate_report, write_report
from .tukey import TukeyPair, TukeyResult, tukey_hsd

__all__ = [
    "AnovaResult", "CorrelateReport", "GroupedSamples", "TukeyPair", "TukeyResult",
    "betainc_regularized", "correlate_report", "f_sf", "one_way_anova",
    "studentized_range_cdf", "studentized_range_critical", "tukey_hsd", "write_report",
]
