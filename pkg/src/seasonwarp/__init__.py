"""Weekly commodity market series toolkit.

Cleaning (spline gap fill, IQR outlier flags), descriptive statistics,
ISO-week seasonal indices, ADF unit-root testing, and Dynamic Time Warping
alignment of year slices, with a CLI front end (``seasonwarp``).
"""

from .cleaning import (
    CleaningReport,
    ColumnSchema,
    Fence,
    OutlierWeek,
    clean_series,
    find_missing_weeks,
    iqr_outliers,
    parse_market_csv,
    spline_fill,
)
from .descriptive import (
    DescriptiveSummary,
    describe,
    excess_kurtosis,
    jarque_bera,
    moments,
    quantile,
    skewness,
)
from .dtw import (
    DtwOptions,
    DtwResult,
    LocalMetric,
    Normalization,
    PairRanking,
    RankedPair,
    WarpPath,
    backtrack,
    band_sensitivity,
    cumulative_cost,
    dtw_align,
    local_distance_matrix,
    mean_cost,
    rank_pairs,
    rank_summaries,
    zscore,
)
from .errors import (
    DataIntegrityError,
    DegenerateDataError,
    InsufficientDataError,
    MarketDataError,
    NoValidPathError,
    SchemaError,
)
from .seasonal import (
    SeasonalIndexTable,
    WeekIndexEntry,
    index_weighted_mean,
    seasonal_index,
)
from .series import (
    PointFlag,
    SeriesPoint,
    Variable,
    WeekKey,
    WeeklyObservation,
    WeeklySeries,
    YearSlice,
    build_weekly_series,
    complete_years,
    iso_week_of,
    log_diff,
    slice_year,
    week_range,
    weeks_in_iso_year,
)
from .unitroot import AdfResult, adf_test, mackinnon_pvalue

__version__ = "0.1.0"

__all__ = [
    "AdfResult",
    "CleaningReport",
    "ColumnSchema",
    "DataIntegrityError",
    "DegenerateDataError",
    "DescriptiveSummary",
    "DtwOptions",
    "DtwResult",
    "Fence",
    "InsufficientDataError",
    "LocalMetric",
    "MarketDataError",
    "NoValidPathError",
    "Normalization",
    "OutlierWeek",
    "PairRanking",
    "PointFlag",
    "RankedPair",
    "SchemaError",
    "SeasonalIndexTable",
    "SeriesPoint",
    "Variable",
    "WarpPath",
    "WeekIndexEntry",
    "WeekKey",
    "WeeklyObservation",
    "WeeklySeries",
    "YearSlice",
    "adf_test",
    "backtrack",
    "band_sensitivity",
    "build_weekly_series",
    "clean_series",
    "complete_years",
    "cumulative_cost",
    "describe",
    "dtw_align",
    "excess_kurtosis",
    "find_missing_weeks",
    "index_weighted_mean",
    "iqr_outliers",
    "iso_week_of",
    "jarque_bera",
    "local_distance_matrix",
    "log_diff",
    "mackinnon_pvalue",
    "mean_cost",
    "moments",
    "parse_market_csv",
    "quantile",
    "rank_pairs",
    "rank_summaries",
    "seasonal_index",
    "skewness",
    "slice_year",
    "spline_fill",
    "week_range",
    "weeks_in_iso_year",
    "zscore",
]
