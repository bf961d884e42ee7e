"""Weekly seasonal indices on the ISO-week grid, base 100.

Two methods, both labeled in the output table:

* ``weekly-mean`` (default): index(w) = 100 * mean of week-w values across
  complete years / grand mean of all complete-year values.
* ``moving-average``: ratio to a centered 52-week moving average (half
  weights at both ends), averaged per week, then rescaled so the
  support-weighted mean is exactly 100.

Week 53 is computed from the 53-week years only and carries their (lower)
support count; pooling it into week 52 would bias week 52.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateDataError, InsufficientDataError
from .series import Variable, WeeklySeries, complete_years

METHODS = ("weekly-mean", "moving-average")

MA_HALF_SPAN = 26  # centered 52-week window: 0.5*v[t-26] + ... + 0.5*v[t+26]


@dataclass(frozen=True)
class WeekIndexEntry:
    iso_week: int
    index: float
    support: int

    def __post_init__(self) -> None:
        if not 1 <= self.iso_week <= 53:
            raise ValueError(f"iso_week must be in 1..53, got {self.iso_week}")
        if self.support < 1:
            raise ValueError(f"support must be >= 1, got {self.support}")


@dataclass(frozen=True)
class SeasonalIndexTable:
    variable: Variable
    method: str
    entries: tuple[WeekIndexEntry, ...]

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        weeks = [e.iso_week for e in self.entries]
        if weeks != sorted(set(weeks)):
            raise ValueError("entries must be strictly increasing in iso_week")

    def index_of(self, iso_week: int) -> float:
        for e in self.entries:
            if e.iso_week == iso_week:
                return e.index
        raise KeyError(f"no entry for iso_week {iso_week}")

    def to_dict(self) -> dict:
        return {
            "variable": self.variable.value,
            "method": self.method,
            "entries": [
                {"iso_week": e.iso_week, "index": e.index, "support": e.support}
                for e in self.entries
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SeasonalIndexTable":
        return cls(
            variable=Variable(d["variable"]),
            method=d["method"],
            entries=tuple(
                WeekIndexEntry(e["iso_week"], e["index"], e["support"])
                for e in d["entries"]
            ),
        )


def _complete_year_points(series: WeeklySeries) -> tuple[list, list[int]]:
    years = complete_years(series)
    if len(years) < 2:
        raise InsufficientDataError(
            f"seasonal index needs >= 2 complete ISO years, got {len(years)}"
        )
    year_set = set(years)
    points = [p for p in series.points if p.week.iso_year in year_set]
    return points, years


def _weekly_mean_entries(series: WeeklySeries) -> list[WeekIndexEntry]:
    points, _ = _complete_year_points(series)
    total = 0.0
    by_week: dict[int, list[float]] = {}
    for p in points:
        total += p.value
        by_week.setdefault(p.week.iso_week, []).append(p.value)
    grand_mean = total / len(points)
    if grand_mean == 0.0:
        raise DegenerateDataError("seasonal index undefined for zero grand mean")
    return [
        WeekIndexEntry(w, 100.0 * (sum(vals) / len(vals)) / grand_mean, len(vals))
        for w, vals in sorted(by_week.items())
    ]


def _moving_average_entries(series: WeeklySeries) -> list[WeekIndexEntry]:
    points, years = _complete_year_points(series)
    year_set = set(years)
    all_points = series.points
    values = [p.value for p in all_points]
    n = len(values)
    # ratio to the centered 52-week moving average wherever the window fits
    ratios: dict[int, list[float]] = {}
    for t in range(MA_HALF_SPAN, n - MA_HALF_SPAN):
        p = all_points[t]
        if p.week.iso_year not in year_set:
            continue
        window = (
            0.5 * values[t - MA_HALF_SPAN]
            + sum(values[t - MA_HALF_SPAN + 1 : t + MA_HALF_SPAN])
            + 0.5 * values[t + MA_HALF_SPAN]
        )
        ma = window / (2 * MA_HALF_SPAN)
        if ma == 0.0:
            raise DegenerateDataError(
                f"zero moving average at {p.week}; cannot form ratio"
            )
        ratios.setdefault(p.week.iso_week, []).append(p.value / ma)
    if not ratios:
        raise InsufficientDataError(
            "series too short for a centered 52-week moving average"
        )
    raw = {w: sum(r) / len(r) for w, r in ratios.items()}
    support = {w: len(r) for w, r in ratios.items()}
    # rescale so the support-weighted mean is exactly 100
    weighted = sum(raw[w] * support[w] for w in raw) / sum(support.values())
    return [
        WeekIndexEntry(w, 100.0 * raw[w] / weighted, support[w])
        for w in sorted(raw)
    ]


def seasonal_index(series: WeeklySeries, method: str = "weekly-mean") -> SeasonalIndexTable:
    """Per-ISO-week index table for a dense series covering >= 2 full years.

    support(w) counts the years contributing to week w; week 53 appears only
    when a covered year has 53 weeks.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if method == "weekly-mean":
        entries = _weekly_mean_entries(series)
    else:
        entries = _moving_average_entries(series)
    return SeasonalIndexTable(series.variable, method, tuple(entries))


def index_weighted_mean(table: SeasonalIndexTable) -> float:
    """Support-weighted mean of the indices.

    Equals 100 (to float tolerance) whenever every contributing year is
    complete; a deviation signals broken normalization upstream.
    """
    if not table.entries:
        raise InsufficientDataError("empty seasonal index table")
    total_support = sum(e.support for e in table.entries)
    return sum(e.index * e.support for e in table.entries) / total_support
