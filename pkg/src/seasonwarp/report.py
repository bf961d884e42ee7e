"""Report assembly and deterministic serialization (JSON / CSV).

JSON is emitted with sorted keys and two-space indentation; CSV uses
RFC-4180 quoting with CRLF row endings.  Identical inputs give identical
bytes, which the golden-file tests rely on.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .cleaning import CleaningReport
from .descriptive import DescriptiveSummary
from .dtw import PairRanking
from .seasonal import SeasonalIndexTable
from .series import WeeklySeries
from .unitroot import AdfResult


def to_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _csv_text(rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)  # RFC-4180: CRLF endings, minimal quoting
    writer.writerows(rows)
    return buf.getvalue()


@dataclass(frozen=True)
class AnalysisBundle:
    """Everything one full pipeline run produces, keyed by variable name."""

    cleaning: dict[str, CleaningReport]
    summaries: dict[str, DescriptiveSummary]
    seasonal: dict[str, SeasonalIndexTable]
    dtw: dict[str, PairRanking]
    adf_log_price_diff: AdfResult | None

    def to_dict(self) -> dict:
        return {
            "cleaning": {k: v.to_dict() for k, v in sorted(self.cleaning.items())},
            "summaries": {k: v.to_dict() for k, v in sorted(self.summaries.items())},
            "seasonal": {k: v.to_dict() for k, v in sorted(self.seasonal.items())},
            "dtw": {k: v.to_dict() for k, v in sorted(self.dtw.items())},
            "adf_log_price_diff": (
                None if self.adf_log_price_diff is None else self.adf_log_price_diff.to_dict()
            ),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisBundle":
        return cls(
            cleaning={k: CleaningReport.from_dict(v) for k, v in d["cleaning"].items()},
            summaries={
                k: DescriptiveSummary.from_dict(v) for k, v in d["summaries"].items()
            },
            seasonal={
                k: SeasonalIndexTable.from_dict(v) for k, v in d["seasonal"].items()
            },
            dtw={k: PairRanking.from_dict(v) for k, v in d["dtw"].items()},
            adf_log_price_diff=(
                None
                if d["adf_log_price_diff"] is None
                else AdfResult.from_dict(d["adf_log_price_diff"])
            ),
        )


_STAT_ROWS = (
    ("count", "count"),
    ("mean", "mean"),
    ("std", "std"),
    ("cv_percent", "cv_percent"),
    ("skewness", "skewness"),
    ("excess_kurtosis", "excess_kurtosis"),
    ("min", "minimum"),
    ("p25", "p25"),
    ("median", "median"),
    ("p75", "p75"),
    ("max", "maximum"),
    ("jb_statistic", "jarque_bera"),
    ("jb_p_value", "jarque_bera_p"),
)


def stats_csv(
    summaries: dict[str, DescriptiveSummary], adf: AdfResult | None
) -> str:
    """Fixed-shape metric table: metric, arrivals, modal_price columns."""
    rows: list[list] = [["metric", "arrivals", "modal_price"]]
    arr = summaries.get("arrivals")
    pri = summaries.get("modal_price")

    def cell(summary: DescriptiveSummary | None, attr: str):
        return "" if summary is None else getattr(summary, attr)

    for label, attr in _STAT_ROWS:
        rows.append([label, cell(arr, attr), cell(pri, attr)])
    if adf is not None:
        rows.append(["adf_statistic_log_price_diff", "", adf.statistic])
        rows.append(["adf_p_value_log_price_diff", "", adf.pvalue])
        rows.append(["adf_lags_used", "", adf.used_lag])
        rows.append(["adf_n_effective", "", adf.nobs])
    return _csv_text(rows)


def seasonal_csv(table: SeasonalIndexTable) -> str:
    rows: list[list] = [["iso_week", "index", "support"]]
    for e in table.entries:
        rows.append([e.iso_week, e.index, e.support])
    return _csv_text(rows)


def ranking_csv(ranking: PairRanking) -> str:
    rows: list[list] = [["year_pair", "total_cost", "mean_cost", "path_length", "rank"]]
    for e in ranking.entries:
        rows.append(
            [
                f"{e.year_pair[0]}-{e.year_pair[1]}",
                e.total_cost,
                e.mean_cost,
                e.path_length,
                e.rank,
            ]
        )
    return _csv_text(rows)


def series_csv(series: WeeklySeries) -> str:
    rows: list[list] = [["iso_year", "iso_week", "week_ending", "value", "flag"]]
    for p in series.points:
        rows.append(
            [
                p.week.iso_year,
                p.week.iso_week,
                p.week.end_date().isoformat(),
                p.value,
                p.flag.value,
            ]
        )
    return _csv_text(rows)


def matrix_csv(matrix) -> str:
    return _csv_text([[float(v) for v in row] for row in matrix])
