"""Command-line front end: seasonwarp clean|stats|seasonal|dtw|fixture|report-all.

Exit codes: 0 success, 1 usage error, 2 data or I/O error.  All outputs are
computed in memory first and written in one pass afterwards, so a failing
run leaves no partial output tree.  Writes happen in sorted filename order
and every emitter is deterministic, which makes output trees byte-stable.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .cleaning import ColumnSchema, clean_series, parse_market_csv
from .descriptive import describe
from .dtw import (
    DtwOptions,
    LocalMetric,
    Normalization,
    cumulative_cost,
    dtw_align,
    local_distance_matrix,
    rank_pairs,
    zscore,
)
from .errors import DataIntegrityError, MarketDataError
from .fixture import generate_fixture
from .report import (
    AnalysisBundle,
    matrix_csv,
    ranking_csv,
    seasonal_csv,
    series_csv,
    stats_csv,
    to_json,
)
from .seasonal import seasonal_index
from .series import (
    Variable,
    WeeklySeries,
    build_weekly_series,
    complete_years,
    log_diff,
    slice_year,
    weeks_in_iso_year,
)
from .svg import bar_chart, dtw_figure, line_chart
from .unitroot import adf_test

FORMATS = ("json", "csv", "svg")


class UsageError(Exception):
    """Bad invocation (flag combinations, values): exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


_BOOL_DESTS = {"winsorize", "all_pairs", "force", "dump_matrices"}
_INT_DESTS = {"band", "seed"}

_DEFAULTS = {
    "variable": "both",
    "date_col": "date",
    "arrivals_col": "arrivals",
    "price_col": "modal_price",
    "date_format": "iso",
    "seed": 42,
}
_FORMAT_DEFAULTS = {
    "clean": "json,csv",
    "stats": "json,csv",
    "seasonal": "json,csv,svg",
    "dtw": "json,csv,svg",
    "report-all": "json,csv,svg",
}


def _add_common(sp: argparse.ArgumentParser, *, with_input: bool, input_required: bool = True) -> None:
    if with_input:
        sp.add_argument("--input", default=None, required=False,
                        help="input CSV path" + ("" if input_required else " (omit to use the generated fixture)"))
    sp.add_argument("--out-dir", dest="out_dir", default=None, help="output directory")
    sp.add_argument("--force", action="store_true", default=None,
                    help="overwrite existing output files")
    sp.add_argument("--config", default=None,
                    help="key=value config file; command-line flags win")


def _add_data_opts(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--variable", choices=("arrivals", "price", "both"), default=None)
    sp.add_argument("--years", default=None, metavar="A..B",
                    help="restrict to ISO years A through B")
    sp.add_argument("--winsorize", action="store_true", default=None,
                    help="clamp flagged outliers to the IQR fences")
    sp.add_argument("--date-col", dest="date_col", default=None)
    sp.add_argument("--arrivals-col", dest="arrivals_col", default=None)
    sp.add_argument("--price-col", dest="price_col", default=None)
    sp.add_argument("--date-format", dest="date_format", choices=("iso", "dmy"), default=None)
    sp.add_argument("--format", dest="formats", default=None,
                    help="comma-separated subset of json,csv,svg")


def build_parser() -> _Parser:
    parser = _Parser(prog="seasonwarp",
                     description="Weekly market series cleaning, statistics, "
                                 "seasonal indices, and DTW alignment.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fixture", help="write the synthetic dataset", parents=[])
    _add_common(p, with_input=False)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(handler=cmd_fixture)

    p = sub.add_parser("clean", help="gap-fill and outlier-flag a CSV")
    _add_common(p, with_input=True)
    _add_data_opts(p)
    p.set_defaults(handler=cmd_clean)

    p = sub.add_parser("stats", help="descriptive statistics and ADF test")
    _add_common(p, with_input=True)
    _add_data_opts(p)
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("seasonal", help="ISO-week seasonal index tables")
    _add_common(p, with_input=True)
    _add_data_opts(p)
    p.add_argument("--detrend", choices=("moving-average",), default=None,
                   help="ratio-to-moving-average instead of weekly means")
    p.set_defaults(handler=cmd_seasonal)

    p = sub.add_parser("dtw", help="align year pairs by dynamic time warping")
    _add_common(p, with_input=True)
    _add_data_opts(p)
    p.add_argument("--band", type=int, default=None, metavar="R",
                   help="Sakoe-Chiba band radius (default: full window)")
    p.add_argument("--normalize", choices=("zscore",), default=None)
    p.add_argument("--all-pairs", dest="all_pairs", action="store_true", default=None,
                   help="align every year pair, not just consecutive ones")
    p.add_argument("--dump-matrices", dest="dump_matrices", action="store_true",
                   default=None, help="also write local/cumulative matrices as CSV")
    p.set_defaults(handler=cmd_dtw)

    p = sub.add_parser("report-all", help="full pipeline: clean, stats, seasonal, dtw")
    _add_common(p, with_input=True, input_required=False)
    _add_data_opts(p)
    p.add_argument("--seed", type=int, default=None,
                   help="fixture seed when --input is omitted")
    p.add_argument("--band", type=int, default=None, metavar="R")
    p.add_argument("--normalize", choices=("zscore",), default=None)
    p.add_argument("--all-pairs", dest="all_pairs", action="store_true", default=None)
    p.set_defaults(handler=cmd_report_all)

    return parser


def _parse_config_value(dest: str, raw: str):
    raw = raw.strip()
    if dest in _BOOL_DESTS:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"config key {dest!r} expects a boolean, got {raw!r}")
    if dest in _INT_DESTS:
        try:
            return int(raw)
        except ValueError:
            raise UsageError(f"config key {dest!r} expects an integer, got {raw!r}") from None
    return raw


def _apply_config(args: argparse.Namespace) -> None:
    if args.config is None:
        return
    path = Path(args.config)
    text = path.read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise UsageError(f"{path}:{line_no}: expected key=value, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        dest = key.strip().replace("-", "_")
        if dest == "format":
            dest = "formats"
        if not hasattr(args, dest) or dest in ("handler", "command", "config"):
            raise UsageError(f"{path}:{line_no}: unknown option {key.strip()!r}")
        if getattr(args, dest) is None:  # flags override config
            setattr(args, dest, _parse_config_value(dest, raw))


def _resolve(args: argparse.Namespace) -> None:
    for dest, value in _DEFAULTS.items():
        if hasattr(args, dest) and getattr(args, dest) is None:
            setattr(args, dest, value)
    for dest in _BOOL_DESTS:
        if hasattr(args, dest) and getattr(args, dest) is None:
            setattr(args, dest, False)
    if hasattr(args, "formats") and getattr(args, "formats") is None:
        args.formats = _FORMAT_DEFAULTS[args.command]
    if getattr(args, "out_dir", None) is None:
        raise UsageError("--out-dir is required")
    if hasattr(args, "band") and args.band is not None and args.band < 0:
        raise UsageError(f"--band must be >= 0, got {args.band}")


def _formats(args: argparse.Namespace) -> set[str]:
    tokens = [t.strip() for t in args.formats.split(",") if t.strip()]
    bad = [t for t in tokens if t not in FORMATS]
    if bad:
        raise UsageError(f"unknown output format(s): {', '.join(bad)}")
    if not tokens:
        raise UsageError("--format needs at least one of json,csv,svg")
    return set(tokens)


def _years_range(args: argparse.Namespace) -> tuple[int, int] | None:
    if getattr(args, "years", None) is None:
        return None
    text = args.years
    parts = text.split("..")
    if len(parts) != 2:
        raise UsageError(f"--years expects A..B, got {text!r}")
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"--years expects integer years, got {text!r}") from None
    if a > b:
        raise UsageError(f"--years range is reversed: {text!r}")
    return a, b


def _variables(args: argparse.Namespace) -> list[Variable]:
    return {
        "arrivals": [Variable.ARRIVALS],
        "price": [Variable.MODAL_PRICE],
        "both": [Variable.ARRIVALS, Variable.MODAL_PRICE],
    }[args.variable]


def _schema(args: argparse.Namespace) -> ColumnSchema:
    return ColumnSchema(
        date=args.date_col,
        arrivals=args.arrivals_col,
        price=args.price_col,
        date_format=args.date_format,
    )


def _read_records(args: argparse.Namespace, data: bytes):
    records = parse_market_csv(data, _schema(args))
    years = _years_range(args)
    if years is not None:
        lo, hi = years
        records = [r for r in records if lo <= r.week.iso_year <= hi]
    return records


def _cleaned(args: argparse.Namespace, records) -> dict[Variable, tuple[WeeklySeries, object]]:
    out = {}
    for var in _variables(args):
        series = build_weekly_series(records, var)
        out[var] = clean_series(series, winsorize=bool(args.winsorize))
    return out


def _write_outputs(args: argparse.Namespace, files: dict[str, str]) -> None:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not args.force:
        clashes = [name for name in sorted(files) if (out_dir / name).exists()]
        if clashes:
            raise FileExistsError(
                f"output already exists in {out_dir}: {', '.join(clashes)} "
                f"(pass --force to overwrite)"
            )
    for name in sorted(files):
        (out_dir / name).write_bytes(files[name].encode("utf-8"))


def cmd_fixture(args: argparse.Namespace) -> int:
    fx = generate_fixture(args.seed)
    _write_outputs(args, {"fixture.csv": fx.csv_text})
    return 0


def cmd_clean(args: argparse.Namespace) -> int:
    data = Path(args.input).read_bytes()
    formats = _formats(args)
    cleaned = _cleaned(args, _read_records(args, data))
    files: dict[str, str] = {}
    for var, (dense, report) in cleaned.items():
        if "csv" in formats:
            files[f"cleaned_{var.value}.csv"] = series_csv(dense)
        if "json" in formats:
            files[f"cleaning_{var.value}.json"] = to_json(report.to_dict())
    _write_outputs(args, files)
    return 0


def _adf_on_log_price(dense_price: WeeklySeries):
    values = dense_price.values()
    if values.min() <= 0:
        raise DataIntegrityError(
            "cleaned price series contains non-positive values; "
            "log differences are undefined"
        )
    return adf_test(log_diff(values))


def cmd_stats(args: argparse.Namespace) -> int:
    data = Path(args.input).read_bytes()
    formats = _formats(args)
    cleaned = _cleaned(args, _read_records(args, data))
    summaries = {
        var.value: describe(dense.values()) for var, (dense, _) in cleaned.items()
    }
    adf = None
    if Variable.MODAL_PRICE in cleaned:
        adf = _adf_on_log_price(cleaned[Variable.MODAL_PRICE][0])
    files: dict[str, str] = {}
    if "json" in formats:
        payload = {
            "summaries": {k: s.to_dict() for k, s in sorted(summaries.items())},
            "adf_log_price_diff": None if adf is None else adf.to_dict(),
        }
        files["stats.json"] = to_json(payload)
    if "csv" in formats:
        files["stats.csv"] = stats_csv(summaries, adf)
    _write_outputs(args, files)
    return 0


def _seasonal_tables(args: argparse.Namespace, cleaned) -> dict:
    method = "moving-average" if getattr(args, "detrend", None) == "moving-average" else "weekly-mean"
    return {var.value: seasonal_index(dense, method) for var, (dense, _) in cleaned.items()}


def _seasonal_svg(tables: dict) -> str:
    curves = []
    for name in sorted(tables):
        t = tables[name]
        weeks = [float(e.iso_week) for e in t.entries]
        idx = [e.index for e in t.entries]
        curves.append((f"{name} index", weeks, idx))
    method = tables[sorted(tables)[0]].method
    return line_chart(
        curves,
        title=f"Weekly seasonal indices (base 100, {method})",
        x_label="ISO week",
        y_label="index",
        metadata={"chart": "seasonal_index", "method": method,
                  "variables": sorted(tables)},
    )


def cmd_seasonal(args: argparse.Namespace) -> int:
    data = Path(args.input).read_bytes()
    formats = _formats(args)
    cleaned = _cleaned(args, _read_records(args, data))
    tables = _seasonal_tables(args, cleaned)
    files: dict[str, str] = {}
    if "json" in formats:
        files["seasonal.json"] = to_json(
            {"tables": {k: t.to_dict() for k, t in sorted(tables.items())}}
        )
    if "csv" in formats:
        for name, t in tables.items():
            files[f"seasonal_{name}.csv"] = seasonal_csv(t)
    if "svg" in formats:
        files["seasonal.svg"] = _seasonal_svg(tables)
    _write_outputs(args, files)
    return 0


def _dtw_options(args: argparse.Namespace) -> DtwOptions:
    normalize = (
        Normalization.ZSCORE
        if getattr(args, "normalize", None) == "zscore"
        else Normalization.NONE
    )
    return DtwOptions(
        band_radius=getattr(args, "band", None),
        local_metric=LocalMetric.ABSOLUTE,
        normalize_input=normalize,
    )


def _year_pairs(args: argparse.Namespace, dense: WeeklySeries) -> list[tuple[int, int]]:
    years = complete_years(dense)
    span = _years_range(args)
    if span is not None:
        lo, hi = span
        requested = list(range(lo, hi + 1))
        skipped = [y for y in requested if y not in years]
        years = [y for y in years if lo <= y <= hi]
        if skipped:
            print(
                f"warning: skipping incomplete year(s) for {dense.variable.value}: "
                f"{', '.join(map(str, skipped))}",
                file=sys.stderr,
            )
    if len(years) < 2:
        raise UsageError(
            f"DTW needs at least two complete years for {dense.variable.value}; "
            f"found {len(years)}"
        )
    if args.all_pairs:
        return [(a, b) for i, a in enumerate(years) for b in years[i + 1 :]]
    return list(zip(years, years[1:]))


def _aligned_matrices(x, y, options: DtwOptions):
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if options.normalize_input is Normalization.ZSCORE:
        xa, ya = zscore(xa), zscore(ya)
    d = local_distance_matrix(xa, ya, options.local_metric)
    return d, cumulative_cost(d, options.band_radius)


def _dtw_variable_outputs(
    args: argparse.Namespace, dense: WeeklySeries, formats: set[str]
) -> tuple[dict[str, str], object]:
    var = dense.variable.value
    options = _dtw_options(args)
    pairs = _year_pairs(args, dense)
    results = []
    files: dict[str, str] = {}
    for y1, y2 in pairs:
        x = slice_year(dense, y1).values
        y = slice_year(dense, y2).values
        result = dtw_align(x, y, options)
        results.append(((y1, y2), result))
        stem = f"dtw_{var}_{y1}-{y2}"
        if "json" in formats:
            files[f"{stem}.json"] = to_json(
                {"variable": var, "year_pair": [y1, y2], "result": result.to_dict()}
            )
        if "svg" in formats or args.dump_matrices:
            d, g = _aligned_matrices(x, y, options)
            if "svg" in formats:
                files[f"{stem}.svg"] = dtw_figure(
                    g,
                    list(result.path.steps),
                    (list(result.warped_pair[0]), list(result.warped_pair[1])),
                    (str(y1), str(y2)),
                    title=f"DTW alignment, {var} {y1} vs {y2}",
                    metadata={
                        "chart": "dtw_alignment",
                        "variable": var,
                        "year_pair": [y1, y2],
                        "options": options.to_dict(),
                        "total_cost": result.total_cost,
                        "mean_cost": result.mean_cost,
                        "path_length": result.path_length,
                    },
                )
            if args.dump_matrices:
                files[f"{stem}_local.csv"] = matrix_csv(d)
                files[f"{stem}_cumulative.csv"] = matrix_csv(g)
    ranking = rank_pairs(results)
    payload = {
        "variable": var,
        "band_radius": options.band_radius,
        "ranking": ranking.to_dict(),
    }
    if options.band_radius is not None:
        unbanded_options = DtwOptions(
            band_radius=None,
            local_metric=options.local_metric,
            normalize_input=options.normalize_input,
        )
        unbanded = rank_pairs(
            [
                (
                    (y1, y2),
                    dtw_align(
                        slice_year(dense, y1).values,
                        slice_year(dense, y2).values,
                        unbanded_options,
                    ),
                )
                for y1, y2 in pairs
            ]
        )
        payload["rank_order_vs_unbanded"] = {
            "changed": ranking.ranks() != unbanded.ranks(),
            "unbanded_ranks": list(unbanded.ranks()),
        }
    if "json" in formats:
        files[f"dtw_ranking_{var}.json"] = to_json(payload)
    if "csv" in formats:
        files[f"dtw_ranking_{var}.csv"] = ranking_csv(ranking)
    if "svg" in formats:
        files[f"dtw_ranking_{var}.svg"] = bar_chart(
            [(f"{p[0]}-{p[1]}", e.total_cost) for (p, _), e in zip(results, ranking.entries)],
            title=f"DTW total cost by year pair, {var}",
            y_label="total cost",
            metadata={"chart": "dtw_ranking", "variable": var,
                      "options": options.to_dict()},
        )
    return files, ranking


def cmd_dtw(args: argparse.Namespace) -> int:
    data = Path(args.input).read_bytes()
    formats = _formats(args)
    cleaned = _cleaned(args, _read_records(args, data))
    files: dict[str, str] = {}
    for var, (dense, _) in cleaned.items():
        var_files, _ = _dtw_variable_outputs(args, dense, formats)
        files.update(var_files)
    _write_outputs(args, files)
    return 0


def _series_svg(dense: WeeklySeries) -> str:
    xs = []
    for p in dense.points:
        xs.append(p.week.iso_year + (p.week.iso_week - 1) / weeks_in_iso_year(p.week.iso_year))
    ys = list(dense.values())
    name = dense.variable.value
    return line_chart(
        [(name, xs, ys)],
        title=f"Weekly {name} (cleaned)",
        x_label="ISO year",
        y_label=name,
        metadata={
            "chart": "weekly_series",
            "variable": name,
            "first_week": str(dense.first_week()),
            "last_week": str(dense.last_week()),
        },
    )


def cmd_report_all(args: argparse.Namespace) -> int:
    files: dict[str, str] = {}
    if args.input is not None:
        data = Path(args.input).read_bytes()
    else:
        fx = generate_fixture(args.seed)
        data = fx.csv_bytes()
        files["fixture.csv"] = fx.csv_text
    formats = _formats(args)
    cleaned = _cleaned(args, _read_records(args, data))

    reports = {}
    summaries = {}
    for var, (dense, report) in cleaned.items():
        reports[var.value] = report
        summaries[var.value] = describe(dense.values())
        if "csv" in formats:
            files[f"cleaned_{var.value}.csv"] = series_csv(dense)
        if "json" in formats:
            files[f"cleaning_{var.value}.json"] = to_json(report.to_dict())
        if "svg" in formats:
            files[f"series_{var.value}.svg"] = _series_svg(dense)

    adf = None
    if Variable.MODAL_PRICE in cleaned:
        adf = _adf_on_log_price(cleaned[Variable.MODAL_PRICE][0])
    if "json" in formats:
        files["stats.json"] = to_json(
            {
                "summaries": {k: s.to_dict() for k, s in sorted(summaries.items())},
                "adf_log_price_diff": None if adf is None else adf.to_dict(),
            }
        )
    if "csv" in formats:
        files["stats.csv"] = stats_csv(summaries, adf)

    tables = _seasonal_tables(args, cleaned)
    if "json" in formats:
        files["seasonal.json"] = to_json(
            {"tables": {k: t.to_dict() for k, t in sorted(tables.items())}}
        )
    if "csv" in formats:
        for name, t in tables.items():
            files[f"seasonal_{name}.csv"] = seasonal_csv(t)
    if "svg" in formats:
        files["seasonal.svg"] = _seasonal_svg(tables)

    args.dump_matrices = bool(getattr(args, "dump_matrices", False))
    rankings = {}
    for var, (dense, _) in cleaned.items():
        var_files, ranking = _dtw_variable_outputs(args, dense, formats)
        files.update(var_files)
        rankings[var.value] = ranking

    bundle = AnalysisBundle(
        cleaning=reports,
        summaries=summaries,
        seasonal=tables,
        dtw=rankings,
        adf_log_price_diff=adf,
    )
    if "json" in formats:
        files["bundle.json"] = to_json(bundle.to_dict())
    _write_outputs(args, files)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_config(args)
        _resolve(args)
        if getattr(args, "input", None) is None and args.command in (
            "clean",
            "stats",
            "seasonal",
            "dtw",
        ):
            raise UsageError("--input is required")
        return args.handler(args)
    except UsageError as exc:
        print(f"seasonwarp: usage error: {exc}", file=sys.stderr)
        return 1
    except MarketDataError as exc:
        print(f"seasonwarp: data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"seasonwarp: i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
