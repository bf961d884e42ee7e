"""Descriptive statistics for weekly series: quantiles, moments, normality."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, InsufficientDataError

QUANTILE_LEVELS = (0.25, 0.50, 0.75)


def quantile(values: np.ndarray | list[float], q: float) -> float:
    """Quantile by linear interpolation between order statistics.

    With sorted values v[0..n-1], the level-q quantile sits at fractional
    rank h = (n-1)*q and equals v[floor(h)] + (h - floor(h)) *
    (v[floor(h)+1] - v[floor(h)]).  Computed literally in that form so exact
    equality against a rank-interpolation reference holds.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"quantile level must be in [0, 1], got {q}")
    v = np.sort(np.asarray(values, dtype=float))
    n = v.size
    if n == 0:
        raise InsufficientDataError("quantile of an empty sample")
    if n == 1:
        return float(v[0])
    h = (n - 1) * q
    lo = math.floor(h)
    frac = h - lo
    if lo + 1 >= n:
        return float(v[n - 1])
    return float(v[lo] + frac * (v[lo + 1] - v[lo]))


def central_moments(values: np.ndarray | list[float]) -> tuple[float, float, float, float]:
    """(mean, m2, m3, m4) with 1/n denominators for the central moments."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise InsufficientDataError("moments of an empty sample")
    mean = float(np.mean(v))
    d = v - mean
    m2 = float(np.mean(d**2))
    m3 = float(np.mean(d**3))
    m4 = float(np.mean(d**4))
    return mean, m2, m3, m4


def moments(values: np.ndarray | list[float]) -> tuple[float, float, float, float]:
    """(mean, sample std, skewness, excess kurtosis) in one pass.

    Needs n >= 2 for the std, n >= 3 for skewness, n >= 4 for kurtosis, so
    the full tuple requires n >= 4.  Constant input has a well-defined std
    of 0 but no higher moments.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 4:
        needed = {0: "mean", 1: "std", 2: "skewness", 3: "kurtosis"}[min(v.size, 3)]
        raise InsufficientDataError(
            f"moments needs >= 4 observations (first unavailable: {needed}), got {v.size}"
        )
    mean, m2, m3, m4 = central_moments(v)
    if m2 == 0.0:
        raise DegenerateDataError(
            "skewness and kurtosis undefined for a constant sample"
        )
    std = float(np.std(v, ddof=1))
    return mean, std, m3 / m2**1.5, m4 / m2**2 - 3.0


def skewness(values: np.ndarray | list[float]) -> float:
    """Moment skewness m3 / m2^(3/2).  Degenerate (constant) input is an error."""
    _, m2, m3, _ = central_moments(values)
    if m2 == 0.0:
        raise DegenerateDataError("skewness undefined for a constant sample")
    return m3 / m2**1.5


def excess_kurtosis(values: np.ndarray | list[float]) -> float:
    """m4 / m2^2 - 3, so a normal sample centers on 0."""
    _, m2, _, m4 = central_moments(values)
    if m2 == 0.0:
        raise DegenerateDataError("kurtosis undefined for a constant sample")
    return m4 / m2**2 - 3.0


def jarque_bera(values: np.ndarray | list[float]) -> tuple[float, float]:
    """(JB statistic, asymptotic p-value).

    JB = n/6 * (S^2 + K^2/4) with moment skewness S and excess kurtosis K;
    the p-value is the chi-squared(2) survival function exp(-JB/2).
    """
    v = np.asarray(values, dtype=float)
    if v.size < 8:
        raise InsufficientDataError(
            f"Jarque-Bera needs >= 8 observations, got {v.size}"
        )
    s = skewness(v)
    k = excess_kurtosis(v)
    jb = v.size / 6.0 * (s**2 + k**2 / 4.0)
    return jb, math.exp(-jb / 2.0)


@dataclass(frozen=True)
class DescriptiveSummary:
    """Headline statistics for one variable's values."""

    count: int
    mean: float
    std: float
    cv_percent: float
    skewness: float
    excess_kurtosis: float
    minimum: float
    p25: float
    median: float
    p75: float
    maximum: float
    jarque_bera: float
    jarque_bera_p: float

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "mean": self.mean,
            "std": self.std,
            "cv_percent": self.cv_percent,
            "skewness": self.skewness,
            "excess_kurtosis": self.excess_kurtosis,
            "minimum": self.minimum,
            "p25": self.p25,
            "median": self.median,
            "p75": self.p75,
            "maximum": self.maximum,
            "jarque_bera": self.jarque_bera,
            "jarque_bera_p": self.jarque_bera_p,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DescriptiveSummary":
        return cls(**d)

    def jarque_bera_p_display(self) -> str:
        """P-value for reports, floored at the smallest honest magnitude."""
        if self.jarque_bera_p < 1e-16:
            return "<1e-16"
        return format(self.jarque_bera_p, ".6g")


def describe(data) -> DescriptiveSummary:
    """Full summary of a series or raw values.

    Accepts anything ``np.asarray`` can take, plus objects with a ``values()``
    method (weekly series).  Sample std uses the n-1 denominator; CV is in
    percent of the mean.
    """
    values = data.values() if hasattr(data, "values") and callable(data.values) else data
    v = np.asarray(values, dtype=float)
    if v.size < 8:
        raise InsufficientDataError(f"describe needs >= 8 observations, got {v.size}")
    mean, m2, _, _ = central_moments(v)
    if m2 == 0.0:
        raise DegenerateDataError("describe undefined for a constant sample")
    if mean == 0.0:
        raise DegenerateDataError("coefficient of variation undefined for zero mean")
    std = float(np.std(v, ddof=1))
    jb, jb_p = jarque_bera(v)
    return DescriptiveSummary(
        count=int(v.size),
        mean=mean,
        std=std,
        cv_percent=100.0 * std / mean,
        skewness=skewness(v),
        excess_kurtosis=excess_kurtosis(v),
        minimum=float(np.min(v)),
        p25=quantile(v, 0.25),
        median=quantile(v, 0.50),
        p75=quantile(v, 0.75),
        maximum=float(np.max(v)),
        jarque_bera=jb,
        jarque_bera_p=jb_p,
    )
