"""Deterministic synthetic market dataset for end-to-end runs and tests.

Fifteen ISO years of weekly arrivals and modal prices with the texture of a
perishable-commodity market: bimodal arrival seasonality (a small peak near
weeks 5-15, the main one near weeks 40-48), inverse price seasonality,
multiplicative lognormal shocks heavy enough to fail normality tests, a few
extreme spike weeks that trip the 3xIQR fences, and six dropped weeks that
the cleaning stage must re-fill.  Identical seed, identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import WeekKey, week_range, weeks_in_iso_year

FIRST_YEAR = 2010
N_YEARS = 15
GAP_COUNT = 6

# Seasonal shape: amplitudes/centers/widths of the two arrival bumps over a
# constant floor.  Prices follow the reciprocal shape (scarcity pricing).
_A_FLOOR = 0.55
_A_BIG = (2.2, 44.0, 3.5)
_A_SMALL = (1.2, 10.0, 4.5)

_A_BASE = 6800.0
_P_BASE = 1100.0
_A_LEVEL_SIGMA = 0.10
_P_LEVEL_SIGMA = 0.08
_P_DRIFT = 1.03
_A_SHOCK_SIGMA = 0.60
_P_SHOCK_SIGMA = 0.47
_A_SPIKES = 4
_P_SPIKES = 4
_A_SPIKE_RANGE = (4.0, 5.5)
_P_SPIKE_RANGE = (3.8, 4.6)
_GAP_SPIKE_GAP = 3  # min index distance between a dropped week and a spike


@dataclass(frozen=True)
class Fixture:
    """Generated dataset plus the ground truth tests need."""

    seed: int
    csv_text: str
    gap_weeks: tuple[WeekKey, ...]
    arrival_spike_weeks: tuple[WeekKey, ...]
    price_spike_weeks: tuple[WeekKey, ...]

    def csv_bytes(self) -> bytes:
        return self.csv_text.encode("utf-8")


def _bump(w: float, center: float, width: float) -> float:
    return math.exp(-(((w - center) / width) ** 2))


def _shapes() -> tuple[dict[int, float], dict[int, float]]:
    a_raw = {}
    for w in range(1, 54):
        amp, c, wd = _A_BIG
        amp2, c2, wd2 = _A_SMALL
        a_raw[w] = _A_FLOOR + amp * _bump(w, c, wd) + amp2 * _bump(w, c2, wd2)
    a_mean = sum(a_raw[w] for w in range(1, 53)) / 52.0
    a_shape = {w: v / a_mean for w, v in a_raw.items()}
    p_raw = {w: 1.0 / a_shape[w] for w in range(1, 54)}
    p_mean = sum(p_raw[w] for w in range(1, 53)) / 52.0
    p_shape = {w: v / p_mean for w, v in p_raw.items()}
    return a_shape, p_shape


def generate_fixture(seed: int = 42) -> Fixture:
    """Build the synthetic dataset.  Pure function of the seed."""
    rng = np.random.default_rng(seed)
    years = list(range(FIRST_YEAR, FIRST_YEAR + N_YEARS))
    weeks = list(
        week_range(WeekKey(years[0], 1), WeekKey(years[-1], weeks_in_iso_year(years[-1])))
    )
    t_count = len(weeks)
    a_shape, p_shape = _shapes()

    za_level = rng.standard_normal(len(years))
    zp_level = rng.standard_normal(len(years))
    a_level = {
        y: math.exp(_A_LEVEL_SIGMA * za_level[i]) for i, y in enumerate(years)
    }
    p_level = {
        y: (_P_DRIFT**i) * math.exp(_P_LEVEL_SIGMA * zp_level[i])
        for i, y in enumerate(years)
    }

    za = rng.standard_normal(t_count)
    zp = rng.standard_normal(t_count)
    arrivals = np.empty(t_count)
    prices = np.empty(t_count)
    sa, sp = _A_SHOCK_SIGMA, _P_SHOCK_SIGMA
    for t, wk in enumerate(weeks):
        arrivals[t] = (
            _A_BASE
            * a_level[wk.iso_year]
            * a_shape[wk.iso_week]
            * math.exp(sa * za[t] - sa * sa / 2.0)
        )
        prices[t] = (
            _P_BASE
            * p_level[wk.iso_year]
            * p_shape[wk.iso_week]
            * math.exp(sp * zp[t] - sp * sp / 2.0)
        )

    interior = np.arange(1, t_count - 1)
    spike_idx = rng.choice(interior, size=_A_SPIKES + _P_SPIKES, replace=False)
    a_spike_idx = np.sort(spike_idx[:_A_SPIKES])
    p_spike_idx = np.sort(spike_idx[_A_SPIKES:])
    arrivals[a_spike_idx] *= rng.uniform(*_A_SPIKE_RANGE, size=_A_SPIKES)
    prices[p_spike_idx] *= rng.uniform(*_P_SPIKE_RANGE, size=_P_SPIKES)

    # gaps stay clear of the spikes so interpolation never has to bridge an
    # artificial extreme (spline overshoot there can clamp prices to zero)
    forbidden = set(int(i) for i in spike_idx)
    candidates = np.array(
        [
            t
            for t in interior
            if all(abs(t - s) >= _GAP_SPIKE_GAP for s in forbidden)
        ]
    )
    gap_idx = np.sort(rng.choice(candidates, size=GAP_COUNT, replace=False))
    gaps = set(int(i) for i in gap_idx)

    arrivals = np.maximum(np.rint(arrivals), 1.0)
    prices = np.maximum(np.rint(prices), 50.0)

    lines = ["date,arrivals,modal_price"]
    for t, wk in enumerate(weeks):
        if t in gaps:
            continue
        lines.append(
            f"{wk.end_date().isoformat()},{int(arrivals[t])},{int(prices[t])}"
        )
    return Fixture(
        seed=seed,
        csv_text="\n".join(lines) + "\n",
        gap_weeks=tuple(weeks[i] for i in sorted(gaps)),
        arrival_spike_weeks=tuple(weeks[int(i)] for i in a_spike_idx),
        price_spike_weeks=tuple(weeks[int(i)] for i in p_spike_idx),
    )
