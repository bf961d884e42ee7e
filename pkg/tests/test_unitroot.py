import numpy as np
import pytest

from seasonwarp.errors import DegenerateDataError, InsufficientDataError
from seasonwarp.series import Variable, log_diff
from seasonwarp.unitroot import AdfResult, adf_test, mackinnon_pvalue


class TestMackinnonPvalue:
    def test_canonical_critical_values(self):
        # The textbook 1%/5%/10% critical values are rounded to 2 decimals,
        # so the recovered p-values are good to about a part in a thousand.
        assert mackinnon_pvalue(-3.43, "c") == pytest.approx(0.01, abs=1e-3)
        assert mackinnon_pvalue(-2.86, "c") == pytest.approx(0.05, abs=1e-3)
        assert mackinnon_pvalue(-2.57, "c") == pytest.approx(0.10, abs=1e-3)

    def test_trend_case_critical_values(self):
        assert mackinnon_pvalue(-3.96, "ct") == pytest.approx(0.01, abs=1e-3)
        assert mackinnon_pvalue(-3.41, "ct") == pytest.approx(0.05, abs=1e-3)

    def test_no_constant_case_critical_values(self):
        assert mackinnon_pvalue(-2.56, "n") == pytest.approx(0.01, abs=1e-3)
        assert mackinnon_pvalue(-1.94, "n") == pytest.approx(0.05, abs=1e-3)

    def test_monotone_decreasing_in_statistic(self):
        for reg in ("n", "c", "ct"):
            grid = np.linspace(-6.0, 1.0, 80)
            ps = [mackinnon_pvalue(float(t), reg) for t in grid]
            assert all(a <= b + 1e-12 for a, b in zip(ps, ps[1:])), reg

    def test_saturation_tails(self):
        assert mackinnon_pvalue(-25.0, "c") == 0.0
        assert mackinnon_pvalue(5.0, "c") == 1.0
        assert 0.0 <= mackinnon_pvalue(-1.0, "n") <= 1.0

    def test_bad_regression(self):
        with pytest.raises(ValueError):
            mackinnon_pvalue(-3.0, "ctt")


def _ar1(n, phi, seed, scale=1.0):
    rng = np.random.default_rng(seed)
    e = rng.normal(size=n, scale=scale)
    y = np.empty(n)
    y[0] = e[0]
    for t in range(1, n):
        y[t] = phi * y[t - 1] + e[t]
    return y


class TestAdfTest:
    def test_stationary_series_rejects(self):
        y = _ar1(400, 0.3, seed=0)
        res = adf_test(y, regression="c")
        assert res.statistic < -5.0
        assert res.pvalue < 0.001
        assert res.reject_at_1pct
        assert res.reject_at_5pct

    def test_random_walk_not_rejected(self):
        rng = np.random.default_rng(1)
        y = np.cumsum(rng.normal(size=400))
        res = adf_test(y, regression="c")
        assert res.pvalue > 0.01

    def test_constant_shift_invariance_with_constant_term(self):
        # Large offsets worsen the conditioning of the normal equations, so
        # the match is to solver precision rather than exact.
        y = _ar1(300, 0.5, seed=2)
        a = adf_test(y, regression="c")
        b = adf_test(y + 1e4, regression="c")
        assert b.statistic == pytest.approx(a.statistic, rel=1e-6)
        assert b.used_lag == a.used_lag

    def test_linear_trend_invariance_with_trend_term(self):
        y = _ar1(300, 0.5, seed=3)
        t = np.arange(300, dtype=float)
        a = adf_test(y, regression="ct")
        b = adf_test(y + 0.5 * t + 100.0, regression="ct")
        assert b.statistic == pytest.approx(a.statistic, abs=1e-7)

    def test_scale_invariance(self):
        y = _ar1(250, 0.4, seed=4)
        a = adf_test(y, regression="c")
        b = adf_test(1000.0 * y, regression="c")
        assert b.statistic == pytest.approx(a.statistic, abs=1e-8)

    def test_used_lag_within_bounds_and_nobs_consistent(self):
        y = _ar1(200, 0.5, seed=5)
        maxlag = int(12 * (200 / 100) ** 0.25)
        res = adf_test(y, regression="c")
        assert 0 <= res.used_lag <= maxlag
        # Effective sample: n-1 differences minus used_lag trimmed rows.
        assert res.nobs == 200 - 1 - res.used_lag

    def test_explicit_maxlag_zero(self):
        y = _ar1(150, 0.5, seed=6)
        res = adf_test(y, regression="c", maxlag=0)
        assert res.used_lag == 0
        assert res.nobs == 149

    def test_regression_validation(self):
        with pytest.raises(ValueError):
            adf_test(_ar1(100, 0.5, seed=7), regression="bogus")

    def test_insufficient_data(self):
        with pytest.raises(InsufficientDataError):
            adf_test(np.arange(15, dtype=float), regression="c")

    def test_constant_series_degenerate(self):
        with pytest.raises(DegenerateDataError):
            adf_test(np.full(50, 3.0))

    def test_result_roundtrip(self):
        res = adf_test(_ar1(120, 0.5, seed=8), regression="ct")
        again = AdfResult.from_dict(res.to_dict())
        assert again == res

    def test_fixture_log_price_diff_rejects(self, cleaned42):
        series, _ = cleaned42[Variable.MODAL_PRICE]
        returns = log_diff(series.values())
        res = adf_test(returns, regression="c")
        assert res.statistic == pytest.approx(-11.8099, abs=5e-4)
        assert res.pvalue < 1e-10
        assert res.reject_at_1pct


class TestSizeAndPower:
    # Small Monte Carlo sanity check; the calibrated version with tighter
    # sample counts lives in the acceptance suite.
    def test_power_on_stationary_ar1(self):
        rejections = sum(
            adf_test(_ar1(300, 0.5, seed=100 + i), regression="c").pvalue < 0.01
            for i in range(40)
        )
        assert rejections >= 36

    def test_size_on_random_walks(self):
        false_alarms = 0
        for i in range(40):
            rng = np.random.default_rng(200 + i)
            y = np.cumsum(rng.normal(size=300))
            if adf_test(y, regression="c").pvalue < 0.05:
                false_alarms += 1
        assert false_alarms <= 6
