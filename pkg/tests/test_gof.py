import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from celdist.competitors import Family
from celdist.core import CEL
from celdist.errors import DomainError
from celdist.fitting import Sample
from celdist.gof import (
    ALL_FAMILIES,
    ecdf,
    gof_report,
    information_criteria,
    kolmogorov_sf,
    ks_bootstrap_pvalue,
    ks_pvalue,
    ks_statistic,
    model_comparison,
)
from celdist.simulation import SeededStream, sample_cel


def test_ecdf_examples():
    s = Sample([1.0, 2.0, 3.0])
    assert ecdf(s, 0.5) == 0.0
    assert ecdf(s, 2.0) == pytest.approx(2 / 3)
    assert ecdf(s, 3.0) == 1.0 and ecdf(s, 99.0) == 1.0
    np.testing.assert_allclose(ecdf(s, [1.0, 1.5]), [1 / 3, 1 / 3])


def brute_force_ks(values, cdf):
    lo, hi = values.min() / 10.0, values.max() * 10.0
    grid = np.unique(np.concatenate([np.linspace(lo, hi, 100_000), values]))
    fn_right = np.searchsorted(values, grid, side="right") / values.size
    fn_left = np.searchsorted(values, grid, side="left") / values.size
    F = cdf(grid)
    return max(np.max(np.abs(fn_right - F)), np.max(np.abs(fn_left - F)))


@given(st.lists(st.floats(0.01, 20.0), min_size=1, max_size=15), st.floats(0.2, 10.0))
def test_ks_statistic_matches_brute_force(xs, t):
    s = Sample(xs)
    d = CEL(t)
    assert ks_statistic(s, d.cdf) == pytest.approx(brute_force_ks(s.values, d.cdf), abs=1e-6)


@given(st.lists(st.floats(0.01, 50.0), min_size=1, max_size=30, unique=True), st.floats(0.2, 10.0))
def test_ks_statistic_matches_scipy(xs, t):
    d = CEL(t)
    assert ks_statistic(xs, d.cdf) == pytest.approx(stats.kstest(xs, d.cdf).statistic, abs=1e-14)


@pytest.mark.parametrize("n", [1, 5, 40])
def test_ks_statistic_at_quantile_points(n):
    d = CEL(2.0)
    x = d.quantile((np.arange(1, n + 1) - 0.5) / n)
    assert ks_statistic(x, d.cdf) == pytest.approx(0.5 / n, abs=1e-12)


def test_ks_statistic_table_2(fluid):
    assert ks_statistic(fluid, CEL(7.0385).cdf) == pytest.approx(0.1131, abs=0.001)


def test_kolmogorov_sf_against_scipy():
    for t in np.linspace(0.05, 3.0, 60):
        assert kolmogorov_sf(t) == pytest.approx(stats.kstwobign.sf(t), abs=1e-12)
    assert kolmogorov_sf(0.0) == 1.0


def test_ks_pvalue_examples():
    assert ks_pvalue(0.0, 10) == 1.0
    assert ks_pvalue(0.1131, 19) == pytest.approx(0.9458, abs=0.01)
    # the asymptotic formula alone gives a visibly different value at n = 19
    assert ks_pvalue(0.1131, 19, method="asymptotic") == pytest.approx(0.968, abs=0.002)
    assert ks_pvalue(0.1061, 30, method="asymptotic") == pytest.approx(0.8882, abs=0.001)


def test_ks_pvalue_method_selection():
    assert ks_pvalue(0.2, 50) == ks_pvalue(0.2, 50, method="exact")
    assert ks_pvalue(0.2, 50, ties=True) == ks_pvalue(0.2, 50, method="asymptotic")
    assert ks_pvalue(0.05, 500) == ks_pvalue(0.05, 500, method="asymptotic")
    with pytest.raises(DomainError):
        ks_pvalue(0.1, 10, method="bogus")
    with pytest.raises(DomainError):
        ks_pvalue(1.5, 10)
    with pytest.raises(DomainError):
        ks_pvalue(0.1, 0)


@pytest.mark.parametrize("method", ["exact", "asymptotic"])
@pytest.mark.parametrize("n", [5, 30, 200])
def test_ks_pvalue_decreasing_in_d(method, n):
    d = np.linspace(0.01, 0.6, 120)
    p = np.array([ks_pvalue(v, n, method) for v in d])
    assert np.all((p >= 0) & (p <= 1))
    # strict decrease wherever p is off its clamps at 0 and 1
    inner = (p > 1e-15) & (p < 1.0)
    assert inner.sum() > 50
    assert np.all(np.diff(p[inner]) < 0.0)


def test_information_criteria_and_guard():
    aic, bic, aicc = information_criteria(100.0, 2, 30)
    assert aic == 104.0 and bic == pytest.approx(100 + 2 * math.log(30)) and aicc == pytest.approx(104 + 12 / 27)
    assert information_criteria(10.0, 2, 3)[2] == math.inf


def test_model_comparison_table_2(fluid):
    rows = model_comparison(fluid)
    assert [r.family for r in rows][0] is Family.CEL
    assert len(rows) == 6 and not any(r.failed for r in rows)
    cel = rows[0]
    assert (cel.aic, cel.bic, cel.aicc) == pytest.approx((139.98, 140.92, 140.21), abs=0.01)
    assert cel.ks_stat == min(r.ks_stat for r in rows)
    for r in rows:
        assert r.aic == r.neg2ll + 2 * r.k
        assert r.bic == r.neg2ll + r.k * math.log(r.n)
        assert r.aicc == pytest.approx(r.aic + (2 * r.k**2 + 2 * r.k) / (r.n - r.k - 1), rel=1e-15)
        assert 0.0 <= r.ks_stat <= 1.0 and 0.0 <= r.ks_pvalue <= 1.0
    keys = [(r.aic, r.ks_stat) for r in rows]
    assert keys == sorted(keys)


def test_model_comparison_table_3_el_row(aircon):
    rows = {r.family: r for r in model_comparison(aircon)}
    el = rows[Family.EL]
    assert (el.aic, el.bic, el.aicc) == pytest.approx((306.83, 309.63, 307.28), abs=0.01)
    assert el.pvalue_method == "asymptotic"  # the data contain ties


def test_model_comparison_subset_and_failures():
    s = Sample([1.0, 2.0, 3.0])
    fits = {}
    rows = model_comparison(s, ["cel", "gamma"], fits=fits)
    assert [r.family for r in rows if not r.failed] and len(rows) == 2
    assert set(fits) <= {Family.CEL, Family.GAMMA}
    # a single observation makes the two-parameter likelihoods unbounded
    rows = model_comparison(Sample([2.0]), ALL_FAMILIES)
    assert len(rows) == 6
    failed = [r for r in rows if r.failed]
    assert all(math.isnan(r.aic) and r.error for r in failed)
    assert rows[: len(rows) - len(failed)] == [r for r in rows if not r.failed]


def test_gof_report_dict(fluid):
    from celdist.fitting import fit_cel

    d = gof_report(fit_cel(fluid), fluid).to_dict()
    assert d["family"] == "CEL" and isinstance(d["estimates"], list)


def test_true_theta_sample_has_large_pvalue():
    x = sample_cel(CEL(2.0), 200, SeededStream(99))
    d = ks_statistic(x, CEL(2.0).cdf)
    assert ks_pvalue(d, 200) > 0.01


def test_bootstrap_pvalue_deterministic_and_valid(fluid):
    p1 = ks_bootstrap_pvalue(fluid, replications=60, seed=5)
    p2 = ks_bootstrap_pvalue(fluid, replications=60, seed=5)
    assert p1 == p2 and 0.0 < p1 <= 1.0
    rows = model_comparison(fluid, ["cel"], bootstrap=60, seed=5)
    assert rows[0].bootstrap_pvalue == p1
