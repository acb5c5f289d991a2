import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from celdist.competitors import COMPETITORS, CompetitorParams, Family, comp_cdf, comp_log_likelihood, comp_logpdf, comp_pdf
from celdist.errors import DomainError
from celdist.numerics import integrate, integrate_semi_infinite

GRIDS = {
    Family.EPL: [(0.5, 0.3), (1.0, 1.0), (0.0334, 0.5521)],
    Family.EP: [(1.0, 0.1), (0.5, 2.0), (0.0409, 2.2112)],
    Family.EL: [(1.0, 0.05), (2.0, 0.5), (0.0393, 0.0982)],
    Family.WEIBULL: [(1.0, 0.5), (0.5, 1.5), (0.0818, 0.7708)],
    Family.GAMMA: [(1.0, 0.5), (2.0, 3.0), (0.0480, 0.6897)],
}
CASES = [(f, p) for f, ps in GRIDS.items() for p in ps]


@pytest.mark.parametrize("fam, p", CASES)
def test_normalization(fam, p):
    c = CompetitorParams(fam, *p)
    r = integrate_semi_infinite(lambda x: comp_pdf(c, x), scale=1.0 / p[0], abs_tol=0.0, rel_tol=1e-12)
    assert r.value == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("fam, p", CASES)
def test_cdf_matches_quadrature_of_pdf(fam, p):
    c = CompetitorParams(fam, *p)
    for x in np.array([0.05, 0.3, 1.0, 3.0, 10.0]) / p[0]:
        q = integrate(lambda t: comp_pdf(c, t), 0.0, x, abs_tol=1e-13, rel_tol=1e-13).value
        assert abs(comp_cdf(c, x) - q) <= 1e-8


@pytest.mark.parametrize("fam, p", CASES)
def test_cdf_limits_and_monotone(fam, p):
    c = CompetitorParams(fam, *p)
    assert comp_cdf(c, 0.0) == 0.0
    x = np.logspace(-4, 4, 500) / p[0]
    F = comp_cdf(c, x)
    assert np.all(np.diff(F) >= 0.0) and np.all((F >= 0.0) & (F <= 1.0))
    assert comp_cdf(c, 1e4 / p[0]) == pytest.approx(1.0, abs=1e-8)


@given(st.floats(0.01, 10.0), st.floats(0.1, 5.0), st.floats(1e-3, 50.0))
def test_weibull_and_gamma_vs_scipy(b, a, x):
    w = CompetitorParams(Family.WEIBULL, b, a)
    g = CompetitorParams(Family.GAMMA, b, a)
    assert comp_logpdf(w, x) == pytest.approx(stats.weibull_min.logpdf(x, a, scale=1 / b), rel=1e-10, abs=1e-10)
    assert comp_cdf(w, x) == pytest.approx(stats.weibull_min.cdf(x, a, scale=1 / b), rel=1e-10, abs=1e-14)
    assert comp_logpdf(g, x) == pytest.approx(stats.gamma.logpdf(x, a, scale=1 / b), rel=1e-10, abs=1e-10)
    assert comp_cdf(g, x) == pytest.approx(stats.gamma.cdf(x, a, scale=1 / b), rel=1e-10, abs=1e-14)


def test_weibull_table_point():
    c = CompetitorParams(Family.WEIBULL, 0.0818, 0.7708)
    assert comp_cdf(c, 10.0) == pytest.approx(1 - math.exp(-(0.818**0.7708)), rel=1e-14)
    q = integrate(lambda t: comp_pdf(c, t), 0.0, 10.0, abs_tol=1e-13).value
    assert comp_cdf(c, 10.0) == pytest.approx(q, abs=1e-10)


def test_ep_reduces_to_exponential():
    c = CompetitorParams(Family.EP, 1.0, 1e-8)
    x = np.linspace(0.01, 20, 300)
    assert np.max(np.abs(comp_pdf(c, x) - np.exp(-x))) <= 1e-6


def test_el_reduces_to_exponential():
    c = CompetitorParams(Family.EL, 1.0, 1.0 - 1e-8)
    x = np.linspace(0.01, 20, 300)
    assert np.max(np.abs(comp_pdf(c, x) - np.exp(-x))) <= 1e-5


def test_el_density_at_origin():
    c = CompetitorParams(Family.EL, 1.0, 0.5)
    assert comp_pdf(c, 1e-12) == pytest.approx(1.0 / math.log(2.0), rel=1e-9)


def test_gamma_exponential_special_case():
    assert comp_logpdf(CompetitorParams(Family.GAMMA, 1.0, 1.0), 1.0) == pytest.approx(-1.0, abs=1e-15)


def test_log_likelihood_at_table_estimates(fluid, aircon):
    el = CompetitorParams(Family.EL, 0.0393, 0.0982)
    ep = CompetitorParams(Family.EP, 0.0105, 1.8243)
    assert -2 * comp_log_likelihood(el, fluid.values) == pytest.approx(135.98, abs=0.1)
    assert -2 * comp_log_likelihood(ep, aircon.values) == pytest.approx(303.22, abs=0.1)


def test_log_likelihood_underflow_is_minus_inf():
    c = CompetitorParams(Family.EP, 1000.0, 1.0)
    assert comp_log_likelihood(c, np.array([1e6])) == -math.inf or comp_log_likelihood(c, np.array([1e6])) < -1e8


@pytest.mark.parametrize(
    "fam, p1, p2",
    [("EPL", 0.0, 1.0), ("EP", 1.0, -1.0), ("EL", 1.0, 1.0), ("EL", 1.0, 1.5), ("GAMMA", math.nan, 1.0), ("CEL", 1.0, 1.0)],
)
def test_parameter_validation(fam, p1, p2):
    with pytest.raises(DomainError):
        CompetitorParams(fam, p1, p2)


def test_family_parsing():
    assert Family.parse("weibull") is Family.WEIBULL
    assert Family.parse(" el ") is Family.EL
    assert Family.WEIBULL.param_names == ("beta", "alpha")
    assert len(COMPETITORS) == 5
    with pytest.raises(DomainError):
        Family.parse("lognormal")


@pytest.mark.parametrize("fam", list(GRIDS))
def test_argument_domains(fam):
    c = CompetitorParams(fam, *GRIDS[fam][0])
    with pytest.raises(DomainError):
        comp_pdf(c, 0.0)
    with pytest.raises(DomainError):
        comp_cdf(c, -1.0)


@given(st.floats(0.01, 10.0), st.floats(1e-6, 0.999), st.one_of(st.just(0.0), st.floats(1e-8, 100.0)))
def test_el_cdf_matches_high_precision(b, p, x):
    c = CompetitorParams(Family.EL, b, p)
    with mpmath.workdps(60):
        ref = 1 - mpmath.log(1 - (1 - mpmath.mpf(p)) * mpmath.exp(-mpmath.mpf(b) * x)) / mpmath.log(p)
    assert comp_cdf(c, x) == pytest.approx(float(ref), rel=1e-12, abs=1e-300)
