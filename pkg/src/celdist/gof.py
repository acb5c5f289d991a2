"""Goodness of fit: information criteria, Kolmogorov-Smirnov tests and the
ranked model-comparison table."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats

from .competitors import CompetitorParams, Family, comp_cdf
from .core import CEL
from .errors import BracketError, ConvergenceError, DomainError
from .fitting import FitResult, Sample, as_sample, fit, fit_cel

__all__ = [
    "GofReport",
    "ecdf",
    "ks_statistic",
    "ks_pvalue",
    "kolmogorov_sf",
    "information_criteria",
    "fitted_cdf",
    "ks_bootstrap_pvalue",
    "gof_report",
    "model_comparison",
    "ALL_FAMILIES",
]

log = logging.getLogger(__name__)

ALL_FAMILIES = (Family.CEL, Family.EPL, Family.EL, Family.EP, Family.WEIBULL, Family.GAMMA)

# the exact finite-n distribution is used below this size when there are no ties
EXACT_MAX_N = 100


@dataclass(frozen=True)
class GofReport:
    family: Family
    k: int
    n: int
    estimates: tuple
    neg2ll: float
    aic: float
    bic: float
    aicc: float
    ks_stat: float
    ks_pvalue: float
    pvalue_method: str
    bootstrap_pvalue: float | None = None
    failed: bool = False
    error: str | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["family"] = self.family.value
        d["estimates"] = list(self.estimates)
        return d


def ecdf(s, x):
    """Right-continuous empirical cdf: share of observations ``<= x``."""
    v = as_sample(s).values
    out = np.searchsorted(v, np.asarray(x, dtype=float), side="right") / v.size
    return float(out) if np.ndim(out) == 0 else out


def ks_statistic(s, cdf) -> float:
    """Exact sup-distance between the sample's ecdf and a continuous cdf."""
    v = as_sample(s).values
    n = v.size
    f = np.asarray(cdf(v), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n), 0.0))


def kolmogorov_sf(t: float) -> float:
    """Limiting Kolmogorov tail probability P(sqrt(n) D > t).

    Uses the alternating series for ``t >= 1`` and the equivalent
    theta-function form for small ``t``, where the alternating series
    converges slowly.
    """
    if t <= 0.0:
        return 1.0
    if t < 1.0:
        c = math.pi**2 / (8.0 * t * t)
        total, j = 0.0, 1
        while True:
            term = math.exp(-((2 * j - 1) ** 2) * c)
            total += term
            if term < 1e-16 * total or term == 0.0:
                break
            j += 1
        return min(1.0, max(0.0, 1.0 - math.sqrt(2.0 * math.pi) / t * total))
    total, j = 0.0, 1
    while True:
        term = math.exp(-2.0 * j * j * t * t)
        total += term if j % 2 else -term
        if term < 1e-12:
            break
        j += 1
    return min(1.0, max(0.0, 2.0 * total))


def ks_pvalue(d: float, n: int, method: str = "auto", ties: bool = False) -> float:
    """p-value of a one-sample KS statistic ``d`` from ``n`` observations.

    ``method``: ``"exact"`` (finite-n Kolmogorov distribution),
    ``"asymptotic"`` (limiting distribution of sqrt(n) D), or ``"auto"``:
    exact when ``n < 100`` and the data carry no ties, asymptotic otherwise.
    """
    d = float(d)
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    if not 0.0 <= d <= 1.0:
        raise DomainError(f"KS statistic must lie in [0, 1], got {d}")
    method = _resolve_method(method, n, ties)
    if method == "exact":
        return float(min(1.0, max(0.0, stats.kstwo.sf(d, n))))
    return kolmogorov_sf(math.sqrt(n) * d)


def _resolve_method(method, n, ties):
    if method == "auto":
        return "exact" if n < EXACT_MAX_N and not ties else "asymptotic"
    if method not in ("exact", "asymptotic"):
        raise DomainError(f"unknown KS p-value method {method!r}")
    return method


def information_criteria(neg2ll: float, k: int, n: int) -> tuple[float, float, float]:
    """(AIC, BIC, AICc); AICc is +inf when ``n - k - 1 <= 0``."""
    aic = neg2ll + 2 * k
    bic = neg2ll + k * math.log(n)
    denom = n - k - 1
    aicc = aic + (2 * k * k + 2 * k) / denom if denom > 0 else math.inf
    return aic, bic, aicc


def fitted_cdf(result: FitResult):
    if result.family is Family.CEL:
        return CEL(result.estimates[0]).cdf
    c = CompetitorParams(result.family, *result.estimates)
    return lambda x: comp_cdf(c, x)


def ks_bootstrap_pvalue(s, replications: int = 1000, seed: int = 0) -> float:
    """Parametric-bootstrap KS p-value for a CEL fit.

    Each replicate draws from the fitted CEL, refits theta and recomputes
    the statistic, so the null distribution accounts for estimation.
    """
    from .simulation import SeededStream, sample_cel

    sample = as_sample(s)
    res = fit_cel(sample)
    d_obs = ks_statistic(sample, CEL(res.estimates[0]).cdf)
    dist = CEL(res.estimates[0])
    exceed = 0
    for b in range(replications):
        xb = sample_cel(dist, sample.n, SeededStream(seed, b))
        rb = fit_cel(xb)
        if ks_statistic(xb, CEL(rb.estimates[0]).cdf) >= d_obs:
            exceed += 1
    return (exceed + 1) / (replications + 1)


def gof_report(result: FitResult, s, pvalue_method: str = "auto") -> GofReport:
    sample = as_sample(s)
    aic, bic, aicc = information_criteria(result.neg2ll, result.k, sample.n)
    d = ks_statistic(sample, fitted_cdf(result))
    method = _resolve_method(pvalue_method, sample.n, sample.has_ties)
    return GofReport(
        family=result.family,
        k=result.k,
        n=sample.n,
        estimates=tuple(result.estimates),
        neg2ll=result.neg2ll,
        aic=aic,
        bic=bic,
        aicc=aicc,
        ks_stat=d,
        ks_pvalue=ks_pvalue(d, sample.n, method),
        pvalue_method=method,
    )


def _failed(fam, n, exc):
    nan = math.nan
    return GofReport(fam, fam.n_params, n, (), nan, nan, nan, nan, nan, nan, "none", None, True, str(exc))


def model_comparison(
    s,
    families=ALL_FAMILIES,
    pvalue_method: str = "auto",
    bootstrap: int = 0,
    seed: int = 0,
    fits: dict | None = None,
    fit_options: dict | None = None,
) -> list[GofReport]:
    """Fit every family and rank the results by AIC, then KS statistic.

    A family whose fit fails is reported with ``failed=True`` after the
    successful rows instead of raising.  When ``fits`` is a dict it is
    filled with the successful :class:`FitResult` objects by family.
    ``fit_options`` (``tol``, ``max_iter``, ``alpha``) are passed to
    :func:`celdist.fitting.fit`.
    """
    sample = as_sample(s)
    fams = [Family.parse(f) for f in families]
    ok, bad = [], []
    for fam in fams:
        try:
            res = fit(fam, sample, **(fit_options or {}))
            rep = gof_report(res, sample, pvalue_method)
            if bootstrap and fam is Family.CEL:
                rep = _with_bootstrap(rep, ks_bootstrap_pvalue(sample, bootstrap, seed))
            if fits is not None:
                fits[fam] = res
            ok.append(rep)
        except (ConvergenceError, BracketError, DomainError) as exc:
            log.warning("fit of %s failed: %s", fam.value, exc)
            bad.append(_failed(fam, sample.n, exc))
    ok.sort(key=lambda r: (r.aic, r.ks_stat))
    return ok + bad


def _with_bootstrap(rep: GofReport, p: float) -> GofReport:
    d = {**rep.__dict__, "bootstrap_pvalue": p}
    return GofReport(**d)
