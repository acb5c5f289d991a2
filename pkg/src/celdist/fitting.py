"""Maximum-likelihood fitting for CEL and the competitor families."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Sequence

import numpy as np

from .competitors import CompetitorParams, Family, comp_log_likelihood
from .core import check_theta
from .errors import BracketError, ConvergenceError, DomainError
from .numerics import SIMPLEX_MAX_ITER, SIMPLEX_TOL, find_root, nelder_mead

__all__ = [
    "Sample",
    "FitResult",
    "cel_log_likelihood",
    "cel_score",
    "cel_observed_information",
    "fit_cel",
    "fit_competitor",
    "fit",
]


@dataclass(frozen=True)
class Sample:
    """Strictly positive observations, stored sorted ascending."""

    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float).ravel())
        if v.size == 0:
            raise DomainError("a sample needs at least one observation")
        bad = v[~np.isfinite(v) | (v <= 0.0)]
        if bad.size:
            raise DomainError(f"sample values must be finite and > 0; offending: {bad.tolist()}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def has_ties(self) -> bool:
        return bool(np.any(np.diff(self.values) == 0.0))

    def __len__(self) -> int:
        return self.n


def as_sample(s) -> Sample:
    return s if isinstance(s, Sample) else Sample(s)


@dataclass(frozen=True)
class FitResult:
    family: Family
    estimates: tuple
    log_likelihood: float
    iterations: int
    converged: bool
    n: int
    std_error: float | None = None
    ci_lower: float | None = None
    ci_upper: float | None = None
    alpha: float | None = None
    warning: str | None = None
    trace: tuple = field(default=(), repr=False)

    @property
    def k(self) -> int:
        return len(self.estimates)

    @property
    def neg2ll(self) -> float:
        return -2.0 * self.log_likelihood

    @property
    def params(self) -> dict:
        return dict(zip(self.family.param_names, self.estimates))

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "estimates": list(self.estimates),
            "params": self.params,
            "std_error": self.std_error,
            "ci_lower": self.ci_lower,
            "ci_upper": self.ci_upper,
            "alpha": self.alpha,
            "log_likelihood": self.log_likelihood,
            "neg2ll": self.neg2ll,
            "n": self.n,
            "iterations": self.iterations,
            "converged": self.converged,
            "warning": self.warning,
            "trace": list(self.trace),
        }


# ---------------------------------------------------------------------------
# CEL likelihood


def cel_log_likelihood(theta, s) -> float:
    t = check_theta(theta)
    x = as_sample(s).values
    n = x.size
    return float(2 * n * math.log(t) - n * math.log1p(t) + np.sum(np.log(x + t + 2.0) - 3.0 * np.log(x + t)))


def cel_score(theta, s) -> float:
    """Derivative of the CEL log-likelihood with respect to theta."""
    t = check_theta(theta)
    x = as_sample(s).values
    n = x.size
    return float(2 * n / t - n / (t + 1.0) + np.sum(1.0 / (x + t + 2.0) - 3.0 / (x + t)))


def cel_observed_information(theta, s) -> float:
    """Negative second derivative of the CEL log-likelihood."""
    t = check_theta(theta)
    x = as_sample(s).values
    n = x.size
    return float(
        2 * n / t**2 - n / (t + 1.0) ** 2 - np.sum(3.0 / (x + t) ** 2 - 1.0 / (x + t + 2.0) ** 2)
    )


def _score_grid(x, grid):
    n = x.size
    xs = x[None, :]
    tg = grid[:, None]
    return 2 * n / grid - n / (grid + 1.0) + np.sum(1.0 / (xs + tg + 2.0) - 3.0 / (xs + tg), axis=1)


def _cel_brackets(x):
    """Sign changes (+ to -) of the score on a geometric grid around the median."""
    m = float(np.median(x))
    lo_exp, hi_exp = -3.0, 3.0
    for _ in range(20):
        grid = m * np.logspace(lo_exp, hi_exp, int(round(10 * (hi_exp - lo_exp))) + 1)
        sc = _score_grid(x, grid)
        idx = np.nonzero((sc[:-1] > 0.0) & (sc[1:] <= 0.0))[0]
        if idx.size:
            return [(grid[i], grid[i + 1]) for i in idx]
        # score is +inf at 0+ and negative for large theta; widen toward the
        # side where the sign change must lie
        if np.all(sc > 0.0):
            hi_exp += 3.0
        else:
            lo_exp -= 3.0
    raise BracketError("no sign change of the CEL score found")


def fit_cel(s, tol: float = 1e-10, alpha: float = 0.05, max_iter: int = 200) -> FitResult:
    """Maximum-likelihood estimate of theta with a Wald confidence interval."""
    sample = as_sample(s)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    x = sample.values
    n = x.size

    def score(t):
        return float(2 * n / t - n / (t + 1.0) + np.sum(1.0 / (x + t + 2.0) - 3.0 / (x + t)))

    def dscore(t):
        return -cel_observed_information(t, sample)

    best = None
    iterations = 0
    for lo, hi in _cel_brackets(x):
        # |score| cannot be resolved below the rounding level of its sum
        magnitude = 2 * n / hi + n / (hi + 1.0) + float(np.sum(1.0 / (x + hi + 2.0) + 3.0 / (x + hi)))
        eff_tol = max(tol, 64.0 * np.finfo(float).eps * magnitude)
        try:
            r = find_root(score, (lo, hi), f_prime=dscore, tol=eff_tol, max_iter=max_iter)
        except ConvergenceError as exc:
            raise ConvergenceError(f"CEL score equation did not converge: {exc}", exc.result, exc.trace) from None
        iterations += r.iterations
        ll = cel_log_likelihood(r.root, sample)
        if best is None or ll > best[1]:
            best = (r, ll)
    root, ll = best
    theta_hat = root.root
    info = cel_observed_information(theta_hat, sample)
    se = lo_ci = hi_ci = None
    warning = None
    if info > 0.0:
        se = 1.0 / math.sqrt(info)
        z = NormalDist().inv_cdf(1.0 - alpha / 2.0)
        lo_ci, hi_ci = theta_hat - z * se, theta_hat + z * se
    else:
        warning = "observed information is not positive at the estimate; no standard error"
    return FitResult(
        family=Family.CEL,
        estimates=(theta_hat,),
        log_likelihood=ll,
        iterations=max(iterations, 1),
        converged=True,
        n=n,
        std_error=se,
        ci_lower=lo_ci,
        ci_upper=hi_ci,
        alpha=alpha,
        warning=warning,
        trace=root.trace,
    )


# ---------------------------------------------------------------------------
# competitors


def _to_natural(family, v):
    b = math.exp(v[0])
    q = 1.0 / (1.0 + math.exp(-v[1])) if family is Family.EL else math.exp(v[1])
    return b, q


def _to_unconstrained(family, b, q):
    return np.array([math.log(b), math.log(q / (1.0 - q)) if family is Family.EL else math.log(q)])


def _start_values(family, x):
    mean = float(np.mean(x))
    logs = np.log(x)
    if family is Family.WEIBULL:
        sd = float(np.std(logs, ddof=1)) if x.size > 1 else 1.0
        a = math.pi / (math.sqrt(6.0) * sd) if sd > 0 else 1.0
        b = math.exp(-(float(np.mean(logs)) + 0.5772156649015329 / a))
        return b, a
    if family is Family.GAMMA:
        d = math.log(mean) - float(np.mean(logs))
        a = (3.0 - d + math.sqrt((d - 3.0) ** 2 + 24.0 * d)) / (12.0 * d) if d > 0 else 1.0
        return a / mean, a
    neutral = {Family.EP: 1.0, Family.EL: 0.5, Family.EPL: 1.0}[family]
    return 1.0 / mean, neutral


_JITTER = ((0.0, 0.0), (0.5, -1.0), (-0.5, 1.0), (0.25, 2.0))


def fit_competitor(family, s, tol: float = SIMPLEX_TOL, max_iter: int = SIMPLEX_MAX_ITER) -> FitResult:
    """Maximum-likelihood fit of a two-parameter competitor by Nelder-Mead.

    The search runs over ``(log beta, log p2)`` (``logit p`` for EL) from a
    heuristic start plus three deterministic jittered starts; each run is
    restarted once from its own optimum.  The best value wins, ties going to
    the earliest start.
    """
    fam = Family.parse(family)
    if fam is Family.CEL:
        raise DomainError("use fit_cel for the CEL family")
    sample = as_sample(s)
    x = sample.values

    def nll(v):
        try:
            c = CompetitorParams(fam, *_to_natural(fam, v))
        except (DomainError, OverflowError):
            return math.inf
        ll = comp_log_likelihood(c, x)
        return -ll if math.isfinite(ll) else math.inf

    base = _to_unconstrained(fam, *_start_values(fam, x))
    best = None
    errors = []
    for shift in _JITTER:
        start = base + np.array(shift)
        if not math.isfinite(nll(start)):
            continue
        try:
            r = nelder_mead(nll, start, tol=tol, max_iter=max_iter)
            r2 = nelder_mead(nll, r.argmin, tol=tol, max_iter=max_iter)
        except ConvergenceError as exc:
            errors.append(str(exc))
            continue
        iters = r.iterations + r2.iterations
        if best is None or r2.min_value < best[0].min_value:
            best = (r2, iters)
    if best is None:
        raise ConvergenceError(f"{fam.value} fit failed from every start: {'; '.join(errors) or 'no finite start'}")
    r, iters = best
    b, q = _to_natural(fam, r.argmin)
    return FitResult(
        family=fam,
        estimates=(b, q),
        log_likelihood=-r.min_value,
        iterations=iters,
        converged=True,
        n=sample.n,
    )


def fit(family, s, **kwargs) -> FitResult:
    """Dispatch to :func:`fit_cel` or :func:`fit_competitor`."""
    fam = Family.parse(family)
    if fam is Family.CEL:
        return fit_cel(s, **{k: v for k, v in kwargs.items() if k in ("tol", "alpha", "max_iter")})
    return fit_competitor(fam, s, **{k: v for k, v in kwargs.items() if k in ("tol", "max_iter")})
