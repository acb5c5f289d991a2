"""Analytic side results for CEL: fractional moments, entropies, the
characteristic function, quantile-based shape measures, order statistics
and likelihood-ratio ordering."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .core import CEL, check_theta
from .errors import ConvergenceError, DomainError
from .numerics import beta_fn, integrate

__all__ = [
    "EntropyOrder",
    "OrderStatSpec",
    "fractional_moment",
    "truncated_mean",
    "char_fn",
    "renyi_entropy",
    "renyi_entropy_closed_form",
    "tsallis_entropy",
    "tsallis_entropy_closed_form",
    "bowley_skewness",
    "moors_kurtosis",
    "order_stat_pdf",
    "order_stat_pdf_series",
    "order_stat_cdf",
    "lr_log_ratio_derivative",
    "lr_log_ratio",
    "lr_ordering_check",
    "lr_ratio_increasing",
]

CHAR_FN_T_MAX = 100.0


# ---------------------------------------------------------------------------
# moments


def fractional_moment(d: CEL, r: float) -> float:
    """E[X**r] for -1 < r < 1, via the beta integral of the second kind.

    Raises DomainError for r >= 1 (the moment does not exist: the density
    tail is ~ x**-2) and for r <= -1 (divergence at the origin).
    """
    r = float(r)
    if not math.isfinite(r):
        raise DomainError("r must be finite")
    if r >= 1.0:
        raise DomainError("moment does not exist for r ≥ 1")
    if r <= -1.0:
        raise DomainError("moment does not exist for r ≤ -1")
    t = d.theta
    return t ** (r + 1.0) / (t + 1.0) * (beta_fn(r + 1.0, 1.0 - r) + 2.0 / t * beta_fn(r + 1.0, 2.0 - r))


def truncated_mean(d: CEL, M: float) -> float:
    """Partial first moment over [0, M].

    It diverges logarithmically, growing like
    ``theta**2 / (theta+1) * log(M)`` for large M.
    """
    M = float(M)
    if not (M > 0.0) or not math.isfinite(M):
        raise DomainError("M must be finite and > 0")
    t = d.theta
    # geometric breakpoints keep each panel's integrand well scaled
    pts = [0.0]
    b = t
    while b < M:
        pts.append(b)
        b *= 10.0
    pts.append(M)
    f = lambda x: x * d.pdf(x)
    return math.fsum(integrate(f, a, c, abs_tol=1e-13, rel_tol=1e-12).value for a, c in zip(pts[:-1], pts[1:]))


# ---------------------------------------------------------------------------
# characteristic function


def _wynn_epsilon(s):
    """Wynn's epsilon-algorithm estimate of the limit of partial sums ``s``."""
    n = len(s)
    e_prev = [0j] * (n + 1)
    e_cur = list(s)
    best = s[-1]
    for k in range(1, n):
        e_next = []
        for j in range(len(e_cur) - 1):
            diff = e_cur[j + 1] - e_cur[j]
            if diff == 0:
                return e_cur[j + 1] if k % 2 == 1 else best
            e_next.append(e_prev[j + 1] + 1.0 / diff)
        e_prev, e_cur = e_cur, e_next
        if k % 2 == 0 and e_cur:
            best = e_cur[-1]
    return best


def char_fn(d: CEL, t: float, t_max: float = CHAR_FN_T_MAX) -> complex:
    """E[exp(i t X)].

    The moment generating function does not exist, so this is the natural
    transform.  The integral is split at consecutive multiples of pi/|t|
    and the resulting alternating series of panel integrals is summed with
    Wynn's epsilon algorithm.
    """
    t = float(t)
    if not math.isfinite(t):
        raise DomainError("t must be finite")
    if abs(t) > t_max:
        raise ConvergenceError(f"|t| = {abs(t)} exceeds the supported range {t_max}")
    if t == 0.0:
        return 1.0 + 0.0j
    if t < 0.0:
        return char_fn(d, -t, t_max).conjugate()

    h = math.pi / t
    re = lambda x: np.cos(t * x) * d.pdf(x)
    im = lambda x: np.sin(t * x) * d.pdf(x)
    partial = []
    total = 0j
    checkpoint = None
    for k in range(400):
        a, b = k * h, (k + 1) * h
        total += complex(
            integrate(re, a, b, abs_tol=1e-15, rel_tol=1e-13).value,
            integrate(im, a, b, abs_tol=1e-15, rel_tol=1e-13).value,
        )
        partial.append(total)
        if k >= 20 and k % 10 == 0:
            est = _wynn_epsilon(partial[-21:])
            if checkpoint is not None and abs(est - checkpoint) < 1e-13:
                return est
            checkpoint = est
    raise ConvergenceError(f"characteristic function at t={t} did not converge")


# ---------------------------------------------------------------------------
# entropies


def _check_order(order) -> float:
    q = float(order.eta) if isinstance(order, EntropyOrder) else float(order)
    if not math.isfinite(q) or q <= 0.0 or q == 1.0:
        raise DomainError(f"entropy order must be > 0 and != 1, got {q}")
    if q <= 0.5:
        raise DomainError(f"integral of pdf**{q} diverges: the density tail is ~ x**-2, so the order must exceed 1/2")
    return q


@dataclass(frozen=True)
class EntropyOrder:
    eta: float

    def __post_init__(self):
        v = float(self.eta)
        if not math.isfinite(v) or v <= 0.0 or v == 1.0:
            raise DomainError(f"entropy order must be > 0 and != 1, got {v}")
        object.__setattr__(self, "eta", v)


def _power_integral(d: CEL, q: float) -> float:
    """Integral of pdf**q over [0, inf).

    Quadrature on [0, L] plus the exact tail: with s = x + theta,
    pdf**q = c**q s**(-2q) (1 + 2/s)**q, and the binomial series in 2/s
    integrates term by term for s > 2.  The tail decays only like
    L**(1-2q), far too slowly for quadrature when q is near 1/2.
    """
    t = d.theta
    c = t * t / (t + 1.0)
    S = max(200.0, 10.0 * t)
    L = S - t
    f = lambda x: np.exp(q * np.asarray(d.logpdf(x)))
    head = integrate(f, 0.0, L, abs_tol=0.0, rel_tol=1e-13).value
    terms = []
    for k in range(60):
        term = special.binom(q, k) * (2.0 / S) ** k / (2.0 * q + k - 1.0)
        terms.append(term)
        if abs(term) < 1e-18 * abs(terms[0]):
            break
    tail = c**q * S ** (1.0 - 2.0 * q) * math.fsum(terms)
    return head + tail


def _binomial_power_sum(theta: float, q: int) -> float:
    return math.fsum(
        math.comb(q, k) * 2.0 ** (q - k) / ((3 * q - k - 1) * theta ** (3 * q - k - 1)) for k in range(q + 1)
    )


def _integer_order(order) -> int:
    q = _check_order(order)
    if q != int(q) or q < 2:
        raise DomainError("closed-form entropy is valid only for integer order >= 2")
    return int(q)


def renyi_entropy(d: CEL, order) -> float:
    """(1/(1-eta)) log of the integral of pdf**eta, by quadrature."""
    q = _check_order(order)
    return math.log(_power_integral(d, q)) / (1.0 - q)


def renyi_entropy_closed_form(d: CEL, order) -> float:
    """Binomial-expansion form of the Rényi entropy, exact for integer order."""
    q = _integer_order(order)
    t = d.theta
    c = t * t / (t + 1.0)
    return q / (1.0 - q) * math.log(c) + math.log(_binomial_power_sum(t, q)) / (1.0 - q)


def tsallis_entropy(d: CEL, order) -> float:
    """(1/(1-lambda)) (1 - integral of pdf**lambda), by quadrature."""
    q = _check_order(order)
    return (1.0 - _power_integral(d, q)) / (1.0 - q)


def tsallis_entropy_closed_form(d: CEL, order) -> float:
    q = _integer_order(order)
    t = d.theta
    c = t * t / (t + 1.0)
    return (1.0 - c**q * _binomial_power_sum(t, q)) / (1.0 - q)


# ---------------------------------------------------------------------------
# quantile-based shape


def bowley_skewness(d: CEL) -> float:
    q1, q2, q3 = d.quantile(np.array([0.25, 0.5, 0.75]))
    return float((q3 - 2.0 * q2 + q1) / (q3 - q1))


def moors_kurtosis(d: CEL) -> float:
    e1, e3, e5, e6, e7 = d.quantile(np.array([1, 3, 5, 6, 7]) / 8.0)
    return float((e7 - e5 - e3 + e1) / (e6 - e1))


# ---------------------------------------------------------------------------
# order statistics


@dataclass(frozen=True)
class OrderStatSpec:
    r: int
    m: int

    def __post_init__(self):
        if int(self.r) != self.r or int(self.m) != self.m:
            raise DomainError("r and m must be integers")
        if not 1 <= self.r <= self.m:
            raise DomainError(f"need 1 <= r <= m, got r={self.r}, m={self.m}")


def order_stat_pdf(d: CEL, spec: OrderStatSpec, x):
    """Density of the r-th smallest of m independent CEL draws."""
    r, m = spec.r, spec.m
    g = np.asarray(d.pdf(x))
    G = np.asarray(d.cdf(x))
    S = np.asarray(d.sf(x))
    out = m * math.comb(m - 1, r - 1) * G ** (r - 1) * S ** (m - r) * g
    return float(out) if np.ndim(out) == 0 else out


def order_stat_pdf_series(d: CEL, spec: OrderStatSpec, x):
    """The same density expanded as a double binomial sum in powers of
    ``x`` and ``(x + theta)``.  Alternating terms make it lose precision for
    large m; it exists as a cross-check of :func:`order_stat_pdf`."""
    r, m = spec.r, spec.m
    t = d.theta
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise DomainError("x must be >= 0")
    Z = m * math.comb(m - 1, r - 1)
    c = t * t / (t + 1.0)
    total = np.zeros_like(x)
    for l in range(m - r + 1):
        for k in range(r + l):
            coef = (-1) ** l * c ** (k + 1) * ((t + 2.0) / t) ** k
            coef *= math.comb(m - r, l) * math.comb(r + l - 1, k)
            total = total + coef * x ** (2 * r + 2 * l - k - 2) * (x + t + 2.0) / (x + t) ** (2 * r + 2 * l + 1)
    out = Z * total
    return float(out) if np.ndim(out) == 0 else out


def order_stat_cdf(d: CEL, spec: OrderStatSpec, x):
    """P(X_(r:m) <= x) as a regularized incomplete beta in cdf(x)."""
    out = special.betainc(spec.r, spec.m - spec.r + 1, np.asarray(d.cdf(x)))
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# likelihood-ratio ordering


def lr_log_ratio_derivative(theta1, theta2, x):
    """d/dx log[pdf(x; theta1) / pdf(x; theta2)].

    Positive for theta1 > theta2: the density ratio increases, so the law
    with the larger theta is the larger one in likelihood-ratio order.
    """
    t1, t2 = check_theta(theta1), check_theta(theta2)
    x = np.asarray(x, dtype=float)
    out = (t2 - t1) / ((2.0 + t1 + x) * (2.0 + t2 + x)) + 3.0 * (t1 - t2) / ((x + t1) * (x + t2))
    return float(out) if np.ndim(out) == 0 else out


def lr_log_ratio(theta1, theta2, x):
    """log[pdf(x; theta1) / pdf(x; theta2)] without cancellation."""
    t1, t2 = check_theta(theta1), check_theta(theta2)
    x = np.asarray(x, dtype=float)
    dt = t1 - t2
    const = 2.0 * math.log(t1 / t2) - math.log1p(dt / (t2 + 1.0))
    return const + np.log1p(dt / (x + t2 + 2.0)) - 3.0 * np.log1p(dt / (x + t2))


def lr_ordering_check(theta1, theta2, grid) -> bool:
    """True iff pdf(.; theta1)/pdf(.; theta2) strictly decreases along ``grid``.

    ``theta1 > theta2`` is required.  For CEL the ratio in fact increases
    for every such pair (see :func:`lr_log_ratio_derivative`), so this
    returns False on any grid; :func:`lr_ratio_increasing` tests the
    direction that holds.
    """
    t1, t2 = check_theta(theta1), check_theta(theta2)
    if not t1 > t2:
        raise DomainError(f"lr_ordering_check requires theta1 > theta2, got {t1} <= {t2}")
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 2 or np.any(g <= 0.0) or np.any(np.diff(g) <= 0.0):
        raise DomainError("grid must be a strictly increasing sequence of positive values")
    return bool(np.all(np.diff(lr_log_ratio(t1, t2, g)) < 0.0))


def lr_ratio_increasing(theta1, theta2, grid) -> bool:
    """True iff pdf(.; theta1)/pdf(.; theta2) strictly increases along ``grid``."""
    t1, t2 = check_theta(theta1), check_theta(theta2)
    if not t1 > t2:
        raise DomainError(f"requires theta1 > theta2, got {t1} <= {t2}")
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 2 or np.any(g <= 0.0) or np.any(np.diff(g) <= 0.0):
        raise DomainError("grid must be a strictly increasing sequence of positive values")
    return bool(np.all(np.diff(lr_log_ratio(t1, t2, g)) > 0.0))
