"""Two-parameter decreasing-failure-rate families used as comparison models.

Parameter conventions (``p1``, ``p2``):

========  ===============  =========================================
family    (p1, p2)         density
========  ===============  =========================================
EPL       (beta, theta)    exponential / Poisson-Lindley compound
EP        (beta, lambda)   exponential-Poisson
EL        (beta, p)        exponential-logarithmic, ``0 < p < 1``
WEIBULL   (beta, alpha)    alpha beta^alpha x^(alpha-1) exp(-(beta x)^alpha)
GAMMA     (beta, alpha)    rate beta, shape alpha
========  ===============  =========================================

Densities are computed in log space.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import log_gamma, reg_inc_gamma

__all__ = ["Family", "CompetitorParams", "COMPETITORS", "comp_logpdf", "comp_pdf", "comp_cdf", "comp_log_likelihood"]


class Family(str, enum.Enum):
    CEL = "CEL"
    EPL = "EPL"
    EP = "EP"
    EL = "EL"
    WEIBULL = "WEIBULL"
    GAMMA = "GAMMA"

    @classmethod
    def parse(cls, name) -> "Family":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().upper())
        except ValueError:
            raise DomainError(f"unknown distribution family {name!r}") from None

    @property
    def n_params(self) -> int:
        return 1 if self is Family.CEL else 2

    @property
    def param_names(self) -> tuple[str, ...]:
        return _PARAM_NAMES[self]


_PARAM_NAMES = {
    Family.CEL: ("theta",),
    Family.EPL: ("beta", "theta"),
    Family.EP: ("beta", "lambda"),
    Family.EL: ("beta", "p"),
    Family.WEIBULL: ("beta", "alpha"),
    Family.GAMMA: ("beta", "alpha"),
}

COMPETITORS = (Family.EPL, Family.EP, Family.EL, Family.WEIBULL, Family.GAMMA)


@dataclass(frozen=True)
class CompetitorParams:
    family: Family
    p1: float
    p2: float

    def __post_init__(self):
        fam = Family.parse(self.family)
        if fam is Family.CEL:
            raise DomainError("CEL is not a competitor family; use celdist.core.CEL")
        p1, p2 = float(self.p1), float(self.p2)
        if not (math.isfinite(p1) and math.isfinite(p2)) or p1 <= 0.0 or p2 <= 0.0:
            raise DomainError(f"{fam.value} parameters must be finite and > 0, got ({p1}, {p2})")
        if fam is Family.EL and not p2 < 1.0:
            raise DomainError(f"EL requires 0 < p < 1, got {p2}")
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)


def _positive(x):
    a = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(a)) or np.any(a <= 0.0):
        raise DomainError("density arguments must be finite and > 0")
    return a


def _nonneg(x):
    a = np.asarray(x, dtype=float)
    if np.any(np.isnan(a)) or np.any(a < 0.0):
        raise DomainError("cdf arguments must be >= 0")
    return a


def _out(a):
    return float(a) if np.ndim(a) == 0 else a


def comp_logpdf(c: CompetitorParams, x):
    x = _positive(x)
    b, q = c.p1, c.p2
    with np.errstate(divide="ignore", over="ignore"):
        if c.family is Family.EPL:
            y = np.exp(-b * x)
            out = (
                math.log(b) + 2.0 * math.log(q) + 2.0 * math.log1p(q) - math.log(1.0 + 3.0 * q + q * q)
                - b * x + np.log(3.0 + q - y) - 3.0 * np.log(1.0 + q - y)
            )
        elif c.family is Family.EP:
            # log(lambda beta / (1 - e^-lambda)) - lambda - beta x + lambda e^(-beta x)
            out = math.log(q * b) - math.log(-math.expm1(-q)) - q - b * x + q * np.exp(-b * x)
        elif c.family is Family.EL:
            out = (
                -math.log(-math.log(q)) + math.log(b) + math.log1p(-q)
                - b * x - np.log1p(-(1.0 - q) * np.exp(-b * x))
            )
        elif c.family is Family.WEIBULL:
            out = math.log(q) + q * math.log(b) + (q - 1.0) * np.log(x) - (b * x) ** q
        else:
            out = q * math.log(b) + (q - 1.0) * np.log(x) - b * x - log_gamma(q)
    return _out(out)


def comp_pdf(c: CompetitorParams, x):
    return _out(np.exp(comp_logpdf(c, x)))


def comp_cdf(c: CompetitorParams, x):
    """Closed-form distribution functions.

    EPL: with ``W = 1 + theta - e^(-beta x)`` and ``q = 1 - e^(-beta x)``,
    ``F = (1+theta)^2 q (theta^2 + 2 theta + theta q + q) / ((1 + 3 theta + theta^2) W^2)``.
    EP: ``F = expm1(-lambda q) / expm1(-lambda)``.
    EL: ``F = log1p((1-p) q / p) / (-log p)``, the same function as
    ``1 - log(1 - (1-p) e^(-beta x)) / log p``.
    """
    x = _nonneg(x)
    b, p = c.p1, c.p2
    with np.errstate(over="ignore"):
        if c.family is Family.EPL:
            q = -np.expm1(-b * x)
            w = p + q
            out = (1.0 + p) ** 2 * q * (p * p + 2.0 * p + p * q + q) / ((1.0 + 3.0 * p + p * p) * w * w)
        elif c.family is Family.EP:
            q = -np.expm1(-b * x)
            out = np.expm1(-p * q) / math.expm1(-p)
        elif c.family is Family.EL:
            # 1 - log(1 - (1-p) e^(-bx)) / log p, rewritten without cancellation
            q = -np.expm1(-b * x)
            out = np.log1p((1.0 - p) / p * q) / -math.log(p)
        elif c.family is Family.WEIBULL:
            out = -np.expm1(-((b * x) ** p))
        else:
            out = reg_inc_gamma(p, b * x)
    return _out(np.clip(out, 0.0, 1.0))


def comp_log_likelihood(c: CompetitorParams, values) -> float:
    """Sum of log densities; ``-inf`` if any density underflows to zero."""
    lp = np.asarray(comp_logpdf(c, values), dtype=float)
    total = float(np.sum(lp))
    if math.isnan(total):
        return -math.inf
    return total
