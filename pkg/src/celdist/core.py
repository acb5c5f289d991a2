"""The compounded exponential-Lindley distribution CEL(theta).

An exponential lifetime whose rate is itself Lindley(theta) distributed.
The result is a one-parameter law with support ``x >= 0``, a strictly
decreasing hazard and an ``x**-2`` density tail, so no integer moments
exist.  All functions accept scalars or array-likes and return a float for
scalar input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["CEL", "check_theta"]


def check_theta(theta) -> float:
    """Validate a CEL parameter and return it as a float."""
    try:
        t = float(theta)
    except (TypeError, ValueError):
        raise DomainError(f"theta must be a real number, got {theta!r}") from None
    if not math.isfinite(t) or t <= 0.0:
        raise DomainError(f"theta must be finite and > 0, got {theta!r}")
    return t


def _support(x, name="x"):
    a = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name} must be finite")
    if np.any(a < 0.0):
        raise DomainError(f"{name} must be >= 0")
    return a


def _out(a):
    return float(a) if np.ndim(a) == 0 else a


@dataclass(frozen=True)
class CEL:
    """CEL(theta) distribution; ``theta`` is in the units of the data."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", check_theta(self.theta))

    @property
    def _c(self) -> float:
        t = self.theta
        return t * t / (t + 1.0)

    def pdf(self, x):
        x = _support(x)
        t = self.theta
        s = x + t
        return _out(self._c * ((s + 2.0) / s) / (s * s))

    def logpdf(self, x):
        x = _support(x)
        t = self.theta
        return _out(2.0 * math.log(t) - math.log1p(t) + np.log(x + t + 2.0) - 3.0 * np.log(x + t))

    def cdf(self, x):
        x = _support(x)
        t = self.theta
        s = x + t
        return _out((x / s) * (x * (t + 1.0) + t * (t + 2.0)) / ((t + 1.0) * s))

    def sf(self, x):
        """Survival function 1 - cdf."""
        x = _support(x)
        t = self.theta
        s = x + t
        return _out(self._c * ((s + 1.0) / s) / s)

    survival = sf

    def hazard(self, x):
        x = _support(x)
        s = x + self.theta
        return _out((s + 2.0) / (s * (s + 1.0)))

    def cumulative_hazard(self, t):
        t = _support(t, "t")
        th = self.theta
        return _out(2.0 * np.log1p(t / th) - np.log1p(t / (th + 1.0)))

    def glaser_eta(self, t):
        """Glaser's shape function -pdf'(t)/pdf(t).

        It is strictly decreasing in ``t`` for every theta, which places the
        distribution in the decreasing-failure-rate class.
        """
        t = _support(t, "t")
        s = t + self.theta
        return _out(2.0 * (s + 3.0) / (s * (s + 2.0)))

    def quantile(self, u):
        """Inverse cdf on ``0 <= u < 1``.

        Uses the root of ``z**2 - (theta+2) z + u (theta+1) = 0`` in
        ``z = x / (x + theta)`` that lies in [0, 1), rearranged so neither
        ``u -> 0`` nor ``u -> 1`` loses relative accuracy.
        """
        u = np.asarray(u, dtype=float)
        if not np.all(np.isfinite(u)) or np.any(u < 0.0) or np.any(u >= 1.0):
            raise DomainError("u must satisfy 0 <= u < 1")
        t = self.theta
        r = np.sqrt((t + 2.0) ** 2 - 4.0 * u * (t + 1.0))
        return _out(t * u * (r + t) / ((1.0 - u) * (r + t + 2.0)))

    ppf = quantile

    def median(self) -> float:
        return self.quantile(0.5)
