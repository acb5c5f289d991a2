"""Seeded CEL variate generation and the Monte Carlo study of the
maximum-likelihood estimator."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .core import CEL, check_theta
from .errors import BracketError, ConvergenceError, DomainError
from .fitting import fit_cel

__all__ = [
    "SeededStream",
    "SimSummary",
    "SimulationError",
    "uniforms",
    "sample_cel",
    "run_simulation_study",
    "TABLE1_SIZES",
]

TABLE1_SIZES = (20, 30, 50, 90, 150, 200)
_U64 = 2**64


@dataclass(frozen=True)
class SeededStream:
    """Independent random stream ``stream_index`` derived from ``seed``.

    Streams come from a Philox counter-based generator keyed through
    ``SeedSequence(seed, spawn_key=(stream_index,))``, so any stream can be
    produced on its own, in any order, with identical output.
    """

    seed: int
    stream_index: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_index"):
            v = getattr(self, name)
            if int(v) != v or not 0 <= int(v) < _U64:
                raise DomainError(f"{name} must be an unsigned 64-bit integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.Philox(ss))


def uniforms(stream: SeededStream, n: int) -> np.ndarray:
    """``n`` uniforms on the open interval (0, 1), on a 2**-52 lattice
    offset by half a step so neither endpoint can occur."""
    k = stream.generator().integers(0, 2**52, size=n, dtype=np.uint64)
    return (k.astype(float) + 0.5) * 2.0**-52


def sample_cel(d: CEL, n: int, stream: SeededStream) -> np.ndarray:
    """``n`` CEL variates by inverse transform."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    return np.asarray(d.quantile(uniforms(stream, int(n))))


@dataclass(frozen=True)
class SimSummary:
    """Monte Carlo summary for one sample size.

    ``bias`` and ``mse`` average over the successful replications (divisor
    N); ``variance`` uses the N-1 divisor and ``variance_population`` the N
    divisor, so ``mse == variance_population + bias**2``.
    """

    n: int
    replications: int
    theta: float
    bias: float
    mse: float
    variance: float
    variance_population: float
    mean_estimate: float
    mc_standard_error: float
    failures: int

    def to_dict(self) -> dict:
        return asdict(self)


class SimulationError(ConvergenceError):
    """More than 1% of the replications failed to produce an estimate."""


def _replicate(theta, sizes, seed, rep, tol):
    x = sample_cel(CEL(theta), max(sizes), SeededStream(seed, rep))
    out = np.empty(len(sizes))
    for j, n in enumerate(sizes):
        try:
            out[j] = fit_cel(x[:n], tol=tol).estimates[0]
        except (ConvergenceError, BracketError):
            out[j] = math.nan
    return out


def run_simulation_study(
    theta,
    sizes: Sequence[int] = TABLE1_SIZES,
    replications: int = 2500,
    seed: int = 0,
    workers: int = 1,
    tol: float = 1e-10,
) -> list[SimSummary]:
    """Bias, MSE and variance of the CEL maximum-likelihood estimator.

    Replication ``i`` uses stream ``SeededStream(seed, i)``; the samples for
    the different sizes are nested prefixes of one draw of ``max(sizes)``
    variates.  Estimates are stored by replication index and reduced in
    index order, so the result does not depend on ``workers``.
    """
    theta = check_theta(theta)
    sizes = [int(n) for n in sizes]
    if not sizes or any(n < 1 for n in sizes):
        raise DomainError("sizes must be a nonempty list of positive integers")
    if int(replications) != replications or replications < 2:
        raise DomainError("replications must be an integer >= 2")
    replications = int(replications)
    SeededStream(seed)  # validates the seed

    est = np.empty((replications, len(sizes)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = pool.map(lambda r: _replicate(theta, sizes, seed, r, tol), range(replications))
            for r, row in enumerate(rows):
                est[r] = row
    else:
        for r in range(replications):
            est[r] = _replicate(theta, sizes, seed, r, tol)

    summaries = []
    worst = 0
    for j, n in enumerate(sizes):
        col = est[:, j]
        good = col[np.isfinite(col)]
        failures = replications - good.size
        worst = max(worst, failures)
        m = good.size
        if m < 2:
            raise SimulationError(f"n={n}: only {m} successful replications")
        mean = math.fsum(good) / m
        dev = good - mean
        ss = math.fsum(dev * dev)
        bias = mean - theta
        mse = math.fsum((good - theta) ** 2) / m
        var = ss / (m - 1)
        summaries.append(
            SimSummary(
                n=n,
                replications=replications,
                theta=theta,
                bias=bias,
                mse=mse,
                variance=var,
                variance_population=ss / m,
                mean_estimate=mean,
                mc_standard_error=math.sqrt(var / m),
                failures=failures,
            )
        )
    if worst > 0.01 * replications:
        err = SimulationError(f"{worst} of {replications} replications failed to converge")
        err.result = summaries
        raise err
    return summaries
