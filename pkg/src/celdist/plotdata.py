"""Curve and point sets behind the fitted-density, fitted-cdf, P-P and Q-Q
plots of a model comparison, written as two-column CSV files."""

from __future__ import annotations

import math
import os

import numpy as np

from .competitors import CompetitorParams, Family, comp_cdf, comp_pdf
from .core import CEL
from .fitting import FitResult, as_sample
from .numerics import find_root
from .report import rows_to_csv

__all__ = ["fitted_functions", "plotting_positions", "fitted_quantile", "plot_tables", "write_plot_data"]

GRID_POINTS = 400


def fitted_functions(res: FitResult):
    """(pdf, cdf) callables of a fitted family."""
    if res.family is Family.CEL:
        d = CEL(res.estimates[0])
        return d.pdf, d.cdf
    c = CompetitorParams(res.family, *res.estimates)
    return (lambda x: comp_pdf(c, x)), (lambda x: comp_cdf(c, x))


def plotting_positions(n: int) -> np.ndarray:
    """Hazen positions (i - 0.5)/n."""
    return (np.arange(1, n + 1) - 0.5) / n


def fitted_quantile(res: FitResult, u: float, tol: float = 1e-12) -> float:
    """Quantile of a fitted family; closed form for CEL, cdf inversion otherwise."""
    if res.family is Family.CEL:
        return CEL(res.estimates[0]).quantile(u)
    pdf, cdf = fitted_functions(res)
    hi = 1.0 / res.estimates[0]
    while cdf(hi) < u:
        hi *= 2.0
        if not math.isfinite(hi):
            raise OverflowError("quantile bracket overflowed")
    return find_root(lambda x: cdf(x) - u, (0.0, hi), f_prime=lambda x: pdf(x) if x > 0 else math.inf,
                     tol=tol, max_iter=400).root


def plot_tables(s, fits: dict) -> dict:
    """Map file name -> (header, rows) for the sample and every fitted family."""
    x = as_sample(s).values
    n = x.size
    top = 1.2 * float(x[-1])
    grid = np.linspace(top / GRID_POINTS, top, GRID_POINTS)
    cgrid = np.concatenate(([0.0], grid))
    tables = {}
    steps = []
    for i, v in enumerate(x):
        steps.append((float(v), i / n))
        steps.append((float(v), (i + 1) / n))
    tables["ecdf.csv"] = (("x", "ecdf"), steps)
    pos = plotting_positions(n)
    for fam, res in fits.items():
        name = Family.parse(fam).value.lower()
        pdf, cdf = fitted_functions(res)
        tables[f"pdf_{name}.csv"] = (("x", "pdf"), list(zip(grid, np.asarray(pdf(grid)))))
        tables[f"cdf_{name}.csv"] = (("x", "cdf"), list(zip(cgrid, np.asarray(cdf(cgrid)))))
        tables[f"pp_{name}.csv"] = (("empirical", "fitted"), list(zip(pos, np.asarray(cdf(x)))))
        q = [fitted_quantile(res, float(u)) for u in pos]
        tables[f"qq_{name}.csv"] = (("fitted_quantile", "observed"), list(zip(q, x)))
    return tables


def write_plot_data(directory, s, fits: dict) -> list[str]:
    os.makedirs(directory, exist_ok=True)
    written = []
    for fname, (header, rows) in plot_tables(s, fits).items():
        path = os.path.join(directory, fname)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(rows_to_csv(header, rows))
        written.append(path)
    return written
