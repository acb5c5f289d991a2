"""CEL: the compounded exponential-Lindley lifetime distribution.

Density, distribution and hazard functions, quantiles, entropies, order
statistics and fractional moments; maximum-likelihood fitting; comparison
against five decreasing-failure-rate competitors; and a seeded Monte Carlo
study of the estimator.
"""

from .competitors import COMPETITORS, CompetitorParams, Family, comp_cdf, comp_log_likelihood, comp_logpdf, comp_pdf
from .core import CEL, check_theta
from .datasets import fixture_path, load_fixture
from .errors import BracketError, ConvergenceError, DomainError, EmptyDatasetError, ParseError
from .fitting import FitResult, Sample, cel_log_likelihood, cel_observed_information, cel_score, fit, fit_cel, fit_competitor
from .gof import GofReport, information_criteria, ks_pvalue, ks_statistic, model_comparison
from .io import Dataset, load_dataset
from .simulation import SeededStream, SimSummary, run_simulation_study, sample_cel

__version__ = "0.1.0"

__all__ = [
    "CEL", "check_theta",
    "Family", "CompetitorParams", "COMPETITORS", "comp_logpdf", "comp_pdf", "comp_cdf", "comp_log_likelihood",
    "Sample", "FitResult", "fit", "fit_cel", "fit_competitor",
    "cel_log_likelihood", "cel_score", "cel_observed_information",
    "GofReport", "information_criteria", "ks_statistic", "ks_pvalue", "model_comparison",
    "SeededStream", "SimSummary", "sample_cel", "run_simulation_study",
    "Dataset", "load_dataset", "load_fixture", "fixture_path",
    "DomainError", "BracketError", "ConvergenceError", "ParseError", "EmptyDatasetError",
]
