"""Command-line interface.

Subcommands ``fit``, ``compare``, ``simulate`` and ``eval``.  Each writes a
JSON report to stdout (or ``--out``) and exits with 0 on success, 2 on a
usage or input error and 3 on a numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import properties as props
from .competitors import Family
from .core import CEL, check_theta
from .datasets import FIXTURES, fixture_path
from .errors import BracketError, ConvergenceError, DomainError, ParseError
from .fitting import fit
from .gof import ALL_FAMILIES, model_comparison
from .io import load_dataset
from .plotdata import write_plot_data
from .report import ReportDocument, report_rows, rows_to_csv
from .simulation import TABLE1_SIZES, SeededStream, run_simulation_study, sample_cel

__all__ = ["main", "build_parser", "resolve_dataset", "DEFAULT_SEED", "EVAL_FUNCTIONS"]

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3
DEFAULT_SEED = 20240101

EVAL_FUNCTIONS = (
    "pdf", "cdf", "survival", "hazard", "cumulative_hazard", "glaser_eta", "quantile", "median",
    "renyi", "tsallis", "moment", "bowley", "moors", "order_pdf", "order_cdf", "sample",
)

log = logging.getLogger("celdist")


class UsageError(Exception):
    pass


def _float_list(text):
    try:
        out = [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _int_list(text):
    try:
        out = [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _default_seed():
    env = os.environ.get("CEL_SEED")
    if env is None or not env.strip():
        return DEFAULT_SEED
    try:
        return _seed(env.strip())
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"CEL_SEED: {exc}") from None


def resolve_dataset(path: str):
    """A readable path as given, else a bundled fixture matched by file name or key."""
    if os.path.exists(path):
        return path
    base = os.path.basename(path)
    stem = os.path.splitext(base)[0]
    if base in FIXTURES.values() or stem in FIXTURES:
        return fixture_path(stem if stem in FIXTURES else base)
    return path


def _dists(text):
    if text.strip().lower() == "all":
        return list(ALL_FAMILIES)
    fams = []
    for tok in text.split(","):
        if tok.strip():
            fam = Family.parse(tok)
            if fam not in fams:
                fams.append(fam)
    if not fams:
        raise DomainError("--dist needs at least one family")
    return fams


def build_parser(default_seed: int = DEFAULT_SEED) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="celdist", description="CEL lifetime distribution toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--csv", help="also write a flat CSV table of the results")

    f = sub.add_parser("fit", help="maximum-likelihood fit of one family")
    f.add_argument("dataset", help="observation file, or a bundled fixture name")
    f.add_argument("--dist", default="cel", help="cel, epl, ep, el, weibull or gamma")
    f.add_argument("--alpha", type=float, default=0.05, help="1 - confidence level of the Wald interval")
    f.add_argument("--tol", type=float, default=None)
    f.add_argument("--max-iter", type=int, default=None)
    common(f)

    c = sub.add_parser("compare", help="fit several families and rank them")
    c.add_argument("dataset")
    c.add_argument("--dist", default="all", help="'all' or a comma-separated list")
    c.add_argument("--tol", type=float, default=None)
    c.add_argument("--max-iter", type=int, default=None)
    c.add_argument("--bootstrap-ks", type=int, default=0, metavar="B",
                   help="parametric-bootstrap KS p-value for CEL with B replications")
    c.add_argument("--seed", type=_seed, default=default_seed)
    c.add_argument("--plot-data", metavar="DIR", help="write curve and P-P/Q-Q CSV files here")
    common(c)

    s = sub.add_parser("simulate", help="Monte Carlo study of the CEL estimator")
    s.add_argument("--theta", type=float, default=2.0)
    s.add_argument("--sizes", type=_int_list, default=list(TABLE1_SIZES))
    s.add_argument("--reps", type=int, default=2500)
    s.add_argument("--seed", type=_seed, default=default_seed)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--workers", type=int, default=1, help="threads; results do not depend on it")
    common(s)

    e = sub.add_parser("eval", help="evaluate a CEL function")
    e.add_argument("--fn", required=True, choices=EVAL_FUNCTIONS)
    e.add_argument("--theta", type=float, required=True)
    e.add_argument("--x", type=_float_list)
    e.add_argument("--u", type=_float_list)
    e.add_argument("--order", type=float, help="entropy order")
    e.add_argument("--r", type=float, help="moment order, or order-statistic rank")
    e.add_argument("--n", type=int, help="sample size, or order-statistic sample size")
    e.add_argument("--seed", type=_seed, default=default_seed)
    common(e)
    return p


def _need(args, name):
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"--fn {args.fn} requires --{name.replace('_', '-')}")
    return v


def _fit_options(args):
    return {k: v for k, v in (("tol", args.tol), ("max_iter", args.max_iter)) if v is not None}


def _dataset_inputs(ds):
    return {"path": str(ds.source_path), "n": ds.n, "checksum": ds.checksum}


def cmd_fit(args, inputs):
    ds = load_dataset(resolve_dataset(args.dataset))
    inputs["dataset"] = _dataset_inputs(ds)
    fam = Family.parse(args.dist)
    opts = _fit_options(args)
    if fam is Family.CEL:
        opts["alpha"] = args.alpha
    res = fit(fam, ds.sample, **opts)
    return res.to_dict()


def cmd_compare(args, inputs):
    ds = load_dataset(resolve_dataset(args.dataset))
    inputs["dataset"] = _dataset_inputs(ds)
    if args.bootstrap_ks < 0:
        raise UsageError("--bootstrap-ks must be >= 0")
    fits = {}
    rows = model_comparison(
        ds.sample, _dists(args.dist), bootstrap=args.bootstrap_ks, seed=args.seed,
        fits=fits, fit_options=_fit_options(args),
    )
    if all(r.failed for r in rows):
        raise ConvergenceError("every family failed to fit: " + "; ".join(f"{r.family.value}: {r.error}" for r in rows))
    if args.plot_data:
        write_plot_data(args.plot_data, ds.sample, fits)
    return {"rows": [r.to_dict() for r in rows]}


def cmd_simulate(args, inputs):
    if args.reps < 2:
        raise UsageError("--reps must be >= 2")
    if any(n < 1 for n in args.sizes):
        raise UsageError("--sizes must be positive integers")
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    theta = check_theta(args.theta)
    out = run_simulation_study(theta, args.sizes, args.reps, args.seed, workers=args.workers, tol=args.tol)
    return {"theta": theta, "summaries": [s.to_dict() for s in out]}


def cmd_eval(args, inputs):
    d = CEL(args.theta)
    fn = args.fn
    arguments = None
    if fn in ("pdf", "cdf", "survival", "hazard", "cumulative_hazard", "glaser_eta"):
        arguments = _need(args, "x")
        values = np.atleast_1d(getattr(d, fn)(arguments))
    elif fn == "quantile":
        arguments = _need(args, "u")
        values = np.atleast_1d(d.quantile(arguments))
    elif fn == "median":
        values = [d.median()]
    elif fn in ("renyi", "tsallis"):
        q = _need(args, "order")
        arguments = [q]
        values = [props.renyi_entropy(d, q) if fn == "renyi" else props.tsallis_entropy(d, q)]
    elif fn == "moment":
        r = _need(args, "r")
        arguments = [r]
        values = [props.fractional_moment(d, r)]
    elif fn == "bowley":
        values = [props.bowley_skewness(d)]
    elif fn == "moors":
        values = [props.moors_kurtosis(d)]
    elif fn in ("order_pdf", "order_cdf"):
        r, m = _need(args, "r"), _need(args, "n")
        if r != int(r):
            raise UsageError("--r must be an integer rank for order statistics")
        spec = props.OrderStatSpec(int(r), m)
        arguments = _need(args, "x")
        f = props.order_stat_pdf if fn == "order_pdf" else props.order_stat_cdf
        values = np.atleast_1d(f(d, spec, arguments))
    else:  # sample
        n = _need(args, "n")
        values = sample_cel(d, n, SeededStream(args.seed))
    return {"fn": fn, "theta": d.theta, "arguments": arguments, "values": [float(v) for v in values]}


COMMANDS = {"fit": cmd_fit, "compare": cmd_compare, "simulate": cmd_simulate, "eval": cmd_eval}


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        parser = build_parser(_default_seed())
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse: 0 for --help, 2 for bad usage
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    flags = {k: v for k, v in vars(args).items()}
    inputs = {"flags": flags, "argv": argv}
    try:
        results = COMMANDS[args.command](args, inputs)
        doc = ReportDocument(args.command, inputs, results)
        text = doc.to_json()
        if args.out:
            _write(args.out, text)
        else:
            sys.stdout.write(text)
        if args.csv:
            _write(args.csv, rows_to_csv(*report_rows(args.command, doc.plain()["results"])))
    except (UsageError, DomainError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, BracketError, FloatingPointError, OverflowError, ZeroDivisionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except Exception as exc:  # keep the documented exit codes even for unforeseen failures
        log.exception("unexpected failure")
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main_exit():
    sys.exit(main())
