"""Machine-readable reports: the JSON document, its schema and flat CSV tables.

Floats are written with 17 significant digits, which round-trips every
double exactly.  JSON has no literal for infinities or NaN, so non-finite
values are written as the strings ``"Infinity"``, ``"-Infinity"`` and
``"NaN"`` and turned back into floats when a document is read.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources

import numpy as np

__all__ = [
    "SCHEMA_VERSION",
    "ReportDocument",
    "format_float",
    "dumps",
    "load_schema",
    "rows_to_csv",
    "report_rows",
]

SCHEMA_VERSION = "1.0"
_NONFINITE = {"Infinity": math.inf, "-Infinity": -math.inf, "NaN": math.nan}


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    # keep floats distinguishable from integers so that -0.0 survives a round trip
    return s if any(c in s for c in ".en") else s + ".0"


def _encode(obj, indent, level, out):
    pad = " " * (indent * (level + 1)) if indent else ""
    end = " " * (indent * level) if indent else ""
    nl = "\n" if indent else ""
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append("null" if obj is None else ("true" if obj else "false"))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        s = format_float(obj)
        out.append(s if math.isfinite(float(obj)) else json.dumps(s))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{" + nl)
        for i, (k, v) in enumerate(obj.items()):
            out.append(pad + json.dumps(str(k), ensure_ascii=False) + ": ")
            _encode(v, indent, level + 1, out)
            out.append(("," if i < len(obj) - 1 else "") + nl)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        out.append("[" + nl)
        for i, v in enumerate(seq):
            out.append(pad)
            _encode(v, indent, level + 1, out)
            out.append(("," if i < len(seq) - 1 else "") + nl)
        out.append(end + "]")
    elif hasattr(obj, "to_dict"):
        _encode(obj.to_dict(), indent, level, out)
    elif hasattr(obj, "value"):  # enums
        _encode(obj.value, indent, level, out)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    out: list[str] = []
    _encode(obj, indent, 0, out)
    return "".join(out)


def _decode_nonfinite(obj):
    if isinstance(obj, str) and obj in _NONFINITE:
        return _NONFINITE[obj]
    if isinstance(obj, list):
        return [_decode_nonfinite(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _decode_nonfinite(v) for k, v in obj.items()}
    return obj


def _now() -> str:
    """UTC timestamp; ``SOURCE_DATE_EPOCH`` pins it for reproducible output."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH", "").strip()
    if epoch:
        try:
            return datetime.fromtimestamp(int(epoch), timezone.utc).isoformat(timespec="seconds")
        except (ValueError, OverflowError, OSError):
            pass
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class ReportDocument:
    """Envelope for every CLI result.

    ``inputs`` echoes the command-line flags (``flags``), the raw argument
    vector (``argv``) and, when a dataset was read, its path, size and
    checksum (``dataset``).
    """

    command: str
    inputs: dict
    results: object
    schema_version: str = SCHEMA_VERSION
    generated_at: str = field(default_factory=_now)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "generated_at": self.generated_at,
            "inputs": self.inputs,
            "results": self.results,
        }

    def to_json(self, indent: int = 2) -> str:
        return dumps(self, indent) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        d = _decode_nonfinite(json.loads(text))
        return cls(
            command=d["command"],
            inputs=d["inputs"],
            results=d["results"],
            schema_version=d["schema_version"],
            generated_at=d["generated_at"],
        )

    def plain(self) -> dict:
        """The document as plain JSON-compatible Python objects."""
        return _decode_nonfinite(json.loads(self.to_json()))


def load_schema() -> dict:
    text = (resources.files("celdist") / "data" / "report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    return str(v)


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


_GOF_COLUMNS = (
    "family", "k", "n", "p1", "p2", "neg2ll", "aic", "bic", "aicc",
    "ks_stat", "ks_pvalue", "pvalue_method", "bootstrap_pvalue", "failed", "error",
)
_SIM_COLUMNS = (
    "n", "replications", "theta", "bias", "mse", "variance", "variance_population",
    "mean_estimate", "mc_standard_error", "failures",
)
_FIT_COLUMNS = (
    "family", "p1", "p2", "log_likelihood", "neg2ll", "std_error", "ci_lower", "ci_upper",
    "alpha", "n", "iterations", "converged",
)


def report_rows(command: str, results) -> tuple[tuple, list]:
    """Flatten a command's results into (header, rows) for CSV output."""
    if command == "compare":
        rows = []
        for r in results["rows"]:
            est = list(r["estimates"]) + [None, None]
            rows.append([r["family"], r["k"], r["n"], est[0], est[1]] + [r[c] for c in _GOF_COLUMNS[5:]])
        return _GOF_COLUMNS, rows
    if command == "simulate":
        return _SIM_COLUMNS, [[s[c] for c in _SIM_COLUMNS] for s in results["summaries"]]
    if command == "fit":
        est = list(results["estimates"]) + [None, None]
        row = [results["family"], est[0], est[1]] + [results[c] for c in _FIT_COLUMNS[3:]]
        return _FIT_COLUMNS, [row]
    if command == "eval":
        vals = results["values"]
        args = results.get("arguments") or [None] * len(vals)
        return ("argument", "value"), [[a, v] for a, v in zip(args, vals)]
    raise ValueError(f"no CSV layout for command {command!r}")
