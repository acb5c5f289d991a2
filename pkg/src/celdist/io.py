"""Reading observation files.

A dataset is plain text with one value per line, or a single-column
``.csv`` file whose first data line may be a header.  Blank lines and lines
starting with ``#`` are skipped everywhere.
"""

from __future__ import annotations

import csv
import hashlib
import io
import os
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptyDatasetError, ParseError
from .fitting import Sample

__all__ = ["Dataset", "load_dataset", "parse_values", "checksum"]


@dataclass(frozen=True)
class Dataset:
    sample: Sample
    source_path: str
    checksum: str

    @property
    def n(self) -> int:
        return self.sample.n


def checksum(values) -> str:
    """64-bit BLAKE2b digest (16 hex digits) of the sorted values.

    Each value is rendered by ``repr(float(v))``, so the digest depends only
    on the numbers and not on how the file spelled or spaced them.
    """
    v = np.sort(np.asarray(values, dtype=float).ravel())
    canon = "\n".join(repr(float(a)) for a in v).encode("ascii")
    return hashlib.blake2b(canon, digest_size=8).hexdigest()


def _rows(text: str, is_csv: bool):
    if is_csv:
        for lineno, line in enumerate(text.splitlines(), 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            fields = [f.strip() for f in next(csv.reader(io.StringIO(s)))]
            while fields and not fields[-1]:
                fields.pop()
            if len(fields) != 1:
                raise ParseError(f"line {lineno}: expected a single column, got {len(fields)}", lineno)
            yield lineno, fields[0]
    else:
        for lineno, line in enumerate(text.splitlines(), 1):
            s = line.strip()
            if s and not s.startswith("#"):
                yield lineno, s


def parse_values(text: str, is_csv: bool = False, source: str = "<string>") -> np.ndarray:
    """Parse dataset text into an array in file order, without the positivity check."""
    out = []
    first = True
    for lineno, tok in _rows(text, is_csv):
        try:
            out.append(float(tok))
        except ValueError:
            if is_csv and first:
                first = False
                continue  # header
            raise ParseError(f"{source}, line {lineno}: cannot parse {tok!r} as a number", lineno) from None
        first = False
    if not out:
        raise EmptyDatasetError(f"{source}: no observations found")
    return np.array(out)


def load_dataset(path) -> Dataset:
    """Read, validate and fingerprint an observation file."""
    path = os.fspath(path) if not hasattr(path, "read_text") else path
    try:
        if hasattr(path, "read_text"):
            text = path.read_text(encoding="utf-8")
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not a UTF-8 text file ({exc.reason})") from None
    name = str(path)
    values = parse_values(text, is_csv=name.lower().endswith(".csv"), source=name)
    bad = values[~np.isfinite(values) | (values <= 0.0)]
    if bad.size:
        raise DomainError(f"{name}: observations must be finite and > 0; offending values: {bad.tolist()}")
    return Dataset(Sample(values, label=os.path.basename(name)), name, checksum(values))
