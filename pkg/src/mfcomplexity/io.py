"""Readers for distribution files and byte-stable CSV / JSON writers.

Floats are written with ``repr`` (shortest round-trip form), so identical
inputs give identical bytes. Missing values are empty CSV cells or JSON
``null``. Every file is written to a temporary sibling and then renamed
into place.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from typing import Iterable, List, Sequence

import numpy as np

from .binned import BinnedDensity
from .complexity import ComplexityMap
from .errors import DomainError, InputError
from .info_measures import ProbDist
from .multifractal import DimensionCurve
from .simplex import FieldResult


def _read_lines(path) -> List[str]:
    try:
        with open(os.fspath(path), "r", encoding="utf-8-sig", newline="") as fh:
            return fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {os.fspath(path)!r}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{os.fspath(path)!r} is not valid UTF-8") from exc


def _cell_float(cell: str, path, line: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise InputError(f"{os.fspath(path)}:{line}: not a number: {cell.strip()!r}") from None


def read_distribution(path) -> ProbDist:
    """Weights given one per line or as a single comma-separated row."""
    values = []
    for line, text in enumerate(_read_lines(path), 1):
        cells = [c for c in text.split(",") if c.strip()]
        values.extend(_cell_float(c, path, line) for c in cells)
    if not values:
        raise InputError(f"{os.fspath(path)}: no weights found")
    try:
        return ProbDist(values)
    except DomainError as exc:
        raise InputError(f"{os.fspath(path)}: {exc}") from None


BINNED_COLUMNS = ("bin_left_edge", "bin_right_edge", "probability")


def read_binned(path) -> BinnedDensity:
    """Binned density from a CSV with a ``bin_left_edge, bin_right_edge,
    probability`` header."""
    rows = list(csv.reader(_read_lines(path)))
    if not rows:
        raise InputError(f"{os.fspath(path)}: empty file")
    header = [h.strip().lower() for h in rows[0]]
    if any(c not in header for c in BINNED_COLUMNS):
        raise InputError(f"{os.fspath(path)}: header must contain {', '.join(BINNED_COLUMNS)}")
    idx = [header.index(c) for c in BINNED_COLUMNS]
    left, right, probs = [], [], []
    for line, row in enumerate(rows[1:], 2):
        if not any(c.strip() for c in row):
            continue
        if len(row) < len(header):
            raise InputError(f"{os.fspath(path)}:{line}: expected {len(header)} fields")
        a, b, p = (_cell_float(row[i], path, line) for i in idx)
        left.append(a)
        right.append(b)
        probs.append(p)
    if not probs:
        raise InputError(f"{os.fspath(path)}: no bins found")
    try:
        return BinnedDensity(probs, np.subtract(right, left))
    except DomainError as exc:
        raise InputError(f"{os.fspath(path)}: {exc}") from None


# ---------------------------------------------------------------------------
# formatting


def fmt(x) -> str:
    """CSV cell for a number: repr of the float, empty when missing."""
    if x is None:
        return ""
    x = float(x)
    return "" if math.isnan(x) else repr(x)


def _json_num(x):
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=1, allow_nan=False) + "\n"


def curve_csv(curve: DimensionCurve) -> str:
    rows = zip(curve.q_grid, curve.values, curve.r_squared)
    return _csv_text(("q", "value", "r_squared"), ([fmt(a), fmt(b), fmt(c)] for a, b, c in rows))


def curve_json(curve: DimensionCurve) -> str:
    return _json_text(
        {
            "q": [_json_num(v) for v in curve.q_grid],
            "value": [_json_num(v) for v in curve.values],
            "r_squared": [_json_num(v) for v in curve.r_squared],
        }
    )


def map_csv(m: ComplexityMap) -> str:
    """Matrix with the beta grid as header row and the alpha grid as first
    column; the corner cell reads ``alpha\\beta``."""
    header = ["alpha\\beta"] + [fmt(b) for b in m.beta_grid]
    rows = ([fmt(a)] + [fmt(v) for v in row] for a, row in zip(m.alpha_grid, m.values))
    return _csv_text(header, rows)


def map_json(m: ComplexityMap) -> str:
    return _json_text(
        {
            "alpha": [_json_num(v) for v in m.alpha_grid],
            "beta": [_json_num(v) for v in m.beta_grid],
            "values": [[_json_num(v) for v in row] for row in m.values],
        }
    )


def field_csv(f: FieldResult) -> str:
    pts = f.grid.points
    rows = ([fmt(a), fmt(b), fmt(c), fmt(v)] for (a, b, c), v in zip(pts, f.values))
    return _csv_text(("p1", "p2", "p3", "value"), rows)


def field_json(f: FieldResult) -> str:
    pts = f.grid.points
    return _json_text(
        {
            "measure": f.measure,
            "resolution": f.grid.resolution,
            "p1": [_json_num(v) for v in pts[:, 0]],
            "p2": [_json_num(v) for v in pts[:, 1]],
            "p3": [_json_num(v) for v in pts[:, 2]],
            "value": [_json_num(v) for v in f.values],
        }
    )


def records_csv(header: Sequence[str], records: Iterable[Sequence]) -> str:
    """Rows whose float entries are formatted with :func:`fmt`."""
    rows = ([fmt(v) if isinstance(v, (float, np.floating)) else str(v) for v in r] for r in records)
    return _csv_text(header, rows)


def records_json(header: Sequence[str], records: Iterable[Sequence]) -> str:
    out = []
    for r in records:
        out.append(
            {k: (_json_num(v) if isinstance(v, (float, np.floating)) else v) for k, v in zip(header, r)}
        )
    return _json_text(out)


def write_atomic(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and ``os.replace``."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
