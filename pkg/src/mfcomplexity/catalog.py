"""Event catalogs: CSV ingestion, phase splitting and reduction to frequency
and energy-weighted box-count distributions on the time axis."""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import CatalogError, DomainError
from .multifractal import PartitionDistribution, box_counting

# Seismological energy-magnitude slope: log10 E = 1.5 M + const.
DEFAULT_ENERGY_EXPONENT = 1.5

_OPTIONAL_COLUMNS = ("lon", "lat", "depth_km")


@dataclass(frozen=True, eq=False)
class EventCatalog:
    """Events sorted by time (seconds since the epoch).

    Missing magnitudes are NaN. The arrays are read-only; construction sorts
    them with a stable sort, so equal times keep their input order.
    """

    times: np.ndarray
    magnitudes: np.ndarray
    lon: Optional[np.ndarray] = None
    lat: Optional[np.ndarray] = None
    depth_km: Optional[np.ndarray] = None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float).reshape(-1)
        m = np.asarray(self.magnitudes, dtype=float).reshape(-1)
        if t.size != m.size:
            raise CatalogError("times and magnitudes differ in length")
        if not np.all(np.isfinite(t)):
            raise CatalogError("event times must be finite")
        order = np.argsort(t, kind="stable")
        columns = {"times": t, "magnitudes": m}
        for name in _OPTIONAL_COLUMNS:
            col = getattr(self, name)
            if col is not None:
                col = np.asarray(col, dtype=float).reshape(-1)
                if col.size != t.size:
                    raise CatalogError(f"column {name!r} differs in length")
                columns[name] = col
        for name, col in columns.items():
            col = col[order]
            col.flags.writeable = False
            object.__setattr__(self, name, col)

    def __len__(self) -> int:
        return self.times.size

    @property
    def start(self) -> float:
        self._require_events()
        return float(self.times[0])

    @property
    def end(self) -> float:
        self._require_events()
        return float(self.times[-1])

    @property
    def span(self) -> float:
        return self.end - self.start

    def _require_events(self):
        if self.times.size == 0:
            raise CatalogError("catalog is empty")

    def subset(self, mask) -> "EventCatalog":
        opt = {n: getattr(self, n) for n in _OPTIONAL_COLUMNS}
        opt = {n: (None if v is None else v[mask]) for n, v in opt.items()}
        return EventCatalog(self.times[mask], self.magnitudes[mask], **opt)


# ---------------------------------------------------------------------------
# parsing


def parse_time(text: str) -> float:
    """Epoch seconds from a number or an ISO-8601 string (naive means UTC)."""
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _read_text(source) -> str:
    if hasattr(source, "read"):
        data = source.read()
    else:
        try:
            with open(os.fspath(source), "rb") as fh:
                data = fh.read()
        except OSError as exc:
            raise CatalogError(f"cannot read catalog {os.fspath(source)!r}: {exc.strerror}") from exc
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise CatalogError(f"catalog is not valid UTF-8: {exc}") from exc
    return data


def parse_catalog(
    source,
    time_column: str = "time",
    magnitude_column: str = "magnitude",
    time_format: str = "auto",
) -> EventCatalog:
    """Read a catalog CSV from a path or a (byte or text) stream.

    A header row is required. ``time_format`` is ``"epoch"``, ``"iso"`` or
    ``"auto"``; auto treats the column as epoch seconds when every cell is
    numeric and as ISO-8601 otherwise. Empty magnitude cells are kept as
    missing; any other unparseable cell raises :class:`CatalogError` naming
    its line.
    """
    if time_format not in ("auto", "epoch", "iso"):
        raise CatalogError(f"unknown time format {time_format!r}")
    reader = csv.reader(io.StringIO(_read_text(source)))
    header = next(reader, None)
    if header is None or not any(h.strip() for h in header):
        raise CatalogError("catalog is empty")
    names = [h.strip().lower() for h in header]
    wanted = {"time": time_column.lower(), "magnitude": magnitude_column.lower()}
    missing = [v for v in wanted.values() if v not in names]
    if missing:
        raise CatalogError(f"catalog is missing required columns {missing}")
    index = {key: names.index(col) for key, col in wanted.items()}
    for name in _OPTIONAL_COLUMNS:
        if name in names:
            index[name] = names.index(name)

    rows: List[Tuple[int, List[str]]] = []
    for row in reader:
        if not any(cell.strip() for cell in row):
            continue
        if len(row) < len(names):
            raise CatalogError(f"line {reader.line_num}: expected {len(names)} fields, got {len(row)}")
        rows.append((reader.line_num, row))
    if not rows:
        raise CatalogError("catalog has no events")

    time_cells = [row[index["time"]].strip() for _, row in rows]
    if time_format == "auto":
        time_format = "epoch" if all(_is_number(c) for c in time_cells) else "iso"

    columns = {key: np.empty(len(rows)) for key in index}
    for k, ((line, row), tcell) in enumerate(zip(rows, time_cells)):
        try:
            t = float(tcell) if time_format == "epoch" else parse_time(tcell)
        except ValueError:
            raise CatalogError(f"line {line}: unparseable time {tcell!r}") from None
        if not math.isfinite(t):
            raise CatalogError(f"line {line}: non-finite time {tcell!r}")
        columns["time"][k] = t
        for key in index:
            if key == "time":
                continue
            cell = row[index[key]].strip()
            if not cell:
                columns[key][k] = np.nan
                continue
            try:
                columns[key][k] = float(cell)
            except ValueError:
                raise CatalogError(f"line {line}: bad {key} value {cell!r}") from None
    opt = {n: columns.get(n) for n in _OPTIONAL_COLUMNS}
    return EventCatalog(columns["time"], columns["magnitude"], **opt)


# ---------------------------------------------------------------------------
# phases


def phase_label(i: int) -> str:
    """A, B, ..., Z, then P27, P28, ..."""
    return chr(ord("A") + i) if i < 26 else f"P{i + 1}"


@dataclass(frozen=True, eq=False)
class PhaseSplit:
    boundaries: Tuple[float, ...]
    phases: Tuple[EventCatalog, ...]

    @property
    def labels(self) -> List[str]:
        return [phase_label(i) for i in range(len(self.phases))]

    @property
    def empty_phases(self) -> List[int]:
        return [i for i, ph in enumerate(self.phases) if len(ph) == 0]

    def counts(self) -> List[int]:
        return [len(ph) for ph in self.phases]


def split_phases(c: EventCatalog, boundaries: Sequence[float] = ()) -> PhaseSplit:
    """Cut the catalog at ``boundaries``; an event on a cut goes to the later
    phase. Empty phases are allowed and listed in ``empty_phases``."""
    b = np.asarray(boundaries, dtype=float).reshape(-1)
    if not np.all(np.isfinite(b)):
        raise CatalogError("phase boundaries must be finite")
    if np.any(np.diff(b) <= 0):
        raise CatalogError("phase boundaries must be strictly increasing")
    # side="left": an event equal to a cut starts the later phase
    cuts = np.concatenate(([0], np.searchsorted(c.times, b, side="left"), [len(c)]))
    phases = tuple(c.subset(slice(lo, hi)) for lo, hi in zip(cuts[:-1], cuts[1:]))
    return PhaseSplit(tuple(b.tolist()), phases)


# ---------------------------------------------------------------------------
# box counting on the time axis


def energy_weights(magnitudes, energy_exponent: float = DEFAULT_ENERGY_EXPONENT) -> np.ndarray:
    """Relative energies ``10**(b*M)``, scaled by the largest so they never
    overflow; the scale cancels once box sums are normalized."""
    m = np.asarray(magnitudes, dtype=float)
    if np.any(np.isnan(m)):
        raise CatalogError(f"{int(np.isnan(m).sum())} event(s) lack a magnitude")
    if not np.all(np.isfinite(m)):
        raise CatalogError("magnitudes must be finite")
    b = float(energy_exponent)
    if not math.isfinite(b):
        raise CatalogError("energy exponent must be finite")
    return 10.0 ** (b * (m - m.max()))


def _partition(c, epsilon, weights, origin, n_boxes, min_count) -> PartitionDistribution:
    if len(c) < 2:
        raise CatalogError("box counting needs at least two events")
    if not epsilon > 0:
        raise DomainError("box width must be positive")
    origin = c.start if origin is None else float(origin)
    return box_counting(c.times, epsilon, origin, weights, n_boxes, min_count)


def frequency_partition(
    c: EventCatalog,
    epsilon: float,
    origin: Optional[float] = None,
    n_boxes: Optional[int] = None,
    min_count: int = 1,
) -> PartitionDistribution:
    """Event counts per width-``epsilon`` time box, normalized.

    Boxes are anchored at ``origin`` (default: the first event). With
    ``n_boxes`` set, events at or past the last edge join the last box.
    """
    return _partition(c, epsilon, None, origin, n_boxes, min_count)


def energy_partition(
    c: EventCatalog,
    epsilon: float,
    energy_exponent: float = DEFAULT_ENERGY_EXPONENT,
    origin: Optional[float] = None,
    n_boxes: Optional[int] = None,
    min_count: int = 1,
) -> PartitionDistribution:
    """Released energy per time box, normalized; each event weighs
    ``10**(energy_exponent * M)``. ``min_count`` filters on event counts."""
    if len(c) < 2:
        raise CatalogError("box counting needs at least two events")
    w = energy_weights(c.magnitudes, energy_exponent)
    return _partition(c, epsilon, w, origin, n_boxes, min_count)


def dyadic_partitions(
    c: EventCatalog,
    levels: Sequence[int],
    energy_exponent: Optional[float] = None,
    min_count: int = 1,
    origin: Optional[float] = None,
    span: Optional[float] = None,
) -> List[PartitionDistribution]:
    """Partitions at ``epsilon_j = span * 2**-j`` for each level ``j``.

    The lattice covers ``[origin, origin + span]`` (default: first to last
    event) with exactly ``2**j`` boxes. ``energy_exponent=None`` gives the
    frequency partitions, a number the energy-weighted ones.
    """
    if len(c) < 2:
        raise CatalogError("box counting needs at least two events")
    origin = c.start if origin is None else float(origin)
    span = c.end - origin if span is None else float(span)
    if not span > 0:
        raise CatalogError("events span zero time; no scale window exists")
    w = None if energy_exponent is None else energy_weights(c.magnitudes, energy_exponent)
    out = []
    for j in levels:
        j = int(j)
        if j < 0:
            raise DomainError(f"dyadic level must be >= 0, got {j}")
        out.append(_partition(c, span * 2.0 ** -j, w, origin, 2 ** j, min_count))
    return out
