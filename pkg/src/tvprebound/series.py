"""Dated scalar series, CSV ingestion and the transforms applied before estimation.

Everything here is immutable: transforms return new :class:`TimeSeries`
objects and never touch their inputs.
"""
from __future__ import annotations

import csv
import enum
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exceptions import DataError, IngestionError

__all__ = [
    "Frequency",
    "Period",
    "TimeSeries",
    "Dataset",
    "load_csv",
    "write_csv",
    "align",
    "log_transform",
    "deflate",
    "to_quarterly",
    "hamilton_filter",
    "hamilton_defaults",
    "ccf",
    "CcfResult",
]


class Frequency(str, enum.Enum):
    MONTHLY = "monthly"
    QUARTERLY = "quarterly"

    @property
    def periods_per_year(self) -> int:
        return 12 if self is Frequency.MONTHLY else 4


_MONTHLY_RE = re.compile(r"^(\d{4})-(\d{1,2})$")
_QUARTERLY_RE = re.compile(r"^(\d{4})[Qq]([1-4])$")


@dataclass(frozen=True)
class Period:
    """A calendar month or quarter.

    Periods of the same frequency are totally ordered; comparing a month with
    a quarter raises ``TypeError``.
    """

    year: int
    subperiod: int
    frequency: Frequency

    def __post_init__(self):
        object.__setattr__(self, "frequency", Frequency(self.frequency))
        n = self.frequency.periods_per_year
        if not 1 <= self.subperiod <= n:
            raise ValueError(
                f"subperiod {self.subperiod} out of range 1..{n} for {self.frequency.value}"
            )

    @classmethod
    def parse(cls, text: str, frequency: Frequency | str | None = None) -> "Period":
        """Parse ``YYYY-MM`` or ``YYYYQq``; optionally insist on a frequency."""
        text = text.strip()
        m = _MONTHLY_RE.match(text)
        if m:
            per = cls(int(m.group(1)), int(m.group(2)), Frequency.MONTHLY)
        else:
            m = _QUARTERLY_RE.match(text)
            if not m:
                raise ValueError(f"unparseable date {text!r} (expected YYYY-MM or YYYYQq)")
            per = cls(int(m.group(1)), int(m.group(2)), Frequency.QUARTERLY)
        if frequency is not None and per.frequency is not Frequency(frequency):
            raise ValueError(f"date {text!r} is not {Frequency(frequency).value}")
        return per

    @property
    def ordinal(self) -> int:
        return self.year * self.frequency.periods_per_year + self.subperiod - 1

    @classmethod
    def from_ordinal(cls, ordinal: int, frequency: Frequency) -> "Period":
        n = Frequency(frequency).periods_per_year
        return cls(ordinal // n, ordinal % n + 1, frequency)

    def __add__(self, k: int) -> "Period":
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        return Period.from_ordinal(self.ordinal + int(k), self.frequency)

    def __sub__(self, other):
        if isinstance(other, Period):
            self._check(other)
            return self.ordinal - other.ordinal
        if isinstance(other, (int, np.integer)):
            return self + (-int(other))
        return NotImplemented

    def _check(self, other: "Period"):
        if not isinstance(other, Period):
            raise TypeError(f"cannot compare Period with {type(other).__name__}")
        if other.frequency is not self.frequency:
            raise TypeError("cannot order periods of different frequencies")

    def __lt__(self, other):
        self._check(other)
        return self.ordinal < other.ordinal

    def __le__(self, other):
        self._check(other)
        return self.ordinal <= other.ordinal

    def __gt__(self, other):
        self._check(other)
        return self.ordinal > other.ordinal

    def __ge__(self, other):
        self._check(other)
        return self.ordinal >= other.ordinal

    def quarter(self) -> "Period":
        if self.frequency is Frequency.QUARTERLY:
            return self
        return Period(self.year, (self.subperiod - 1) // 3 + 1, Frequency.QUARTERLY)

    def __str__(self):
        if self.frequency is Frequency.MONTHLY:
            return f"{self.year:04d}-{self.subperiod:02d}"
        return f"{self.year:04d}Q{self.subperiod}"


@dataclass(frozen=True)
class TimeSeries:
    name: str
    frequency: Frequency
    start: Period
    values: np.ndarray = field(repr=False)
    unit: str = ""

    def __post_init__(self):
        object.__setattr__(self, "frequency", Frequency(self.frequency))
        vals = np.array(self.values, dtype=float).ravel()
        if vals.size < 1:
            raise DataError(f"series {self.name!r} is empty")
        bad = np.flatnonzero(~np.isfinite(vals))
        if bad.size:
            raise DataError(f"series {self.name!r} has non-finite value at index {bad[0]}")
        if self.start.frequency is not self.frequency:
            raise DataError(f"series {self.name!r}: start {self.start} does not match {self.frequency.value}")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.size

    @property
    def end(self) -> Period:
        return self.start + (len(self) - 1)

    def periods(self) -> list[Period]:
        return [self.start + i for i in range(len(self))]

    def index_of(self, period: Period) -> int:
        i = period - self.start
        if not 0 <= i < len(self):
            raise DataError(f"{period} outside span {self.start}..{self.end} of {self.name!r}")
        return i

    def slice(self, first: Period, last: Period) -> "TimeSeries":
        i, j = self.index_of(first), self.index_of(last)
        return self.replace(values=self.values[i : j + 1], start=first)

    def replace(self, **changes) -> "TimeSeries":
        kw = dict(name=self.name, frequency=self.frequency, start=self.start,
                  values=self.values, unit=self.unit)
        kw.update(changes)
        return TimeSeries(**kw)


@dataclass(frozen=True)
class Dataset:
    """T x K panel, columns in identification order."""

    variables: tuple[TimeSeries, ...]

    def __post_init__(self):
        vs = tuple(self.variables)
        if not vs:
            raise DataError("dataset needs at least one variable")
        first = vs[0]
        for v in vs[1:]:
            if (v.frequency, v.start, len(v)) != (first.frequency, first.start, len(first)):
                raise DataError(
                    f"series {v.name!r} not aligned with {first.name!r}; use align() first"
                )
        object.__setattr__(self, "variables", vs)

    @classmethod
    def from_matrix(cls, matrix, names: Sequence[str], start: Period) -> "Dataset":
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[1] != len(names):
            raise DataError("matrix must be T x K with one name per column")
        return cls(tuple(TimeSeries(n, start.frequency, start, m[:, k]) for k, n in enumerate(names)))

    @property
    def matrix(self) -> np.ndarray:
        return np.column_stack([v.values for v in self.variables])

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    @property
    def start(self) -> Period:
        return self.variables[0].start

    @property
    def end(self) -> Period:
        return self.variables[0].end

    @property
    def frequency(self) -> Frequency:
        return self.variables[0].frequency

    @property
    def T(self) -> int:
        return len(self.variables[0])

    @property
    def K(self) -> int:
        return len(self.variables)

    def head(self, n: int) -> "Dataset":
        return Dataset.from_matrix(self.matrix[:n], self.names, self.start)

    def column(self, name: str) -> TimeSeries:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)


def align(series: Iterable[TimeSeries]) -> Dataset:
    """Trim series to their common span and stack them in the given order."""
    series = list(series)
    if not series:
        raise DataError("nothing to align")
    freq = series[0].frequency
    if any(s.frequency is not freq for s in series):
        raise DataError("cannot align series of different frequencies")
    first = max(s.start for s in series)
    last = min(s.end for s in series)
    if last < first:
        raise DataError("series do not overlap")
    return Dataset(tuple(s.slice(first, last) for s in series))


# -- ingestion ---------------------------------------------------------------

def load_csv(path, schema: Mapping[str, str] | None = None, *, date_column: str = "date",
             frequency: Frequency | str | None = None) -> list[TimeSeries]:
    """Read a dated CSV into one series per mapped value column.

    ``schema`` maps series names to CSV column headers; by default every
    non-date column becomes a series of the same name.  Missing cells, gaps
    and duplicated dates are refused rather than repaired.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        if date_column not in header:
            raise IngestionError(f"{path}: no date column {date_column!r} in header {header}")
        if schema is None:
            schema = {c: c for c in header if c != date_column}
        if not schema:
            raise IngestionError(f"{path}: schema names no value columns")
        missing = [c for c in schema.values() if c not in header]
        if missing:
            raise IngestionError(f"{path}: columns {missing} not in header")
        dates: list[Period] = []
        cols: dict[str, list[float]] = {name: [] for name in schema}
        for rowno, row in enumerate(reader, start=2):
            try:
                per = Period.parse(row[date_column] or "", frequency)
            except ValueError as exc:
                raise IngestionError(f"{path}, row {rowno}: {exc}") from None
            if dates:
                if per.frequency is not dates[0].frequency:
                    raise IngestionError(f"{path}, row {rowno}: mixed date frequencies")
                step = per - dates[-1]
                if step == 0:
                    raise IngestionError(f"{path}, row {rowno}: duplicate date {per}")
                if step != 1:
                    raise IngestionError(f"{path}, row {rowno}: date gap or disorder between {dates[-1]} and {per}")
            dates.append(per)
            for name, col in schema.items():
                cell = (row.get(col) or "").strip()
                if not cell:
                    raise IngestionError(f"{path}, row {rowno}: missing value in column {col!r}")
                try:
                    x = float(cell)
                except ValueError:
                    raise IngestionError(f"{path}, row {rowno}: non-numeric value {cell!r} in column {col!r}") from None
                if not math.isfinite(x):
                    raise IngestionError(f"{path}, row {rowno}: non-finite value in column {col!r}")
                cols[name].append(x)
    if not dates:
        raise IngestionError(f"{path}: no data rows")
    return [TimeSeries(name, dates[0].frequency, dates[0], np.array(v)) for name, v in cols.items()]


def write_csv(path, data: Dataset | Sequence[TimeSeries], *, date_column: str = "date",
              fmt: str = "%.17g") -> None:
    """Write aligned series in the layout :func:`load_csv` reads."""
    if not isinstance(data, Dataset):
        data = Dataset(tuple(data))
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([date_column, *data.names])
        for i, row in enumerate(data.matrix):
            w.writerow([str(data.start + i), *(fmt % x for x in row)])


# -- transforms --------------------------------------------------------------

def log_transform(s: TimeSeries) -> TimeSeries:
    bad = np.flatnonzero(s.values <= 0)
    if bad.size:
        raise DataError(f"log of nonpositive value in {s.name!r} at index {bad[0]} ({s.start + int(bad[0])})")
    return s.replace(name=f"{s.name}_log", values=np.log(s.values))


def deflate(nominal: TimeSeries, price_index: TimeSeries, base: Period) -> TimeSeries:
    """Real series in base-period prices: ``nominal * index[base] / index``."""
    if nominal.frequency is not price_index.frequency:
        raise DataError("nominal series and price index differ in frequency")
    if base.frequency is not price_index.frequency:
        raise DataError(f"base period {base} does not match index frequency")
    if not price_index.start <= base <= price_index.end:
        raise DataError(f"base period {base} outside index span {price_index.start}..{price_index.end}")
    if np.any(price_index.values <= 0):
        raise DataError("price index must be strictly positive")
    first = max(nominal.start, price_index.start)
    last = min(nominal.end, price_index.end)
    if last < first:
        raise DataError("nominal series and price index do not overlap")
    nom = nominal.slice(first, last).values
    idx = price_index.slice(first, last).values
    base_value = price_index.values[price_index.index_of(base)]
    return nominal.replace(name=f"{nominal.name}_real", start=first, values=nom * base_value / idx)


_AGGREGATORS = {
    "mean": lambda blk: blk.mean(axis=1),
    "sum": lambda blk: blk.sum(axis=1),
    "last": lambda blk: blk[:, -1],
}


def to_quarterly(s: TimeSeries, method: str = "mean") -> TimeSeries:
    """Aggregate a monthly series to complete quarters; partial edge quarters are dropped."""
    if s.frequency is not Frequency.MONTHLY:
        raise DataError(f"{s.name!r} is not monthly")
    try:
        agg = _AGGREGATORS[method]
    except KeyError:
        raise ValueError(f"unknown aggregation {method!r}; choose from {sorted(_AGGREGATORS)}") from None
    lead = (-(s.start.subperiod - 1)) % 3
    n_q = (len(s) - lead) // 3
    if n_q < 1:
        raise DataError(f"{s.name!r} spans no complete quarter")
    blk = s.values[lead : lead + 3 * n_q].reshape(n_q, 3)
    return s.replace(frequency=Frequency.QUARTERLY, start=(s.start + lead).quarter(), values=agg(blk))


def hamilton_defaults(frequency: Frequency | str) -> tuple[int, int]:
    """(h, p) from Hamilton's recommendation: two years ahead, one year of lags."""
    return (24, 12) if Frequency(frequency) is Frequency.MONTHLY else (8, 4)


def hamilton_filter(s: TimeSeries, h: int | None = None, p: int | None = None) -> TimeSeries:
    """Cyclical component from the regression of s[t] on 1, s[t-h], ..., s[t-h-p+1].

    The returned series starts ``h + p - 1`` periods after ``s``.  The fit is a
    projection, so rank-deficient designs (e.g. an exact linear trend, whose
    lags are collinear) still give a unique residual; only a design that
    degenerates to the constant alone is rejected.
    """
    dh, dp = hamilton_defaults(s.frequency)
    h = dh if h is None else int(h)
    p = dp if p is None else int(p)
    if h < 1 or p < 1:
        raise ValueError("h and p must be >= 1")
    x = s.values
    n = x.size
    first = h + p - 1
    if n <= h + p:
        raise DataError(f"{s.name!r}: length {n} too short for Hamilton filter with h={h}, p={p}")
    X = np.empty((n - first, p + 1))
    X[:, 0] = 1.0
    for k in range(p):
        X[:, k + 1] = x[first - h - k : n - h - k]
    y = x[first:]
    # scale columns so the rank test is not fooled by level
    scale = np.maximum(np.abs(X).max(axis=0), np.finfo(float).tiny)
    coef, _, rank, _ = np.linalg.lstsq(X / scale, y, rcond=None)
    if rank < 2:
        raise DataError(
            f"{s.name!r}: Hamilton regressors exactly collinear with the constant (no variation in lags)"
        )
    cycle = y - (X / scale) @ coef
    return s.replace(name=f"{s.name}_cycle", start=s.start + first, values=cycle)


# -- diagnostics -------------------------------------------------------------

@dataclass(frozen=True)
class CcfResult:
    lags: np.ndarray
    coefficients: np.ndarray
    band: float

    def __iter__(self):
        return iter(zip(self.lags.tolist(), self.coefficients.tolist()))

    def __getitem__(self, lag: int) -> float:
        return float(self.coefficients[int(lag) + (self.lags.size - 1) // 2])


def ccf(x: TimeSeries | np.ndarray, y: TimeSeries | np.ndarray, max_lag: int) -> CcfResult:
    """Sample cross-correlation ``corr(x[t], y[t + lag])`` for lag in -max_lag..max_lag.

    Uses the biased (1/n) autocovariance convention, so every coefficient lies
    in [-1, 1]; ``band`` is the ±2/sqrt(n) significance level.
    """
    if isinstance(x, TimeSeries) and isinstance(y, TimeSeries):
        if x.frequency is not y.frequency or x.start != y.start or len(x) != len(y):
            raise DataError("ccf needs aligned series")
    xv = np.asarray(getattr(x, "values", x), dtype=float)
    yv = np.asarray(getattr(y, "values", y), dtype=float)
    if xv.shape != yv.shape or xv.ndim != 1:
        raise DataError("ccf needs two 1-d series of equal length")
    n = xv.size
    if not 0 <= max_lag < n:
        raise ValueError("max_lag must be in [0, n)")
    xd = xv - xv.mean()
    yd = yv - yv.mean()
    sx = np.sqrt(xd @ xd / n)
    sy = np.sqrt(yd @ yd / n)
    if sx == 0 or sy == 0:
        raise DataError("ccf undefined for a zero-variance series")
    lags = np.arange(-max_lag, max_lag + 1)
    out = np.empty(lags.size)
    for i, lag in enumerate(lags):
        if lag >= 0:
            c = xd[: n - lag] @ yd[lag:]
        else:
            c = xd[-lag:] @ yd[: n + lag]
        out[i] = c / n / (sx * sy)
    return CcfResult(lags, np.clip(out, -1.0, 1.0), 2.0 / np.sqrt(n))
