"""Date-specific impulse responses and rebound-effect tables from posterior draws."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .exceptions import DataError
from .sampler import TvpPosterior, lag_coefs
from .series import Frequency, Period
from .var import ShockSpec, propagate

__all__ = [
    "CycleDate",
    "DATE_SETS",
    "date_set",
    "IrfPosterior",
    "irf_at_date",
    "default_horizon",
    "rebound_path",
    "rebound_draws",
    "summarize",
    "ReboundColumn",
    "ReboundTable",
    "rebound_table",
    "write_irf_fans",
    "write_rebound_density",
    "IRF_PERCENTILES",
    "TABLE_PERCENTILES",
    "MAX_EXCLUDED_SHARE",
]

IRF_PERCENTILES = (17.0, 50.0, 83.0)
TABLE_PERCENTILES = (10.0, 50.0, 90.0)
MAX_EXCLUDED_SHARE = 0.10
REBOUND_YEARS = 5


@dataclass(frozen=True)
class CycleDate:
    label: str       # "peak" or "trough"
    period: Period

    def __post_init__(self):
        if self.label not in ("peak", "trough"):
            raise ValueError(f"cycle date label must be 'peak' or 'trough', got {self.label!r}")

    def __str__(self):
        return str(self.period)


def _dates(label, freq, texts):
    return tuple(CycleDate(label, Period.parse(t, freq)) for t in texts)


# NBER reference dates covered by the 1976-2024 sample.
DATE_SETS = {
    "paper-peaks-monthly": _dates("peak", Frequency.MONTHLY,
                                  ["1980-01", "1981-07", "1990-07", "2001-03", "2007-12", "2020-02"]),
    "paper-troughs-monthly": _dates("trough", Frequency.MONTHLY,
                                    ["1980-07", "1982-11", "1991-03", "2001-11", "2009-06", "2020-04"]),
    "paper-peaks-quarterly": _dates("peak", Frequency.QUARTERLY,
                                    ["1980Q1", "1981Q3", "1990Q3", "2001Q1", "2007Q4", "2019Q4"]),
    "paper-troughs-quarterly": _dates("trough", Frequency.QUARTERLY,
                                      ["1980Q3", "1982Q4", "1991Q1", "2001Q4", "2009Q2", "2020Q2"]),
}


def date_set(name: str) -> tuple[CycleDate, ...]:
    try:
        return DATE_SETS[name]
    except KeyError:
        raise KeyError(f"unknown date set {name!r}; known: {sorted(DATE_SETS)}") from None


def default_horizon(freq: Frequency) -> int:
    return 5 * Frequency(freq).periods_per_year


@dataclass(frozen=True)
class IrfPosterior:
    date: Period
    shock: ShockSpec
    responses: np.ndarray    # (n_draws, K, H + 1)
    valid: np.ndarray        # (n_draws,) bool; False for non-finite propagation
    names: tuple = ()
    unit: np.ndarray | None = None   # responses to a +1 SD shock; responses = scale * unit

    @property
    def H(self) -> int:
        return self.responses.shape[-1] - 1

    @property
    def n_excluded(self) -> int:
        return int((~self.valid).sum())

    def response(self, variable: int | None = None) -> np.ndarray:
        """Valid draws of one variable's (1-based) response path, (n_valid, H + 1).

        Defaults to the shocked variable's own response.
        """
        j = self.shock.variable if variable is None else variable
        return self.responses[self.valid, j - 1, :]

    def fan(self, variable: int | None = None, percentiles=IRF_PERCENTILES) -> np.ndarray:
        return summarize(self.response(variable), percentiles)


def irf_at_date(post: TvpPosterior, date: Period, H: int | None = None,
                shock: ShockSpec = ShockSpec()) -> IrfPosterior:
    """Responses to ``shock`` with every draw's parameters frozen at ``date``.

    The impact of draw d is column j of B_t^{-1} Sigma_t for that draw, so the
    shock is one of that draw's own date-t standard deviations.
    """
    t = post.index_of(date)
    K = post.spec.K
    if not 1 <= shock.variable <= K:
        raise ValueError(f"shock variable {shock.variable} out of range 1..{K}")
    H = default_horizon(date.frequency) if H is None else int(H)
    if H < 0:
        raise ValueError("H must be >= 0")
    A = lag_coefs(post.beta[:, t], post.spec)
    with np.errstate(over="ignore", invalid="ignore"):
        unit = propagate(A, post.impact(t)[:, :, shock.index], H)
        resp = shock.scale * unit
    valid = np.isfinite(resp).all(axis=(1, 2))
    return IrfPosterior(date, shock, resp, valid, tuple(post.names), unit)


def rebound_path(x, periods_per_year: int, years: int = REBOUND_YEARS) -> np.ndarray:
    """Rebound (%) at 1..years years: ``(1 - x[i * periods_per_year] / x[0]) * 100``."""
    x = np.asarray(x, dtype=float)
    if x.size <= years * periods_per_year:
        raise ValueError(f"response path needs at least {years * periods_per_year + 1} horizons")
    if not abs(x[0]) > 1e-12 * np.abs(x).max():
        raise DataError("immediate response is numerically zero; rebound undefined")
    idx = np.arange(1, years + 1) * periods_per_year
    return (1.0 - x[idx] / x[0]) * 100.0


def rebound_draws(paths, periods_per_year: int, years: int = REBOUND_YEARS):
    """Vectorised :func:`rebound_path` over draws; returns (values, ok mask)."""
    paths = np.asarray(paths, dtype=float)
    if paths.shape[-1] <= years * periods_per_year:
        raise ValueError(f"response paths need at least {years * periods_per_year + 1} horizons")
    x0 = paths[:, 0]
    ok = np.abs(x0) > 1e-12 * np.abs(paths).max(axis=1)
    idx = np.arange(1, years + 1) * periods_per_year
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = (1.0 - paths[:, idx] / x0[:, None]) * 100.0
    ok &= np.isfinite(vals).all(axis=1)
    return vals, ok


def summarize(values, percentiles: Sequence[float] = TABLE_PERCENTILES) -> np.ndarray:
    """Empirical percentiles (linear interpolation between order statistics) along axis 0."""
    v = np.asarray(values, dtype=float)
    if v.size == 0 or v.shape[0] == 0:
        raise ValueError("cannot summarize an empty sample")
    if v.shape[0] < 2:
        raise ValueError("need at least two draws to summarize")
    return np.percentile(v, list(percentiles), axis=0)


@dataclass
class ReboundColumn:
    date: CycleDate
    cells: np.ndarray | None          # (years, 3): median, p10, p90
    draws: np.ndarray | None = None   # (n_used, years)
    n_used: int = 0
    n_excluded: int = 0
    note: str = ""

    @property
    def absent(self) -> bool:
        return self.cells is None


@dataclass
class ReboundTable:
    columns: list[ReboundColumn]
    years: int = REBOUND_YEARS
    shock: ShockSpec = field(default_factory=ShockSpec)

    @property
    def dates(self) -> list[CycleDate]:
        return [c.date for c in self.columns]

    def values(self) -> np.ndarray:
        """(years, n_dates, 3) array of (median, p10, p90); NaN in absent columns."""
        out = np.full((self.years, len(self.columns), 3), np.nan)
        for k, c in enumerate(self.columns):
            if not c.absent:
                out[:, k] = c.cells
        return out

    def _row_labels(self):
        return [f"{i} year" + ("s" if i > 1 else "") for i in range(1, self.years + 1)]

    def to_csv(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["horizon", *(str(c.date) for c in self.columns)])
            for i, label in enumerate(self._row_labels()):
                row = [label]
                for c in self.columns:
                    row.append("NA" if c.absent else "%.4f|%.4f|%.4f" % tuple(c.cells[i]))
                w.writerow(row)
        return path

    def to_text(self) -> str:
        heads = [str(c.date) for c in self.columns]
        rows = []
        for i, label in enumerate(self._row_labels()):
            cells = []
            for c in self.columns:
                if c.absent:
                    cells.append("n/a")
                else:
                    med, lo, hi = c.cells[i]
                    cells.append(f"{med:.1f} [{lo:.1f}, {hi:.1f}]")
            rows.append([label, *cells])
        widths = [max(len(r[k]) for r in rows + [["", *heads]]) for k in range(len(heads) + 1)]
        lines = ["  ".join(h.rjust(wd) for h, wd in zip(["", *heads], widths))]
        lines += ["  ".join(x.rjust(wd) for x, wd in zip(r, widths)) for r in rows]
        notes = [f"{c.date}: {c.note}" for c in self.columns if c.note]
        excl = [f"{c.date}: {c.n_excluded} draws excluded" for c in self.columns if c.n_excluded]
        tail = ["", "Median with 10th and 90th percentiles in brackets."] + excl + notes
        return "\n".join(lines + tail) + "\n"

    def write_text(self, path) -> Path:
        path = Path(path)
        path.write_text(self.to_text(), encoding="utf-8")
        return path


def _rebound_column(post, date: CycleDate, shock, H, years):
    try:
        irf = irf_at_date(post, date.period, H, shock)
    except DataError as exc:
        return ReboundColumn(date, None, note=f"IRF not computed: {exc}"), None
    ppy = date.period.frequency.periods_per_year
    # the ratio x_i / x_0 does not depend on the shock's sign or size; using the
    # unit-shock path makes that invariance exact rather than up to rounding
    vals, ok = rebound_draws(irf.unit[:, shock.index, :], ppy, years)
    ok &= irf.valid
    n_bad = int((~ok).sum())
    n = ok.size
    if n - n_bad < 2 or n_bad > MAX_EXCLUDED_SHARE * n:
        return ReboundColumn(date, None, n_used=n - n_bad, n_excluded=n_bad,
                             note=f"summary refused: {n_bad} of {n} draws excluded"), irf
    used = vals[ok]
    q = summarize(used, TABLE_PERCENTILES)        # rows p10, p50, p90
    cells = np.column_stack([q[1], q[0], q[2]])
    return ReboundColumn(date, cells, used, n - n_bad, n_bad), irf


def rebound_table(post: TvpPosterior, dates: Sequence[CycleDate], shock: ShockSpec = ShockSpec(),
                  H: int | None = None, *, years: int = REBOUND_YEARS, return_irfs: bool = False):
    """Percentile rebound table, one column per date.

    Dates outside the estimation sample, or whose draws are mostly unusable,
    become explicitly absent columns; if no date lies in the sample at all
    the call fails.
    """
    if not dates:
        raise ValueError("no dates given")
    in_sample = []
    for d in dates:
        try:
            post.index_of(d.period)
            in_sample.append(d)
        except DataError:
            pass
    if not in_sample:
        raise DataError(f"none of the dates lies in the estimation sample {post.start}..{post.end}")
    cols, irfs = [], []
    for d in dates:
        H_d = default_horizon(d.period.frequency) if H is None else H
        col, irf = _rebound_column(post, d, shock, H_d, years)
        cols.append(col)
        irfs.append(irf)
    table = ReboundTable(cols, years, shock)
    return (table, irfs) if return_irfs else table


# -- plot data ---------------------------------------------------------------

def write_irf_fans(path, irfs: Sequence[IrfPosterior], labels: Sequence[str] | None = None, *,
                   mode: str = "percentile", percentiles=IRF_PERCENTILES) -> Path:
    """Tidy CSV of IRF fans for every responding variable.

    ``mode="percentile"``: date,label,variable,horizon,p17,p50,p83;
    ``mode="draw"``: date,label,variable,horizon,draw,value.
    """
    if mode not in ("percentile", "draw"):
        raise ValueError("mode must be 'percentile' or 'draw'")
    labels = labels or [""] * len(irfs)
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if mode == "percentile":
            w.writerow(["date", "label", "variable", "horizon", *(f"p{p:g}" for p in percentiles)])
        else:
            w.writerow(["date", "label", "variable", "horizon", "draw", "value"])
        for irf, label in zip(irfs, labels):
            if irf is None:
                continue
            K = irf.responses.shape[1]
            names = irf.names or tuple(f"y{k + 1}" for k in range(K))
            for k in range(K):
                paths = irf.response(k + 1)
                if mode == "percentile":
                    if paths.shape[0] < 2:
                        continue
                    q = summarize(paths, percentiles)
                    for h in range(irf.H + 1):
                        w.writerow([str(irf.date), label, names[k], h, *("%.8g" % v for v in q[:, h])])
                else:
                    for h in range(irf.H + 1):
                        for d, v in enumerate(paths[:, h]):
                            w.writerow([str(irf.date), label, names[k], h, d, "%.8g" % v])
    return path


def write_rebound_density(path, table: ReboundTable, *, mode: str = "percentile") -> Path:
    """Tidy CSV of per-date rebound distributions.

    ``mode="percentile"`` writes percentiles 1..99 (date,label,year,percentile,value);
    ``mode="draw"`` writes every draw (date,label,year,draw,value).
    """
    if mode not in ("percentile", "draw"):
        raise ValueError("mode must be 'percentile' or 'draw'")
    path = Path(path)
    grid = np.arange(1, 100)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "label", "year", "percentile" if mode == "percentile" else "draw", "value"])
        for col in table.columns:
            if col.absent:
                continue
            for y in range(table.years):
                v = col.draws[:, y]
                if mode == "percentile":
                    for g, q in zip(grid, np.percentile(v, grid)):
                        w.writerow([str(col.date), col.date.label, y + 1, int(g), "%.6f" % q])
                else:
                    for d, x in enumerate(v):
                        w.writerow([str(col.date), col.date.label, y + 1, d, "%.6f" % x])
    return path
