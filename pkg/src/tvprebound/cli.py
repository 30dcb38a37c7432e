"""Batch pipeline: ingest -> transform -> lag selection -> sampling -> tables.

Configuration is a single INI file (see README for every key).  Exit codes:
0 success, 1 configuration error, 2 data error, 3 estimation error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import analysis
from .analysis import CycleDate, ReboundTable, date_set, default_horizon, rebound_table
from .exceptions import ConfigError, DataError, EstimationError, ReboundError
from .sampler import PROFILES, McmcSettings, gibbs_run, init_priors, save_posterior
from .series import (Dataset, Frequency, Period, TimeSeries, align, ccf, deflate, hamilton_filter,
                     load_csv, log_transform, to_quarterly, write_csv)
from .synthetic import SyntheticSpec, simulate_tvp
from .var import ShockSpec, VarSpec, select_lag

log = logging.getLogger("tvprebound")

ROLES = ("activity", "energy", "price")
EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_ESTIMATION = 0, 1, 2, 3


# -- configuration -----------------------------------------------------------

@dataclass
class RunConfig:
    files: list[Path]
    columns: dict
    date_column: str = "date"
    cpi_column: str | None = None
    activity_measure: str = "y"
    frequency: Frequency = Frequency.MONTHLY
    aggregate: str = "mean"
    log_roles: list = field(default_factory=list)
    deflate_roles: list = field(default_factory=list)
    deflate_base: Period | None = None
    hamilton_roles: list = field(default_factory=list)
    hamilton_h: int | None = None
    hamilton_p: int | None = None
    level_roles: list = field(default_factory=list)
    order: list = field(default_factory=lambda: list(ROLES))
    lags: int | str = "auto"
    lag_criterion: str = "bic"
    p_max: int = 6
    intercept: bool = True
    shock: ShockSpec = field(default_factory=ShockSpec)
    horizon: int | None = None
    peaks: list = field(default_factory=list)
    troughs: list = field(default_factory=list)
    tau: int = 40
    k_Q: float = 0.01
    k_S: float = 0.1
    k_W: float = 0.01
    mcmc: McmcSettings = field(default_factory=McmcSettings)
    profile: str = "paper"
    output_dir: Path = Path("out")
    plot_data: str = "percentile"
    ccf_max_lag: int | None = None
    save_posterior: bool = True
    echo: dict = field(default_factory=dict)

    @property
    def periods_per_year(self) -> int:
        return self.frequency.periods_per_year


def _list(text: str | None) -> list[str]:
    if text is None:
        return []
    return [x.strip() for x in text.replace("\n", ",").split(",") if x.strip()]


def _dates(value: str, label: str, freq: Frequency) -> list[CycleDate]:
    items = _list(value)
    if len(items) == 1 and not items[0][0].isdigit():
        try:
            ds = date_set(items[0])
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
        if any(d.period.frequency is not freq for d in ds):
            raise ConfigError(f"date set {items[0]!r} does not match frequency {freq.value}")
        return list(ds)
    try:
        return [CycleDate(label, Period.parse(x, freq)) for x in items]
    except ValueError as exc:
        raise ConfigError(f"bad {label} date: {exc}") from None


def load_config(path, *, seed: int | None = None, profile: str | None = None,
                output_dir=None) -> RunConfig:
    """Parse an INI run configuration; relative file paths resolve against its folder."""
    path = Path(path)
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        if not cp.read(path, encoding="utf-8"):
            raise ConfigError(f"cannot read config file {path}")
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    base = path.parent
    try:
        return _build_config(cp, base, seed=seed, profile=profile, output_dir=output_dir)
    except ConfigError:
        raise
    except (ValueError, KeyError, configparser.Error) as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _build_config(cp, base: Path, *, seed, profile, output_dir) -> RunConfig:
    if "data" not in cp:
        raise ConfigError("config needs a [data] section")
    data = cp["data"]
    files = [base / f for f in _list(data.get("files"))]
    if not files:
        raise ConfigError("[data] files is empty")
    columns = {r: data.get(r) for r in ROLES}
    missing = [r for r, c in columns.items() if not c]
    if missing:
        raise ConfigError(f"[data] must name a column for each of {ROLES}; missing {missing}")
    measure = data.get("activity_measure", "y")
    if measure not in ("y", "y2", "y3"):
        raise ConfigError("activity_measure must be y, y2 or y3")

    tr = cp["transform"] if "transform" in cp else {}
    freq = Frequency(tr.get("frequency", "monthly"))
    level_default = "energy, price" + (", activity" if measure == "y3" else "")
    cfg = RunConfig(files=files, columns=columns,
                    date_column=data.get("date_column", "date"),
                    cpi_column=data.get("cpi") or None,
                    activity_measure=measure, frequency=freq)
    cfg.aggregate = tr.get("aggregate", "mean")
    if cfg.aggregate not in ("mean", "sum", "last"):
        raise ConfigError("aggregate must be mean, sum or last")
    cfg.log_roles = _list(tr.get("log", level_default))
    cfg.deflate_roles = _list(tr.get("deflate", ""))
    if cfg.deflate_roles:
        if not cfg.cpi_column:
            raise ConfigError("deflation requested but [data] cpi is not set")
        if not tr.get("deflate_base"):
            raise ConfigError("deflation requested but [transform] deflate_base is not set")
        cfg.deflate_base = Period.parse(tr.get("deflate_base"))
    cfg.hamilton_roles = _list(tr.get("hamilton", level_default))
    cfg.hamilton_h = int(tr["hamilton_h"]) if tr.get("hamilton_h") else None
    cfg.hamilton_p = int(tr["hamilton_p"]) if tr.get("hamilton_p") else None
    cfg.level_roles = _list(data.get("level_variables", level_default))
    for name, roles in (("log", cfg.log_roles), ("deflate", cfg.deflate_roles),
                        ("hamilton", cfg.hamilton_roles), ("level_variables", cfg.level_roles)):
        bad = [r for r in roles if r not in ROLES]
        if bad:
            raise ConfigError(f"{name}: unknown roles {bad}")

    md = cp["model"] if "model" in cp else {}
    cfg.order = _list(md.get("order", ", ".join(ROLES)))
    if sorted(cfg.order) != sorted(ROLES):
        raise ConfigError(f"order must be a permutation of {ROLES}")
    lags = md.get("lags", "auto")
    cfg.lags = "auto" if lags == "auto" else int(lags)
    cfg.lag_criterion = md.get("lag_criterion", "bic")
    if cfg.lag_criterion not in ("aic", "bic"):
        raise ConfigError("lag_criterion must be aic or bic")
    cfg.p_max = int(md.get("p_max", "6"))
    cfg.intercept = _bool(md.get("intercept", "yes"))

    sk = cp["shock"] if "shock" in cp else {}
    var = sk.get("variable", "energy")
    if var not in cfg.order:
        raise ConfigError(f"shock variable {var!r} is not one of {cfg.order}")
    cfg.shock = ShockSpec(cfg.order.index(var) + 1, int(sk.get("sign", "-1")), float(sk.get("size", "1")))
    cfg.horizon = int(sk["horizon"]) if sk.get("horizon") else default_horizon(freq)
    if cfg.horizon < 5 * freq.periods_per_year:
        raise ConfigError(f"horizon must cover five years ({5 * freq.periods_per_year} periods)")

    dt = cp["dates"] if "dates" in cp else {}
    suffix = freq.value
    cfg.peaks = _dates(dt.get("peaks", f"paper-peaks-{suffix}"), "peak", freq)
    cfg.troughs = _dates(dt.get("troughs", f"paper-troughs-{suffix}"), "trough", freq)

    pr = cp["priors"] if "priors" in cp else {}
    cfg.tau = int(pr.get("tau", "40"))
    cfg.k_Q = float(pr.get("k_q", "0.01"))
    cfg.k_S = float(pr.get("k_s", "0.1"))
    cfg.k_W = float(pr.get("k_w", "0.01"))

    mc = cp["mcmc"] if "mcmc" in cp else {}
    cfg.profile = profile or mc.get("profile", "paper")
    if cfg.profile not in PROFILES:
        raise ConfigError(f"unknown profile {cfg.profile!r}; choose from {sorted(PROFILES)}")
    settings = dict(PROFILES[cfg.profile])
    for key in ("n_draws", "burn_in", "thin", "max_rejections"):
        if mc.get(key):
            settings[key] = int(mc[key])
    settings["seed"] = int(seed if seed is not None else mc.get("seed", "0"))
    settings["stationarity_rejection"] = _bool(mc.get("stationarity_rejection", "yes"))
    cfg.mcmc = McmcSettings(**settings)

    out = cp["output"] if "output" in cp else {}
    cfg.output_dir = Path(output_dir) if output_dir else base / out.get("dir", "out")
    cfg.plot_data = out.get("plot_data", "percentile")
    if cfg.plot_data not in ("percentile", "draw"):
        raise ConfigError("plot_data must be percentile or draw")
    cfg.save_posterior = _bool(out.get("save_posterior", "yes"))
    cc = cp["ccf"] if "ccf" in cp else {}
    cfg.ccf_max_lag = int(cc.get("max_lag", str(2 * freq.periods_per_year)))

    cfg.echo = {s: dict(cp[s]) for s in cp.sections()}
    cfg.echo["resolved"] = dict(seed=cfg.mcmc.seed, profile=cfg.profile, mcmc=asdict(cfg.mcmc),
                                output_dir=str(cfg.output_dir))
    return cfg


def _bool(text) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "yes", "true", "on"):
        return True
    if t in ("0", "no", "false", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


# -- data preparation --------------------------------------------------------

@dataclass
class Prepared:
    levels: Dataset      # deflated/aggregated, before logs and filtering
    model: Dataset       # transformed, identification order


def prepare_data(cfg: RunConfig) -> Prepared:
    cols: dict[str, TimeSeries] = {}
    for f in cfg.files:
        for s in load_csv(f, date_column=cfg.date_column):
            cols[s.name] = s
    role_series = {}
    for role in ROLES:
        col = cfg.columns[role]
        if col not in cols:
            raise DataError(f"column {col!r} for role {role!r} not found in {[str(f) for f in cfg.files]}")
        role_series[role] = cols[col].replace(name=role)
    cpi = None
    if cfg.deflate_roles:
        if cfg.cpi_column not in cols:
            raise DataError(f"price index column {cfg.cpi_column!r} not found")
        cpi = cols[cfg.cpi_column]

    levels = {}
    for role, s in role_series.items():
        if role in cfg.deflate_roles:
            s = deflate(s, cpi, cfg.deflate_base).replace(name=role)
        if cfg.frequency is Frequency.QUARTERLY and s.frequency is Frequency.MONTHLY:
            s = to_quarterly(s, cfg.aggregate)
        elif s.frequency is not cfg.frequency:
            raise DataError(f"{role} is {s.frequency.value}; cannot convert to {cfg.frequency.value}")
        levels[role] = s

    model = {}
    for role, s in levels.items():
        if role in cfg.log_roles:
            s = log_transform(s)
        if role in cfg.hamilton_roles:
            s = hamilton_filter(s, cfg.hamilton_h, cfg.hamilton_p)
        model[role] = s.replace(name=role)
    return Prepared(align(levels[r] for r in cfg.order), align(model[r] for r in cfg.order))


# -- descriptive tables ------------------------------------------------------

@dataclass
class CycleStats:
    moments: list   # dicts: window, variable, n, mean, variance
    growth: list    # dicts: window, variable, growth_pct


def describe_cycles(data: Dataset, peaks: Sequence[Period], level_variables: Sequence[str] | None = None) -> CycleStats:
    """Mean/variance per peak-to-peak window and average per-period growth (%) of level series.

    Windows are [peak_i, peak_{i+1}) with the last one closed, so they
    partition the span from the first to the last peak.
    """
    peaks = sorted(peaks)
    if len(peaks) < 2:
        raise ValueError("need at least two peak dates")
    idx = []
    for p in peaks:
        i = p - data.start if p.frequency is data.frequency else -1
        if not 0 <= i < data.T:
            raise DataError(f"peak {p} outside data span {data.start}..{data.end}")
        idx.append(i)
    level_variables = list(level_variables if level_variables is not None else [])
    X = data.matrix
    moments, growth = [], []
    for w in range(len(idx) - 1):
        lo, hi = idx[w], idx[w + 1] + (1 if w == len(idx) - 2 else 0)
        label = f"{peaks[w]}-{peaks[w + 1]}"
        for k, name in enumerate(data.names):
            seg = X[lo:hi, k]
            moments.append(dict(window=label, variable=name, n=int(seg.size), mean=float(seg.mean()),
                                variance=float(seg.var(ddof=1)) if seg.size > 1 else 0.0))
            if name in level_variables:
                t0 = max(lo, 1)
                prev, cur = X[t0 - 1 : hi - 1, k], X[t0:hi, k]
                g = float(np.mean((cur / prev - 1.0) * 100.0)) if cur.size else float("nan")
                growth.append(dict(window=label, variable=name, growth_pct=g))
    return CycleStats(moments, growth)


def _write_rows(path: Path, rows: list[dict], fields: Sequence[str], fmt: str = "%.6f") -> Path:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(fields)
        for r in rows:
            w.writerow([fmt % r[f] if isinstance(r[f], float) else r[f] for f in fields])
    return path


def write_describe(out: Path, stats: CycleStats) -> list[Path]:
    return [
        _write_rows(out / "describe_moments.csv", stats.moments, ["window", "variable", "n", "mean", "variance"]),
        _write_rows(out / "describe_growth.csv", stats.growth, ["window", "variable", "growth_pct"]),
    ]


def write_ccf(path: Path, data: Dataset, max_lag: int) -> Path:
    """Cross-correlations for consecutive pairs in identification order."""
    rows = []
    for a, b in zip(data.names[:-1], data.names[1:]):
        res = ccf(data.column(a), data.column(b), max_lag)
        for lag, c in res:
            rows.append(dict(x=a, y=b, lag=lag, coefficient=c, band=res.band))
    return _write_rows(path, rows, ["x", "y", "lag", "coefficient", "band"], "%.8f")


# -- run ---------------------------------------------------------------------

class StageError(ReboundError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class RunManifest:
    config: dict
    status: str = "running"
    stage: str | None = None
    error: str | None = None
    sample: dict = field(default_factory=dict)
    lag: dict = field(default_factory=dict)
    seed: int | None = None
    sweeps: dict = field(default_factory=dict)
    exclusions: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def add(self, path: Path, root: Path):
        self.outputs[str(path.relative_to(root))] = path.stat().st_size

    def write(self, root: Path) -> Path:
        path = root / "manifest.json"
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
        return path


def _progress_logger(total: int):
    step = max(total // 10, 1)

    def sink(done: int, n: int):
        if done % step == 0 or done == n:
            log.info("sweeps %d / %d", done, n)
    return sink


def run(cfg: RunConfig) -> RunManifest:
    """Execute the full pipeline and write every table, plot-data file and the manifest."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    man = RunManifest(config=cfg.echo, seed=cfg.mcmc.seed)
    stage = "ingest"
    clock = time.perf_counter()

    def tick(name):
        nonlocal clock
        now = time.perf_counter()
        man.timings[name] = round(now - clock, 3)
        clock = now

    try:
        prep = prepare_data(cfg)
        data = prep.model
        man.sample = dict(start=str(data.start), end=str(data.end), T=data.T,
                          frequency=data.frequency.value, variables=data.names)
        tick("ingest")

        stage = "describe"
        peaks_in = [d.period for d in cfg.peaks if prep.levels.start <= d.period <= prep.levels.end]
        if len(peaks_in) >= 2:
            for p in write_describe(out, describe_cycles(prep.levels, peaks_in, cfg.level_roles)):
                man.add(p, out)
        man.add(write_ccf(out / "ccf.csv", data, min(cfg.ccf_max_lag, data.T - 1)), out)
        tick("describe")

        stage = "lag-select"
        if cfg.lags == "auto":
            sel = select_lag(data, cfg.p_max, cfg.intercept)
            p = sel.p_bic if cfg.lag_criterion == "bic" else sel.p_aic
            man.lag = dict(selected=p, criterion=cfg.lag_criterion, p_aic=sel.p_aic, p_bic=sel.p_bic)
            man.add(_write_rows(out / "lag_selection.csv", sel.table, ["p", "aic", "bic", "logdet", "n_params"],
                                "%.8f"), out)
        else:
            p = int(cfg.lags)
            man.lag = dict(selected=p, criterion="fixed")
        tick("lag-select")

        stage = "sample"
        spec = VarSpec(data.K, p, cfg.intercept)
        priors = init_priors(data, spec, cfg.tau, k_Q=cfg.k_Q, k_S=cfg.k_S, k_W=cfg.k_W)
        post = gibbs_run(data, spec, priors, cfg.mcmc, _progress_logger(cfg.mcmc.n_draws))
        man.sweeps = dict(n_draws=cfg.mcmc.n_draws, burn_in=cfg.mcmc.burn_in, thin=cfg.mcmc.thin,
                          retained=post.n_draws, failed_sweeps=post.info["failed_sweeps"])
        man.sample.update(estimation_start=str(post.start), estimation_end=str(post.end),
                          estimation_T=post.T, training=cfg.tau)
        if cfg.save_posterior:
            man.add(save_posterior(post, out / "posterior.npz"), out)
        tick("sample")

        stage = "analyze"
        tables = {}
        irfs, labels = [], []
        for label, dates in (("peaks", cfg.peaks), ("troughs", cfg.troughs)):
            if not dates:
                continue
            table, date_irfs = rebound_table(post, dates, cfg.shock, cfg.horizon, return_irfs=True)
            tables[label] = table
            irfs += date_irfs
            labels += [d.label for d in dates]
            man.add(table.to_csv(out / f"rebound_{label}.csv"), out)
            man.add(table.write_text(out / f"rebound_{label}.txt"), out)
            for col in table.columns:
                man.exclusions[f"{label}:{col.date}"] = dict(excluded=col.n_excluded, used=col.n_used,
                                                             absent=col.absent, note=col.note)
        man.add(analysis.write_irf_fans(out / "irf_fans.csv", irfs, labels, mode=cfg.plot_data), out)
        combined = ReboundTable([c for t in tables.values() for c in t.columns])
        man.add(analysis.write_rebound_density(out / "rebound_density.csv", combined, mode=cfg.plot_data), out)
        tick("analyze")
    except Exception as exc:
        man.status, man.stage, man.error = "failed", stage, f"{type(exc).__name__}: {exc}"
        man.write(out)
        raise StageError(stage, exc) from exc
    man.status = "complete"
    man.write(out)
    return man


def verify_manifest(root) -> list[str]:
    """Files listed in ``root/manifest.json`` that are missing or differ in size."""
    root = Path(root)
    man = json.loads((root / "manifest.json").read_text(encoding="utf-8"))
    bad = []
    for name, size in man["outputs"].items():
        f = root / name
        if not f.exists() or f.stat().st_size != size:
            bad.append(name)
    return bad


# -- command line ------------------------------------------------------------

def _exit_code(exc: BaseException) -> int:
    cause = exc.cause if isinstance(exc, StageError) else exc
    if isinstance(cause, ConfigError):
        return EXIT_CONFIG
    if isinstance(cause, EstimationError):
        return EXIT_ESTIMATION
    if isinstance(cause, (DataError, ValueError, OSError)):
        return EXIT_DATA
    return EXIT_ESTIMATION


def _cmd_run(args) -> int:
    cfg = load_config(args.config, seed=args.seed, profile=args.profile, output_dir=args.out)
    man = run(cfg)
    print(f"wrote {len(man.outputs)} files to {cfg.output_dir}")
    return EXIT_OK


def _cmd_describe(args) -> int:
    cfg = load_config(args.config, output_dir=args.out)
    prep = prepare_data(cfg)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    peaks = [d.period for d in cfg.peaks]
    for p in write_describe(out, describe_cycles(prep.levels, peaks, cfg.level_roles)):
        print(p)
    return EXIT_OK


def _cmd_ccf(args) -> int:
    cfg = load_config(args.config, output_dir=args.out)
    prep = prepare_data(cfg)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    lag = args.max_lag if args.max_lag is not None else cfg.ccf_max_lag
    print(write_ccf(out / "ccf.csv", prep.model, lag))
    return EXIT_OK


def default_synthetic(K: int = 3, p: int = 2, T: int = 200, seed: int = 0, *, q: float = 0.0,
                      s: float = 0.0, w: float = 0.0) -> SyntheticSpec:
    """A stable K-variable VAR(p) with mild cross-dynamics and unit-scale shocks."""
    A = np.zeros((p, K, K))
    A[0] = 0.5 * np.eye(K) + 0.1 * (np.eye(K, k=1) + np.eye(K, k=-1))
    if p > 1:
        A[1] = 0.1 * np.eye(K)
    C = np.hstack([np.zeros((K, 1)), *A])
    rows, cols = np.tril_indices(K, -1)
    return SyntheticSpec(K=K, p=p, T=T, beta0=C.ravel(), alpha0=np.full(rows.size, -0.3),
                         log_sigma0=np.zeros(K), Q=q, S=s, W=w, seed=seed)


def _cmd_simulate(args) -> int:
    spec = default_synthetic(args.K, args.p, args.T, args.seed, q=args.q, s=args.s, w=args.w)
    names = _list(args.names) if args.names else (list(ROLES) if args.K == 3 else None)
    data, _ = simulate_tvp(spec, start=Period.parse(args.start), names=names)
    write_csv(args.out, data)
    print(args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tvprebound", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="full pipeline")
    r.add_argument("config")
    r.add_argument("--out", help="output directory (overrides [output] dir)")
    r.add_argument("--seed", type=int, help="override [mcmc] seed")
    r.add_argument("--profile", choices=sorted(PROFILES), help="MCMC length profile")
    r.set_defaults(func=_cmd_run)

    d = sub.add_parser("describe", help="per-cycle means, variances and growth rates")
    d.add_argument("config")
    d.add_argument("--out")
    d.set_defaults(func=_cmd_describe)

    c = sub.add_parser("ccf", help="cross-correlation diagnostics")
    c.add_argument("config")
    c.add_argument("--out")
    c.add_argument("--max-lag", type=int)
    c.set_defaults(func=_cmd_ccf)

    s = sub.add_parser("simulate", help="write a synthetic dataset CSV")
    s.add_argument("--out", required=True)
    s.add_argument("--K", type=int, default=3)
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--T", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--start", default="2000-01")
    s.add_argument("--q", type=float, default=0.0, help="coefficient random-walk variance")
    s.add_argument("--s", type=float, default=0.0, help="contemporaneous random-walk variance")
    s.add_argument("--w", type=float, default=0.0, help="log-volatility random-walk variance")
    s.add_argument("--names", help="comma-separated column names")
    s.set_defaults(func=_cmd_simulate)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except Exception as exc:       # stage-tagged message, mapped exit code
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)



def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
