"""Acceptance checks, one test per criterion, each printing a PASS/FAIL line.

Run alone with ``python3 -m pytest tests/test_acceptance.py -s`` (or
``python3 tests/test_acceptance.py``).  The optional data-dependent check
runs only when REBOUND_DATA_CONFIG points at a run config for the user's
own monthly series.
"""
import csv
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import multivariate_normal

from tvprebound.analysis import CycleDate, irf_at_date, rebound_path, rebound_table
from tvprebound.cli import default_synthetic, load_config, main, run
from tvprebound.sampler import PROFILES, McmcSettings, gibbs_run, init_priors
from tvprebound.series import Frequency, Period, TimeSeries, hamilton_filter
from tvprebound.statespace import StateSpaceModel, kalman_loglik
from tvprebound.synthetic import simulate_tvp
from tvprebound.var import (ShockSpec, VarEstimate, VarSpec, cholesky_impact, irf_constant, ols_var_fit,
                            select_lag, simulate_var)

from helpers import (TAU, desk_constant_run, posterior_from_params, random_impacts, random_stable_draws,
                     write_synthetic_config)

pytestmark = pytest.mark.slow


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
        assert ok, f"criterion {n}: {detail}"
    return emit


# -- 1: Kalman likelihood vs dense Gaussian -----------------------------------

def _spd(rng, n, scale=1.0):
    G = rng.standard_normal((n, n))
    return scale * (G @ G.T / n + 0.5 * np.eye(n))


def _dense_loglik(m, y):
    T, k, _ = m.Z.shape
    mean = np.concatenate([m.Z[t] @ m.a1 for t in range(T)])
    S = np.zeros((T * k, T * k))
    for s in range(T):
        for t in range(T):
            S[s * k:(s + 1) * k, t * k:(t + 1) * k] = m.Z[s] @ (m.P1 + min(s, t) * m.Q) @ m.Z[t].T
        S[s * k:(s + 1) * k, s * k:(s + 1) * k] += m.H[s]
    return multivariate_normal(mean, S).logpdf(np.ravel(y))


def test_criterion_1_kalman_oracle(report):
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        T, k, n = rng.integers(1, 9), rng.integers(1, 4), rng.integers(1, 4)
        m = StateSpaceModel(rng.standard_normal((T, k, n)), np.stack([_spd(rng, k) for _ in range(T)]),
                            _spd(rng, n, 0.3), rng.standard_normal(n), _spd(rng, n))
        y = rng.standard_normal((T, k))
        worst = max(worst, abs(kalman_loglik(m, y) - _dense_loglik(m, y)))
    secs = time.perf_counter() - t0
    report(1, worst <= 1e-8 and secs < 5, f"50 instances, max |diff| {worst:.2e} (tol 1e-8), {secs:.2f}s (< 5s)")


# -- 2: Hamilton filter vs least squares --------------------------------------

def _hamilton_oracle(x, h, p):
    first = h + p - 1
    X = np.array([[1.0] + [x[t - h - k] for k in range(p)] for t in range(first, len(x))])
    y = x[first:]
    return y - X @ np.linalg.solve(X.T @ X, X.T @ y)


def test_criterion_2_hamilton_oracle(report):
    rng = np.random.default_rng(7)
    start = Period(1970, 1, Frequency.MONTHLY)
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(20):
        x = np.cumsum(rng.standard_normal(600)) + (0.0 if i % 2 else 0.02 * np.arange(600))
        cyc = hamilton_filter(TimeSeries("x", start.frequency, start, x), 24, 12).values
        worst = max(worst, np.abs(cyc - _hamilton_oracle(x, 24, 12)).max())
    trend = hamilton_filter(TimeSeries("t", start.frequency, start, 5.0 - 0.3 * np.arange(600)), 24, 12).values
    secs = time.perf_counter() - t0
    tmax = np.abs(trend).max()
    report(2, worst <= 1e-8 and tmax <= 1e-10 and secs < 5,
           f"20 series T=600 max |diff| {worst:.2e} (tol 1e-8); linear trend max |cycle| {tmax:.2e} "
           f"(tol 1e-10); {secs:.2f}s")


# -- 3: degeneracy with collapsed random-walk priors --------------------------

def test_criterion_3_degeneracy(report):
    t0 = time.perf_counter()
    spec, data, truth, post = desk_constant_run(1e-4)
    secs = time.perf_counter() - t0
    med = np.median(post.beta, axis=0)
    variation = np.abs(med - med[0]).max()
    shock = ShockSpec()
    mid = post.start + post.T // 2
    med_irf = np.median(irf_at_date(post, mid, 20, shock).responses, axis=0)
    vs = VarSpec(3, 2)
    est = ols_var_fit(data, vs)
    oracle = irf_constant(est, cholesky_impact(est.sigma_u), 20, shock)
    gap = np.abs(med_irf - oracle).max()
    report(3, variation < 1e-3 and gap < 0.1 and secs < 600,
           f"k_Q=k_S=k_W=1e-4, desk profile: median beta_t variation {variation:.2e} (< 1e-3); "
           f"mid-sample median IRF vs constant-VAR OLS IRF max gap {gap:.3f} (< 0.1, energy impact "
           f"{oracle[1, 0]:.3f}); {secs:.0f}s")


# -- 4: simulate and recover --------------------------------------------------

def test_criterion_4_band_coverage(report):
    # drift sized to what the default hyperpriors imply (Q about k_Q^2 times the
    # OLS coefficient variance); see the decisions ledger
    t0 = time.perf_counter()
    inside_b, inside_s, lines = [], [], []
    for seed in (101, 102, 103):
        spec = replace(default_synthetic(3, 1, 240, seed=seed), Q=5e-6, S=3e-4, W=1e-4)
        data, truth = simulate_tvp(spec)
        vs = VarSpec(3, 1)
        post = gibbs_run(data, vs, init_priors(data, vs, TAU), McmcSettings(**PROFILES["desk"], seed=seed))
        lo, hi = np.percentile(post.beta, [17, 83], axis=0)
        b = (truth.beta[TAU:] >= lo) & (truth.beta[TAU:] <= hi)
        sig = np.exp(post.log_sigma)
        lo, hi = np.percentile(sig, [17, 83], axis=0)
        ts = np.exp(truth.log_sigma[TAU:])
        s = (ts >= lo) & (ts <= hi)
        inside_b.append(b.ravel())
        inside_s.append(s.ravel())
        lines.append(f"seed {seed}: beta {b.mean():.3f}, sigma {s.mean():.3f}")
    cb, cs = np.concatenate(inside_b).mean(), np.concatenate(inside_s).mean()
    secs = time.perf_counter() - t0
    report(4, cb >= 0.5 and cs >= 0.5 and secs < 1800,
           f"66% bands, 3 seeds pooled: beta {cb:.3f}, exp(sigma) {cs:.3f} (>= 0.5); "
           f"{'; '.join(lines)}; {secs:.0f}s")


# -- 5: rebound arithmetic ----------------------------------------------------

def test_criterion_5_rebound_arithmetic(report):
    def path(x0, xi):
        x = np.full(61, xi, dtype=float)
        x[0] = x0
        return x

    units = (np.all(rebound_path(path(-0.7, -0.7), 12) == 0.0)
             and np.all(rebound_path(path(-0.7, 0.0), 12) == 100.0)
             and np.all(rebound_path(path(-1.0, 0.02), 12) == 102.0))
    rng = np.random.default_rng(5)
    post = posterior_from_params(random_stable_draws(rng, 100), random_impacts(rng, 100))
    dates = [CycleDate("peak", post.start + 10), CycleDate("trough", post.start + 20)]
    base = rebound_table(post, dates, ShockSpec(2, -1, 1.0))
    same = True
    for shock in (ShockSpec(2, 1, 1.0), ShockSpec(2, -1, 3.7), ShockSpec(2, 1, 0.123), ShockSpec(2, -1, 1e3)):
        other = rebound_table(post, dates, shock)
        same &= all(np.array_equal(a.draws, b.draws) for a, b in zip(base.columns, other.columns))
    n = base.columns[0].n_used
    report(5, bool(units and same and n == 100),
           f"unit cases 0/100/102 exact: {bool(units)}; per-draw invariance to sign and size on "
           f"{n} draws exact: {bool(same)}")


# -- 6: lag selection ---------------------------------------------------------

def test_criterion_6_bic_picks_two(report):
    A = np.array([[[0.5, 0.1], [0.0, 0.4]], [[-0.3, 0.0], [0.1, 0.25]]])
    est = VarEstimate.from_params(A, np.array([[1.0, 0.3], [0.3, 1.0]]), intercept=[0.1, -0.2])
    t0 = time.perf_counter()
    hits = sum(select_lag(simulate_var(est, 2000, seed), 6).p_bic == 2 for seed in range(100))
    secs = time.perf_counter() - t0
    report(6, hits >= 95 and secs < 120, f"BIC selects p=2 in {hits}/100 replications (>= 95); {secs:.1f}s")


# -- 7 and 8: pipeline determinism and table integrity ------------------------

TABLES = ("ccf.csv", "describe_moments.csv", "describe_growth.csv", "lag_selection.csv", "rebound_peaks.csv",
          "rebound_peaks.txt", "rebound_troughs.csv", "rebound_troughs.txt", "irf_fans.csv",
          "rebound_density.csv")


@pytest.fixture(scope="module")
def desk_runs(tmp_path_factory):
    root = tmp_path_factory.mktemp("desk")
    path = write_synthetic_config(root, w=1e-3)
    outs = []
    for name in ("a", "b"):
        assert main(["run", str(path), "--out", str(root / name)]) == 0
        outs.append(root / name)
    return outs


def test_criterion_7_determinism(report, desk_runs):
    a, b = desk_runs
    differ = [f for f in TABLES if (a / f).read_bytes() != (b / f).read_bytes()]
    report(7, not differ, f"two desk-profile runs, {len(TABLES)} table files compared byte for byte; "
                          f"differing: {differ or 'none'}")


def test_criterion_8_percentile_integrity(report, desk_runs):
    out = desk_runs[0]
    cells = bad_cells = 0
    for name in ("rebound_peaks.csv", "rebound_troughs.csv"):
        with (out / name).open() as fh:
            for row in csv.DictReader(fh):
                for key, value in row.items():
                    if key == "horizon" or value == "NA":
                        continue
                    med, p10, p90 = map(float, value.split("|"))
                    cells += 1
                    bad_cells += not (p10 <= med <= p90)
    rows = bad_rows = 0
    with (out / "irf_fans.csv").open() as fh:
        for row in csv.DictReader(fh):
            rows += 1
            bad_rows += not (float(row["p17"]) <= float(row["p50"]) <= float(row["p83"]))
    report(8, cells > 0 and rows > 0 and bad_cells == 0 and bad_rows == 0,
           f"{cells} rebound cells, {bad_cells} violate p10 <= median <= p90; "
           f"{rows} fan rows, {bad_rows} violate p17 <= p50 <= p83")


# -- 9: optional, user-supplied data ------------------------------------------

@pytest.mark.skipif(not os.environ.get("REBOUND_DATA_CONFIG"), reason="set REBOUND_DATA_CONFIG to run")
def test_criterion_9_user_data(report, tmp_path):
    cfg = load_config(os.environ["REBOUND_DATA_CONFIG"], output_dir=tmp_path)
    run(cfg)
    with (tmp_path / "rebound_peaks.csv").open() as fh:
        rows = {r["horizon"]: r for r in csv.DictReader(fh)}
    five = {k: float(v.split("|")[0]) for k, v in rows["5 years"].items() if k != "horizon" and v != "NA"}
    three_1990 = float(rows["3 years"]["1990-07"].split("|")[0])
    ok = len(five) == 6 and all(94 <= v <= 106 for v in five.values()) and three_1990 > 99
    report(9, ok, f"5-year medians {five} (in [94, 106]); 1990-07 3-year median {three_1990:.1f} (> 99)")


if __name__ == "__main__":
    sys.exit(pytest.main([str(Path(__file__)), "-s", "-q"]))
