"""Shared synthetic fixtures; expensive chains are cached per test session."""
from functools import lru_cache

import numpy as np

from tvprebound.cli import default_synthetic
from tvprebound.sampler import PROFILES, McmcSettings, TvpPosterior, gibbs_run, init_priors
from tvprebound.series import Frequency, Period
from tvprebound.synthetic import simulate_tvp
from tvprebound.var import VarSpec, spectral_radius

TAU = 40


def constant_dataset(K=3, p=2, T=200, seed=11):
    spec = default_synthetic(K, p, T, seed=seed)
    data, truth = simulate_tvp(spec)
    return spec, data, truth


@lru_cache(maxsize=None)
def desk_constant_run(k_scale=None, seed=1):
    """Desk-profile chain on constant-parameter data (K=3, p=2, T=200).

    ``k_scale=None`` uses the default hyperprior scales; a number sets
    k_Q = k_S = k_W to it (collapsing the random-walk variances).
    """
    spec, data, truth = constant_dataset()
    vs = VarSpec(3, 2)
    ks = {} if k_scale is None else dict(k_Q=k_scale, k_S=k_scale, k_W=k_scale)
    priors = init_priors(data, vs, TAU, **ks)
    post = gibbs_run(data, vs, priors, McmcSettings(**PROFILES["desk"], seed=seed))
    return spec, data, truth, post


def short_settings(n=60, burn=10, thin=1, seed=0, **kw):
    return McmcSettings(n_draws=n, burn_in=burn, thin=thin, seed=seed, **kw)


def path_variation(beta_draws):
    """Posterior average of sum_t ||beta_t - beta_{t-1}||^2."""
    d = np.diff(beta_draws, axis=1)
    return float(np.mean(np.sum(d**2, axis=(1, 2))))


def posterior_from_params(coefs_draws, L_draws, T=30, start=None, intercept=None, names=("y", "e", "pr")):
    """A TvpPosterior whose every period carries the given per-draw constant parameters.

    ``coefs_draws`` is (n, p, K, K) and ``L_draws`` (n, K, K) lower-triangular
    impact matrices; B and Sigma are recovered as B = diag(d) L^-1, Sigma = diag(d).
    """
    coefs_draws = np.asarray(coefs_draws, dtype=float)
    n, p, K, _ = coefs_draws.shape
    c = np.zeros((n, K, 1)) if intercept is None else np.broadcast_to(np.asarray(intercept)[..., None], (n, K, 1))
    C = np.concatenate([c, *np.moveaxis(coefs_draws, 1, 0)], axis=2)      # (n, K, 1 + Kp)
    beta = np.repeat(C.reshape(n, 1, -1), T, axis=1)
    d = np.diagonal(L_draws, axis1=1, axis2=2)
    B = d[:, :, None] * np.linalg.inv(L_draws)
    rows, cols = np.tril_indices(K, -1)
    alpha = np.repeat(B[:, rows, cols][:, None, :], T, axis=1)
    log_sigma = np.repeat(np.log(d)[:, None, :], T, axis=1)
    nb, na = beta.shape[-1], alpha.shape[-1]
    return TvpPosterior(VarSpec(K, p), beta, alpha, log_sigma, np.zeros((n, nb, nb)), np.zeros((n, na, na)),
                        np.zeros((n, K, K)), start or Period(2000, 1, Frequency.MONTHLY), list(names[:K]))


def random_stable_draws(rng, n, K=3, p=2, radius=0.9):
    A = rng.standard_normal((n, p, K, K)) * 0.3
    r = spectral_radius(A)
    shrink = np.where(r >= radius, radius / r, 1.0)
    return A * shrink[:, None, None, None]


def random_impacts(rng, n, K=3):
    G = rng.standard_normal((n, K, K))
    om = G @ np.swapaxes(G, 1, 2) / K + 0.5 * np.eye(K)
    return np.linalg.cholesky(om)


def write_synthetic_config(root, *, T=200, seed=0, w=0.0, mcmc="profile = desk", extra=""):
    """A monthly three-variable synthetic dataset plus a run config pointing at it.

    The series are already stationary deviations, so no logs, filtering or
    growth tables; cycle dates sit inside the estimation sample.
    """
    from pathlib import Path

    from tvprebound.series import write_csv

    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    data, _ = simulate_tvp(default_synthetic(3, 2, T, seed=seed, w=w), start=Period.parse("2000-01"),
                           names=["gdp", "energy_use", "energy_price"])
    write_csv(root / "data.csv", data)
    text = f"""\
[data]
files = data.csv
activity = gdp
energy = energy_use
price = energy_price
level_variables =

[transform]
frequency = monthly
log =
hamilton =

[model]
lags = auto
p_max = 4

[dates]
peaks = 2006-01, 2010-06
troughs = 2008-03, 2012-01

[mcmc]
{mcmc}
seed = 7

[output]
dir = out
{extra}
"""
    (root / "run.ini").write_text(text, encoding="utf-8")
    return root / "run.ini"
