"""Gibbs sampler for the VAR with drifting coefficients and stochastic volatility.

Model, for estimation periods t = 1..T:

    y_t = C_t x_t + B_t^{-1} Sigma_t eps_t,    eps_t ~ N(0, I)
    beta_t = vec(C_t'),  alpha_t = below-diagonal entries of B_t (row-major),
    h_t = log diag(Sigma_t)   (log standard deviations)
    beta_{t+1} = beta_t + N(0, Q),  alpha_{t+1} = alpha_t + N(0, S),
    h_{t+1} = h_t + N(0, W),  S block diagonal by row of B_t.

One sweep draws beta | ., alpha | ., (mixture indicators, h) | .,
(Q, S, W) | paths.  The indicators are drawn immediately before h and
conditional on the freshly drawn coefficients, which is the ordering that
makes the coefficient blocks valid draws from the indicator-marginalised
conditionals.
"""
from __future__ import annotations

import json
import threading
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import stats

from .exceptions import DataError, EstimationError, SweepError
from .series import Dataset, Frequency, Period
from .statespace import StateSpaceModel, backward_factors, backward_sample, carter_kohn_draw, kalman_filter
from .var import VarSpec, lag_matrix, ols_var_fit, spectral_radius

__all__ = [
    "KSC_PROBS",
    "KSC_MEANS",
    "KSC_VARS",
    "LOG_OFFSET",
    "TvpPriors",
    "McmcSettings",
    "PROFILES",
    "TvpPosterior",
    "SamplerState",
    "init_priors",
    "draw_beta",
    "draw_alpha",
    "draw_sigma",
    "draw_hyper",
    "gibbs_run",
    "unit_lower",
    "alpha_blocks",
    "lag_coefs",
    "ProgressCounter",
    "save_posterior",
    "load_posterior",
]

# Kim, Shephard & Chib (1998) seven-component approximation to log chi^2_1.
KSC_PROBS = np.array([0.00730, 0.10556, 0.00002, 0.04395, 0.34001, 0.24566, 0.25750])
KSC_MEANS = np.array([-10.12999, -3.97281, -8.56686, 2.77786, 0.61942, 1.79518, -1.08819]) - 1.2704
KSC_VARS = np.array([5.79596, 2.61369, 5.17950, 0.16735, 0.64009, 0.34023, 1.26261])
LOG_OFFSET = 0.001
VAR_FLOOR = 1e-12
MAX_SWEEP_FAILURES = 10


# -- layout helpers ----------------------------------------------------------

def alpha_blocks(K: int) -> list[slice]:
    """Slices of the alpha vector belonging to rows 2..K of B_t."""
    out, pos = [], 0
    for i in range(1, K):
        out.append(slice(pos, pos + i))
        pos += i
    return out


def unit_lower(alpha: np.ndarray, K: int) -> np.ndarray:
    """B matrices (..., K, K) from alpha vectors (..., K(K-1)/2)."""
    alpha = np.asarray(alpha, dtype=float)
    B = np.zeros(alpha.shape[:-1] + (K, K))
    B[..., np.arange(K), np.arange(K)] = 1.0
    rows, cols = np.tril_indices(K, -1)
    B[..., rows, cols] = alpha
    return B


def lag_coefs(beta: np.ndarray, spec: VarSpec) -> np.ndarray:
    """Lag matrices (..., p, K, K) from beta vectors (..., n_coef)."""
    K, p = spec.K, spec.p
    C = np.asarray(beta).reshape(beta.shape[:-1] + (K, spec.n_regressors))
    A = C[..., int(spec.intercept):].reshape(beta.shape[:-1] + (K, p, K))
    return np.swapaxes(A, -3, -2)


# -- priors and settings -----------------------------------------------------

@dataclass(frozen=True)
class TvpPriors:
    tau: int
    beta_mean: np.ndarray
    beta_cov: np.ndarray
    alpha_mean: np.ndarray
    alpha_cov: np.ndarray
    log_sigma_mean: np.ndarray
    log_sigma_cov: np.ndarray
    Q_scale: np.ndarray
    Q_dof: float
    S_scales: tuple
    S_dofs: tuple
    W_scale: np.ndarray
    W_dof: float
    k_Q: float = 0.01
    k_S: float = 0.1
    k_W: float = 0.01


def _scaled_prior(k: float, dof: float, cov: np.ndarray) -> np.ndarray:
    return (k * k * dof) * cov


def init_priors(data: Dataset, spec: VarSpec, tau: int = 40, *, k_Q: float = 0.01,
                k_S: float = 0.1, k_W: float = 0.01) -> TvpPriors:
    """Calibrate priors from a constant VAR fitted to the first ``tau`` observations.

    Initial states get means at the training estimates with four times their
    sampling covariance (identity for the log volatilities).  Inverse-Wishart
    scales are ``k^2 * dof`` times the matching training covariance.
    """
    K = spec.K
    if tau < K * spec.p + K + 2:
        raise DataError(f"training length tau={tau} below K*p + K + 2 = {K * spec.p + K + 2}")
    if data.T <= tau + spec.p:
        raise DataError(f"dataset of length {data.T} too short for training length {tau} and p={spec.p}")
    if min(k_Q, k_S, k_W) <= 0:
        raise ValueError("prior scales must be positive")
    try:
        est = ols_var_fit(data.head(tau), spec)
    except (DataError, EstimationError) as exc:
        raise DataError(f"training sample too short or degenerate: {exc}") from exc
    beta_mean = est.beta
    beta_var = est.coef_cov()

    L = np.linalg.cholesky(est.sigma_u)
    d = np.diag(L).copy()
    B = np.diag(d) @ np.linalg.inv(L)
    rows, cols = np.tril_indices(K, -1)
    alpha_mean = B[rows, cols]
    n_alpha = alpha_mean.size
    alpha_var = np.zeros((n_alpha, n_alpha))
    U = est.residuals
    n = U.shape[0]
    a_blocks = alpha_blocks(K)
    for i, blk in enumerate(a_blocks, start=1):
        Zr = -U[:, :i]
        coef = np.linalg.solve(Zr.T @ Zr, Zr.T @ U[:, i])
        resid = U[:, i] - Zr @ coef
        alpha_var[blk, blk] = (resid @ resid / n) * np.linalg.inv(Zr.T @ Zr)

    n_beta = beta_mean.size
    Q_dof = float(max(tau, n_beta + 2))
    S_dofs = tuple(float(b.stop - b.start + 1) for b in a_blocks)
    W_dof = float(K + 1)
    return TvpPriors(
        tau=tau,
        beta_mean=beta_mean,
        beta_cov=4.0 * beta_var,
        alpha_mean=alpha_mean,
        alpha_cov=4.0 * alpha_var,
        log_sigma_mean=np.log(d),
        log_sigma_cov=np.eye(K),
        Q_scale=_scaled_prior(k_Q, Q_dof, beta_var),
        Q_dof=Q_dof,
        S_scales=tuple(_scaled_prior(k_S, dof, alpha_var[b, b]) for b, dof in zip(a_blocks, S_dofs)),
        S_dofs=S_dofs,
        W_scale=_scaled_prior(k_W, W_dof, np.eye(K)),
        W_dof=W_dof,
        k_Q=k_Q, k_S=k_S, k_W=k_W,
    )


@dataclass(frozen=True)
class McmcSettings:
    n_draws: int = 55_000
    burn_in: int = 5_000
    thin: int = 10
    seed: int = 0
    stationarity_rejection: bool = True
    max_rejections: int = 100

    def __post_init__(self):
        if not self.n_draws > self.burn_in >= 0:
            raise ValueError("need n_draws > burn_in >= 0")
        if self.thin < 1:
            raise ValueError("thin must be >= 1")
        if self.max_rejections < 1:
            raise ValueError("max_rejections must be >= 1")

    @property
    def n_retained(self) -> int:
        return (self.n_draws - self.burn_in) // self.thin


PROFILES = {
    "paper": dict(n_draws=55_000, burn_in=5_000, thin=10),
    "desk": dict(n_draws=2_000, burn_in=500, thin=1),
}


# -- conditional draws -------------------------------------------------------

@dataclass
class SamplerState:
    beta: np.ndarray        # (T, n_beta)
    alpha: np.ndarray       # (T, n_alpha)
    log_sigma: np.ndarray   # (T, K)
    Q: np.ndarray
    S: list
    W: np.ndarray
    indicators: np.ndarray | None = None   # (T, K), values 1..7


def _observation_design(X: np.ndarray, K: int) -> np.ndarray:
    T, m = X.shape
    Z = np.zeros((T, K, K * m))
    for i in range(K):
        Z[:, i, i * m : (i + 1) * m] = X
    return Z


def _reduced_cov(alpha: np.ndarray, log_sigma: np.ndarray, K: int) -> np.ndarray:
    Binv = np.linalg.inv(unit_lower(alpha, K))
    var = np.maximum(np.exp(2.0 * log_sigma), VAR_FLOOR)
    omega = (Binv * var[:, None, :]) @ np.swapaxes(Binv, -1, -2)
    return 0.5 * (omega + np.swapaxes(omega, -1, -2))


def residuals(Y: np.ndarray, X: np.ndarray, beta: np.ndarray, K: int) -> np.ndarray:
    C = beta.reshape(beta.shape[0], K, X.shape[1])
    return Y - np.einsum("tkm,tm->tk", C, X)


def draw_beta(Y, X, alpha, log_sigma, Q, priors: TvpPriors, rng: np.random.Generator,
              spec: VarSpec, *, stationarity_rejection: bool = True, max_rejections: int = 100):
    """Draw the coefficient path given B_t, Sigma_t and Q.

    With rejection on, the backward pass is repeated (filter reused) until
    every period's companion matrix is stable; exhausting the budget raises
    :class:`SweepError`.
    """
    K = spec.K
    model = StateSpaceModel(_observation_design(X, K), _reduced_cov(alpha, log_sigma, K), Q,
                            priors.beta_mean, priors.beta_cov)
    fac = backward_factors(kalman_filter(model, Y), Q)
    attempts = max_rejections if stationarity_rejection else 1
    for _ in range(attempts):
        beta = backward_sample(fac, None, rng.standard_normal((model.T, model.n_state)))
        if not stationarity_rejection:
            return beta
        if np.all(spectral_radius(lag_coefs(beta, spec)) < 1.0):
            return beta
    raise SweepError(f"no stationary coefficient path in {max_rejections} attempts")


def draw_alpha(U, log_sigma, S_blocks, priors: TvpPriors, rng: np.random.Generator):
    """Row-by-row draw of the free elements of B_t.

    Row i of ``B_t u_t = Sigma_t eps_t`` reads
    ``u_{i,t} = -sum_{j<i} B_{ij,t} u_{j,t} + sigma_{i,t} eps_{i,t}``, a
    regression on earlier-ordered residuals with known heteroskedastic noise.
    """
    T, K = U.shape
    blocks = alpha_blocks(K)
    alpha = np.empty((T, priors.alpha_mean.size))
    var = np.maximum(np.exp(2.0 * log_sigma), VAR_FLOOR)
    for i, blk in enumerate(blocks, start=1):
        model = StateSpaceModel(-U[:, None, :i], var[:, i, None, None], S_blocks[i - 1],
                                priors.alpha_mean[blk], priors.alpha_cov[blk, blk])
        alpha[:, blk] = carter_kohn_draw(model, U[:, i, None], rng)
    return alpha


def draw_indicators(ystar, log_sigma, rng: np.random.Generator) -> np.ndarray:
    """Mixture component (1..7) per (t, k) given the transformed residuals and h."""
    dev = ystar[..., None] - 2.0 * log_sigma[..., None] - KSC_MEANS
    logw = np.log(KSC_PROBS) - 0.5 * np.log(KSC_VARS) - 0.5 * dev**2 / KSC_VARS
    logw -= logw.max(axis=-1, keepdims=True)
    w = np.exp(logw)
    cdf = np.cumsum(w, axis=-1)
    u = rng.random(ystar.shape)[..., None] * cdf[..., -1:]
    return (u > cdf).sum(axis=-1) + 1


def draw_sigma(Estar, log_sigma, W, priors: TvpPriors, rng: np.random.Generator, *,
               offset: float = LOG_OFFSET):
    """Draw mixture indicators given the current h, then a new h path given them.

    Returns ``(log_sigma, indicators)``.  Observation equation:
    ``log(e*^2 + offset) - m_s = 2 h + N(0, v_s)``.
    """
    T, K = Estar.shape
    ystar = np.log(Estar**2 + offset)
    s = draw_indicators(ystar, log_sigma, rng)
    Z = np.broadcast_to(2.0 * np.eye(K), (T, K, K))
    H = np.zeros((T, K, K))
    H[:, np.arange(K), np.arange(K)] = KSC_VARS[s - 1]
    model = StateSpaceModel(Z, H, W, priors.log_sigma_mean, priors.log_sigma_cov)
    h = carter_kohn_draw(model, ystar - KSC_MEANS[s - 1], rng)
    return h, s


def _draw_iw(scale, dof, rng) -> np.ndarray:
    scale = 0.5 * (scale + scale.T)
    try:
        np.linalg.cholesky(scale)
    except np.linalg.LinAlgError:
        raise SweepError("inverse-Wishart scale not positive definite") from None
    draw = stats.invwishart.rvs(df=dof, scale=scale, random_state=rng)
    draw = np.atleast_2d(draw)
    return 0.5 * (draw + draw.T)


def hyper_posterior(beta, alpha, log_sigma, priors: TvpPriors):
    """(scale, dof) pairs for Q, each S block and W given state paths."""
    def post(path, scale, dof):
        d = np.diff(path, axis=0)
        return scale + d.T @ d, dof + d.shape[0]

    K = log_sigma.shape[1]
    Q = post(beta, priors.Q_scale, priors.Q_dof)
    S = [post(alpha[:, b], sc, dof) for b, sc, dof in zip(alpha_blocks(K), priors.S_scales, priors.S_dofs)]
    W = post(log_sigma, priors.W_scale, priors.W_dof)
    return Q, S, W


def draw_hyper(beta, alpha, log_sigma, priors: TvpPriors, rng: np.random.Generator):
    """Inverse-Wishart draws of (Q, [S_2..S_K], W) from random-walk increments."""
    Qp, Sp, Wp = hyper_posterior(beta, alpha, log_sigma, priors)
    Q = _draw_iw(*Qp, rng)
    S = [_draw_iw(*sp, rng) for sp in Sp]
    W = _draw_iw(*Wp, rng)
    return Q, S, W


# -- driver ------------------------------------------------------------------

class ProgressCounter:
    """Thread-safe progress sink; records the latest (done, total) per chain."""

    def __init__(self, callback: Callable[[int, int], None] | None = None):
        self._lock = threading.Lock()
        self._callback = callback
        self.done = 0
        self.total = 0

    def __call__(self, done: int, total: int) -> None:
        with self._lock:
            self.done, self.total = max(self.done, done), total
            if self._callback is not None:
                self._callback(done, total)


@dataclass
class TvpPosterior:
    spec: VarSpec
    beta: np.ndarray        # (n_keep, T, n_beta)
    alpha: np.ndarray       # (n_keep, T, n_alpha)
    log_sigma: np.ndarray   # (n_keep, T, K)
    Q: np.ndarray           # (n_keep, n_beta, n_beta)
    S: np.ndarray           # (n_keep, n_alpha, n_alpha), block diagonal
    W: np.ndarray           # (n_keep, K, K)
    start: Period
    names: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def n_draws(self) -> int:
        return self.beta.shape[0]

    @property
    def T(self) -> int:
        return self.beta.shape[1]

    @property
    def end(self) -> Period:
        return self.start + (self.T - 1)

    def index_of(self, date: Period) -> int:
        if date.frequency is not self.start.frequency:
            raise DataError(f"date {date} does not match sample frequency {self.start.frequency.value}")
        i = date - self.start
        if not 0 <= i < self.T:
            raise DataError(f"date {date} outside estimation sample {self.start}..{self.end}")
        return i

    def B(self, t: int) -> np.ndarray:
        return unit_lower(self.alpha[:, t], self.spec.K)

    def impact(self, t: int) -> np.ndarray:
        """B_t^{-1} Sigma_t per draw, (n_keep, K, K)."""
        return np.linalg.inv(self.B(t)) * np.exp(self.log_sigma[:, t, None, :])

    def omega(self, t: int) -> np.ndarray:
        L = self.impact(t)
        return L @ np.swapaxes(L, -1, -2)


def _initial_state(priors: TvpPriors, T: int, K: int) -> SamplerState:
    return SamplerState(
        beta=np.tile(priors.beta_mean, (T, 1)),
        alpha=np.tile(priors.alpha_mean, (T, 1)),
        log_sigma=np.tile(priors.log_sigma_mean, (T, 1)),
        Q=priors.Q_scale / priors.Q_dof,
        S=[sc / dof for sc, dof in zip(priors.S_scales, priors.S_dofs)],
        W=priors.W_scale / priors.W_dof,
    )


def _sweep(state: SamplerState, Y, X, priors, spec, settings, rng) -> SamplerState:
    K = spec.K
    beta = draw_beta(Y, X, state.alpha, state.log_sigma, state.Q, priors, rng, spec,
                     stationarity_rejection=settings.stationarity_rejection,
                     max_rejections=settings.max_rejections)
    U = residuals(Y, X, beta, K)
    alpha = draw_alpha(U, state.log_sigma, state.S, priors, rng)
    Estar = np.einsum("tij,tj->ti", unit_lower(alpha, K), U)
    log_sigma, s = draw_sigma(Estar, state.log_sigma, state.W, priors, rng)
    Q, S, W = draw_hyper(beta, alpha, log_sigma, priors, rng)
    return SamplerState(beta, alpha, log_sigma, Q, S, W, s)


def _block_diag(blocks, n):
    out = np.zeros((n, n))
    pos = 0
    for b in blocks:
        k = b.shape[0]
        out[pos : pos + k, pos : pos + k] = b
        pos += k
    return out


def gibbs_run(data: Dataset, spec: VarSpec, priors: TvpPriors, settings: McmcSettings,
              progress: Callable[[int, int], None] | None = None) -> TvpPosterior:
    """Run one chain; deterministic given ``settings.seed``.

    The estimation sample is every observation after the ``priors.tau``
    training observations.  A sweep that fails (e.g. the stationarity
    budget runs out) is retried with fresh randomness; ten consecutive
    failures abort the run.
    """
    tau = priors.tau
    if data.T <= tau + spec.p + 10:
        raise DataError(f"dataset length {data.T} must exceed tau + p + 10 = {tau + spec.p + 10}")
    if data.K != spec.K:
        raise DataError(f"dataset has {data.K} variables, spec expects {spec.K}")
    Y, X = lag_matrix(data.matrix, spec.p, spec.intercept, start=tau)
    T, K = Y.shape
    rng = np.random.default_rng(settings.seed)
    state = _initial_state(priors, T, K)

    n_keep = settings.n_retained
    n_alpha = priors.alpha_mean.size
    n_beta = priors.beta_mean.size
    out = dict(
        beta=np.empty((n_keep, T, n_beta)),
        alpha=np.empty((n_keep, T, n_alpha)),
        log_sigma=np.empty((n_keep, T, K)),
        Q=np.empty((n_keep, n_beta, n_beta)),
        S=np.empty((n_keep, n_alpha, n_alpha)),
        W=np.empty((n_keep, K, K)),
    )
    kept = 0
    failures = 0
    total_failures = 0
    sweep = 0
    while sweep < settings.n_draws:
        try:
            state = _sweep(state, Y, X, priors, spec, settings, rng)
        except (SweepError, EstimationError) as exc:
            failures += 1
            total_failures += 1
            if failures >= MAX_SWEEP_FAILURES:
                raise EstimationError(
                    f"sweep {sweep + 1} failed {failures} consecutive times; last error: {exc}"
                ) from exc
            continue
        failures = 0
        if not (np.all(np.isfinite(state.beta)) and np.all(np.isfinite(state.alpha))
                and np.all(np.isfinite(state.log_sigma))):
            raise EstimationError(f"non-finite state after sweep {sweep + 1}")
        sweep += 1
        after = sweep - settings.burn_in
        if after > 0 and after % settings.thin == 0 and kept < n_keep:
            out["beta"][kept] = state.beta
            out["alpha"][kept] = state.alpha
            out["log_sigma"][kept] = state.log_sigma
            out["Q"][kept] = state.Q
            out["S"][kept] = _block_diag(state.S, n_alpha)
            out["W"][kept] = state.W
            kept += 1
        if progress is not None:
            progress(sweep, settings.n_draws)

    info = dict(settings=asdict(settings), failed_sweeps=total_failures, tau=tau,
                k_Q=priors.k_Q, k_S=priors.k_S, k_W=priors.k_W)
    return TvpPosterior(spec=spec, start=data.start + tau, names=list(data.names), info=info, **out)


# -- persistence -------------------------------------------------------------

POSTERIOR_FORMAT = "tvprebound-posterior"
POSTERIOR_VERSION = 1


def save_posterior(post: TvpPosterior, path) -> Path:
    """Write draws to an ``.npz`` archive (format documented in the README)."""
    path = Path(path)
    meta = dict(format=POSTERIOR_FORMAT, version=POSTERIOR_VERSION,
                K=post.spec.K, p=post.spec.p, intercept=post.spec.intercept,
                start=str(post.start), frequency=post.start.frequency.value,
                names=list(post.names), info=post.info)
    with path.open("wb") as fh:
        np.savez(fh, meta=np.array(json.dumps(meta, sort_keys=True)), beta=post.beta, alpha=post.alpha,
                 log_sigma=post.log_sigma, Q=post.Q, S=post.S, W=post.W)
    return path


def load_posterior(path) -> TvpPosterior:
    with np.load(Path(path), allow_pickle=False) as z:
        meta = json.loads(str(z["meta"]))
        if meta.get("format") != POSTERIOR_FORMAT:
            raise DataError(f"{path} is not a posterior archive")
        if meta.get("version") != POSTERIOR_VERSION:
            raise DataError(f"unsupported posterior archive version {meta.get('version')}")
        arrays = {k: z[k] for k in ("beta", "alpha", "log_sigma", "Q", "S", "W")}
    spec = VarSpec(meta["K"], meta["p"], meta["intercept"])
    start = Period.parse(meta["start"], Frequency(meta["frequency"]))
    return TvpPosterior(spec=spec, start=start, names=meta["names"], info=meta["info"], **arrays)
