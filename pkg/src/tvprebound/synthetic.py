"""Data generators with known truth, used by the recovery tests and demos."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import EstimationError
from .sampler import lag_coefs, unit_lower
from .series import Dataset, Frequency, Period
from .statespace import StateSpaceModel, _sqrt_psd
from .var import BURN_IN, VarEstimate, VarSpec, spectral_radius

__all__ = ["SyntheticSpec", "TruthPaths", "simulate_tvp", "LocalLevel", "analytic_local_level"]

MAX_EXPLOSIVE_RUN = 50


@dataclass(frozen=True)
class SyntheticSpec:
    K: int
    p: int
    T: int
    beta0: np.ndarray
    alpha0: np.ndarray
    log_sigma0: np.ndarray
    Q: np.ndarray | float = 0.0
    S: np.ndarray | float = 0.0
    W: np.ndarray | float = 0.0
    seed: int = 0
    intercept: bool = True
    reject_explosive: bool = True
    max_rejections: int = 100

    @property
    def var_spec(self) -> VarSpec:
        return VarSpec(self.K, self.p, self.intercept)

    def _cov(self, value, n):
        m = np.asarray(value, dtype=float)
        if m.ndim == 0:
            return m * np.eye(n)
        if m.ndim == 1:
            return np.diag(m)
        return m

    def initial_impact(self) -> np.ndarray:
        """B_0^{-1} Sigma_0, the t=0 structural impact matrix."""
        alpha0 = np.asarray(self.alpha0, dtype=float).reshape(self.K * (self.K - 1) // 2)
        h0 = np.asarray(self.log_sigma0, dtype=float).reshape(self.K)
        return np.linalg.inv(unit_lower(alpha0, self.K)) * np.exp(h0)

    def constant_params(self) -> VarEstimate:
        """The t=0 parameters as a constant VAR (the DGP when Q = S = W = 0)."""
        vs = self.var_spec
        beta0 = np.asarray(self.beta0, dtype=float).reshape(vs.n_coef)
        C = beta0.reshape(self.K, vs.n_regressors)
        M = self.initial_impact()
        return VarEstimate.from_params(lag_coefs(beta0, vs), M @ M.T, C[:, 0] if self.intercept else None)

    def covariances(self):
        vs = self.var_spec
        n_alpha = self.K * (self.K - 1) // 2
        Q = self._cov(self.Q, vs.n_coef)
        S = self._cov(self.S, n_alpha)
        W = self._cov(self.W, self.K)
        for name, m in (("Q", Q), ("S", S), ("W", W)):
            if not np.allclose(m, m.T) or (m.size and np.linalg.eigvalsh(m).min() < -1e-12):
                raise ValueError(f"{name} must be symmetric positive semidefinite")
        return Q, S, W


@dataclass(frozen=True)
class TruthPaths:
    beta: np.ndarray        # (T, n_coef)
    alpha: np.ndarray       # (T, n_alpha)
    log_sigma: np.ndarray   # (T, K)
    residuals: np.ndarray   # (T, K) reduced-form innovations actually used


def _walk(rng, x0, cov, T):
    n = x0.size
    path = np.empty((T, n))
    path[0] = x0
    if n == 0:
        return path
    steps = rng.standard_normal((T - 1, n)) @ _sqrt_psd(cov).T
    path[1:] = x0 + np.cumsum(steps, axis=0)
    return path


def _walk_beta(rng, beta0, vs: VarSpec, Q, T, reject: bool, max_rejections: int):
    path = np.empty((T, vs.n_coef))
    path[0] = beta0
    R = _sqrt_psd(Q)
    run = 0
    for t in range(1, T):
        for _ in range(max_rejections if reject else 1):
            cand = path[t - 1] + R @ rng.standard_normal(vs.n_coef)
            if not reject or spectral_radius(lag_coefs(cand, vs)) < 1:
                break
        path[t] = cand
        run = run + 1 if spectral_radius(lag_coefs(cand, vs)) >= 1 else 0
        if reject and run > MAX_EXPLOSIVE_RUN:
            raise EstimationError(f"coefficient path explosive for more than {MAX_EXPLOSIVE_RUN} consecutive periods")
    return path


def simulate_tvp(spec: SyntheticSpec, *, start: Period | None = None, names=None):
    """Simulate the drifting-coefficient, stochastic-volatility VAR.

    The structural shocks come first from the generator, exactly as in
    :func:`tvprebound.var.simulate_var`, followed by the random-walk
    increments; parameters stay at their initial values during the burn-in.
    With Q = S = W = 0 the output is identical to ``simulate_var`` on
    ``spec.constant_params()`` with the same seed: the constant impact is then
    refactored through the Cholesky factor of its covariance, exactly as the
    constant simulator does.
    """
    vs = spec.var_spec
    K, p, T = spec.K, spec.p, spec.T
    beta0 = np.asarray(spec.beta0, dtype=float).reshape(vs.n_coef)
    alpha0 = np.asarray(spec.alpha0, dtype=float).reshape(K * (K - 1) // 2)
    h0 = np.asarray(spec.log_sigma0, dtype=float).reshape(K)
    Q, S, W = spec.covariances()
    if spec.reject_explosive and spectral_radius(lag_coefs(beta0, vs)) >= 1:
        raise EstimationError("initial coefficients are not stable")

    rng = np.random.default_rng(spec.seed)
    z = rng.standard_normal((BURN_IN + T, K))
    beta = _walk_beta(rng, beta0, vs, Q, T, spec.reject_explosive, spec.max_rejections)
    alpha = _walk(rng, alpha0, S, T)
    h = _walk(rng, h0, W, T)

    A = lag_coefs(beta, vs)                                   # (T, p, K, K)
    c = beta.reshape(T, K, vs.n_regressors)[:, :, 0] if spec.intercept else np.zeros((T, K))
    impact = np.linalg.inv(unit_lower(alpha, K)) * np.exp(h)[:, None, :]
    if not S.any() and not W.any():
        M = spec.initial_impact()
        impact[:] = np.linalg.cholesky(M @ M.T)

    n = BURN_IN + T
    y = np.zeros((n + p, K))
    u = np.empty((T, K))
    for s in range(n):
        t = max(s - BURN_IN, 0)
        shock = impact[t] @ z[s]
        acc = c[t] + shock
        for i in range(p):
            acc = acc + A[t, i] @ y[p + s - 1 - i]
        y[p + s] = acc
        if s >= BURN_IN:
            u[s - BURN_IN] = shock
    start = start or Period(2000, 1, Frequency.MONTHLY)
    names = names or [f"y{k + 1}" for k in range(K)]
    data = Dataset.from_matrix(y[p + BURN_IN :], names, start)
    return data, TruthPaths(beta, alpha, h, u)


@dataclass(frozen=True)
class LocalLevel:
    """Local-level model ``y_t = x_t + N(0, r)``, ``x_{t+1} = x_t + N(0, q)``, x_1 ~ N(m1, p1)."""

    q: float
    r: float
    T: int
    m1: float = 0.0
    p1: float = 1.0

    @property
    def model(self) -> StateSpaceModel:
        T = self.T
        return StateSpaceModel(np.ones((T, 1, 1)), np.full((T, 1, 1), self.r), [[self.q]], [self.m1], [[self.p1]])

    def state_cov(self) -> np.ndarray:
        i = np.arange(self.T)
        return self.p1 + self.q * np.minimum.outer(i, i)

    def smoothed(self, y):
        """Exact E[x | y] and Cov[x | y] from the joint Gaussian of (x, y)."""
        y = np.asarray(y, dtype=float).ravel()
        Sx = self.state_cov()
        Sy = Sx + self.r * np.eye(self.T)
        gain = np.linalg.solve(Sy, Sx).T
        mean = self.m1 + gain @ (y - self.m1)
        cov = Sx - gain @ Sx
        return mean, 0.5 * (cov + cov.T)

    def smoothed_mean(self, y) -> np.ndarray:
        return self.smoothed(y)[0]


def analytic_local_level(q: float, r: float, T: int, m1: float = 0.0, p1: float = 1.0) -> LocalLevel:
    if q < 0 or r <= 0:
        raise ValueError("need q >= 0 and r > 0")
    return LocalLevel(float(q), float(r), int(T), float(m1), float(p1))
