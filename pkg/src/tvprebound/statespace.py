"""Linear Gaussian state space with random-walk states.

    y_t = Z_t x_t + v_t,      v_t ~ N(0, H_t)
    x_{t+1} = x_t + w_t,      w_t ~ N(0, Q)
    x_1 ~ N(a1, P1)

``a1``/``P1`` describe the state at the first observation (the prior is
placed directly on x_1, as in the sampler's training-sample calibration).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import EstimationError

__all__ = [
    "StateSpaceModel",
    "FilterResult",
    "kalman_filter",
    "kalman_loglik",
    "kalman_smoother",
    "carter_kohn_draw",
    "backward_sample",
    "draw_mvn",
    "BackwardFactors",
    "backward_factors",
]

_LOG2PI = np.log(2.0 * np.pi)


@dataclass(frozen=True)
class StateSpaceModel:
    Z: np.ndarray    # (T, k, n)
    H: np.ndarray    # (T, k, k)
    Q: np.ndarray    # (n, n)
    a1: np.ndarray   # (n,)
    P1: np.ndarray   # (n, n)

    def __post_init__(self):
        Z = np.asarray(self.Z, dtype=float)
        H = np.asarray(self.H, dtype=float)
        if Z.ndim != 3:
            raise ValueError("Z must be (T, k, n)")
        T, k, n = Z.shape
        if H.shape != (T, k, k):
            raise ValueError(f"H must be {(T, k, k)}, got {H.shape}")
        Q = np.asarray(self.Q, dtype=float).reshape(n, n)
        a1 = np.asarray(self.a1, dtype=float).reshape(n)
        P1 = np.asarray(self.P1, dtype=float).reshape(n, n)
        for name, val in (("Z", Z), ("H", H), ("Q", Q), ("a1", a1), ("P1", P1)):
            object.__setattr__(self, name, val)

    @property
    def T(self) -> int:
        return self.Z.shape[0]

    @property
    def n_obs(self) -> int:
        return self.Z.shape[1]

    @property
    def n_state(self) -> int:
        return self.Z.shape[2]


@dataclass
class FilterResult:
    means: np.ndarray   # (T, n) filtered E[x_t | y_1..t]
    covs: np.ndarray    # (T, n, n)
    loglik: float


def _sym(a):
    return 0.5 * (a + np.swapaxes(a, -1, -2))


def kalman_filter(model: StateSpaceModel, y) -> FilterResult:
    """Forward pass with the prediction-error decomposition of the likelihood."""
    y = np.asarray(y, dtype=float).reshape(model.T, model.n_obs)
    T, k, n = model.Z.shape
    means = np.empty((T, n))
    covs = np.empty((T, n, n))
    a = model.a1.copy()
    P = model.P1.copy()
    ll = 0.0
    Q = model.Q
    Z, H = model.Z, model.H
    for t in range(T):
        Zt = Z[t]
        PZ = P @ Zt.T
        if k == 1:
            f = Zt[0] @ PZ[:, 0] + H[t, 0, 0]
            if not f > 0:
                raise EstimationError(f"innovation variance not positive at t={t}")
            v = y[t, 0] - Zt[0] @ a
            g = PZ[:, 0] / f
            ll -= 0.5 * (_LOG2PI + np.log(f) + v * v / f)
            a = a + g * v
            P = P - np.outer(g, PZ[:, 0])
        else:
            F = Zt @ PZ + H[t]
            F = 0.5 * (F + F.T)
            try:
                icF = np.linalg.inv(np.linalg.cholesky(F))
            except np.linalg.LinAlgError:
                raise EstimationError(f"innovation covariance not positive definite at t={t}") from None
            w = icF @ (y[t] - Zt @ a)
            G = icF @ PZ.T          # cF^-1 Z P, so the gain is G' cF^-1
            ll -= 0.5 * (k * _LOG2PI - 2.0 * np.log(np.diag(icF)).sum() + w @ w)
            a = a + G.T @ w
            P = P - G.T @ G
        P = 0.5 * (P + P.T)
        means[t] = a
        covs[t] = P
        P = P + Q
    return FilterResult(means, covs, float(ll))


def kalman_loglik(model: StateSpaceModel, y) -> float:
    return kalman_filter(model, y).loglik


def _sqrt_psd(cov: np.ndarray) -> np.ndarray:
    """Batched square roots ``R R' = cov``; Cholesky where possible, clipped eigh otherwise."""
    cov = 0.5 * (cov + np.swapaxes(cov, -1, -2))
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        pass
    out = np.empty_like(cov)
    for idx in np.ndindex(cov.shape[:-2]):
        try:
            out[idx] = np.linalg.cholesky(cov[idx])
        except np.linalg.LinAlgError:
            lam, V = np.linalg.eigh(cov[idx])
            out[idx] = V * np.sqrt(np.clip(lam, 0.0, None))
    return out


def draw_mvn(mean: np.ndarray, cov: np.ndarray, z: np.ndarray) -> np.ndarray:
    """``mean + R z`` with ``R R' = cov``; tolerates PSD and slightly indefinite covs.

    ``z`` may carry leading axes (several draws sharing one covariance).
    """
    return mean + z @ _sqrt_psd(cov).T


@dataclass
class BackwardFactors:
    """Per-period smoothing gains and conditional-covariance roots.

    They depend only on the filter output and Q, so repeated path draws
    (e.g. under rejection sampling) reuse them.
    """

    means: np.ndarray   # (T, n) filtered means
    gains: np.ndarray   # (T-1, n, n)
    roots: np.ndarray   # (T, n, n); roots[-1] factors the final filtered cov


def backward_factors(filt: FilterResult, Q: np.ndarray) -> BackwardFactors:
    Pf = filt.covs[:-1]
    Pp = Pf + Q
    try:
        J = np.swapaxes(np.linalg.solve(Pp, Pf), -1, -2)
    except np.linalg.LinAlgError:
        J = Pf @ np.linalg.pinv(Pp)
    cond = Pf - J @ Pf
    roots = _sqrt_psd(np.concatenate([cond, filt.covs[-1:]], axis=0))
    return BackwardFactors(filt.means, J, roots)


def backward_sample(filt: FilterResult | BackwardFactors, Q: np.ndarray | None, z: np.ndarray) -> np.ndarray:
    """Backward sampling pass given standard normals ``z``.

    ``z`` is (T, n) for one path or (S, T, n) for S paths drawn jointly.
    Pass precomputed :class:`BackwardFactors` to skip the factorisations.
    """
    fac = filt if isinstance(filt, BackwardFactors) else backward_factors(filt, Q)
    means, J, R = fac.means, fac.gains, fac.roots
    T, n = means.shape
    single = z.ndim == 2
    zz = z[None] if single else z
    noise = np.einsum("tij,stj->sti", R, zz)
    out = np.empty(zz.shape)
    out[:, -1] = means[-1] + noise[:, -1]
    for t in range(T - 2, -1, -1):
        out[:, t] = means[t] + (out[:, t + 1] - means[t]) @ J[t].T + noise[:, t]
    return out[0] if single else out


def carter_kohn_draw(model: StateSpaceModel, y, rng: np.random.Generator, size: int | None = None):
    """Joint draw(s) of x_1..x_T from p(x | y) by forward filtering, backward sampling.

    Returns (T, n), or (size, T, n) when ``size`` is given.
    """
    filt = kalman_filter(model, y)
    shape = (model.T, model.n_state) if size is None else (size, model.T, model.n_state)
    return backward_sample(filt, model.Q, rng.standard_normal(shape))


def kalman_smoother(model: StateSpaceModel, y):
    """Rauch-Tung-Striebel smoothed means and covariances, (T, n) and (T, n, n)."""
    filt = kalman_filter(model, y)
    T = model.T
    m = filt.means.copy()
    C = filt.covs.copy()
    for t in range(T - 2, -1, -1):
        Pf = filt.covs[t]
        Pp = Pf + model.Q
        J = np.linalg.solve(Pp, Pf).T
        m[t] = filt.means[t] + J @ (m[t + 1] - filt.means[t])
        C[t] = _sym(Pf + J @ (C[t + 1] - Pp) @ J.T)
    return m, C
