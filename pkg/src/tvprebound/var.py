"""Constant-parameter reduced-form VAR(p).

Least-squares fitting, information-criterion lag selection, recursive
(Cholesky) identification and moving-average impulse responses.  The same
routines serve as the reference the time-varying sampler is checked against.

Coefficient layout used throughout the package: for a VAR with ``K``
variables and ``p`` lags the regressor vector at time t is
``x_t = [1, y_{t-1}', ..., y_{t-p}']`` (the leading 1 only with an
intercept) and the coefficient matrix ``C`` is ``K x len(x_t)`` so that
``y_t = C x_t + u_t``.  Flattened coefficient vectors are ``C`` in
row-major order, i.e. equation by equation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DataError, EstimationError
from .series import Dataset, Frequency, Period

__all__ = [
    "VarSpec",
    "VarEstimate",
    "ImpactMatrix",
    "ShockSpec",
    "lag_matrix",
    "ols_var_fit",
    "select_lag",
    "LagSelection",
    "cholesky_impact",
    "irf_constant",
    "propagate",
    "companion",
    "spectral_radius",
    "simulate_var",
]


@dataclass(frozen=True)
class VarSpec:
    K: int
    p: int
    intercept: bool = True

    def __post_init__(self):
        if self.K < 1 or self.p < 1:
            raise ValueError("VarSpec needs K >= 1 and p >= 1")

    @property
    def n_regressors(self) -> int:
        return self.K * self.p + int(self.intercept)

    @property
    def n_coef(self) -> int:
        return self.K * self.n_regressors


@dataclass(frozen=True)
class ShockSpec:
    """Structural shock to variable ``variable`` (1-based, in identification order) of ``size`` SDs.

    The default is a negative one-SD shock to the second variable (energy use).
    """

    variable: int = 2
    sign: int = -1
    size: float = 1.0

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValueError("shock sign must be +1 or -1")
        if not self.size > 0:
            raise ValueError("shock size must be positive")
        if self.variable < 1:
            raise ValueError("shock variable index must be >= 1")

    @property
    def index(self) -> int:
        """0-based column of the shocked variable."""
        return self.variable - 1

    @property
    def scale(self) -> float:
        return self.sign * self.size


@dataclass(frozen=True)
class VarEstimate:
    spec: VarSpec
    coefs: np.ndarray          # (p, K, K): A_1..A_p
    intercept: np.ndarray      # (K,), zeros when spec.intercept is False
    sigma_u: np.ndarray        # (K, K) residual covariance
    loglik: float
    T_effective: int
    residuals: np.ndarray | None = None
    xtx_inv: np.ndarray | None = None

    @property
    def coef_matrix(self) -> np.ndarray:
        """The K x n_regressors matrix ``C`` of the module docstring."""
        blocks = [self.intercept[:, None]] if self.spec.intercept else []
        blocks += list(self.coefs)
        return np.hstack(blocks)

    @property
    def beta(self) -> np.ndarray:
        return self.coef_matrix.ravel()

    def coef_cov(self) -> np.ndarray:
        """Asymptotic covariance of :attr:`beta` (equation-major), ``Omega kron (X'X)^-1``."""
        if self.xtx_inv is None:
            raise ValueError("estimate carries no regressor cross-product")
        return np.kron(self.sigma_u, self.xtx_inv)

    @classmethod
    def from_params(cls, coefs, sigma_u, intercept=None) -> "VarEstimate":
        """Wrap known parameters (e.g. a simulation DGP) as an estimate."""
        A = np.asarray(coefs, dtype=float)
        if A.ndim == 2:
            A = A[None]
        p, K, _ = A.shape
        c = np.zeros(K) if intercept is None else np.asarray(intercept, dtype=float)
        spec = VarSpec(K, p, intercept is not None)
        return cls(spec, A, c, np.asarray(sigma_u, dtype=float).reshape(K, K), np.nan, 0)


@dataclass(frozen=True)
class ImpactMatrix:
    L: np.ndarray

    def __post_init__(self):
        L = np.asarray(self.L, dtype=float)
        if L.ndim != 2 or L.shape[0] != L.shape[1]:
            raise ValueError("impact matrix must be square")
        if np.any(np.triu(L, 1) != 0):
            raise ValueError("impact matrix must be lower triangular")
        if np.any(np.diag(L) <= 0):
            raise ValueError("impact matrix needs a positive diagonal")
        object.__setattr__(self, "L", L)


def lag_matrix(y: np.ndarray, p: int, intercept: bool = True, start: int | None = None):
    """Return (Y, X) for observations ``start..T-1`` regressed on their p lags."""
    y = np.asarray(y, dtype=float)
    T, K = y.shape
    start = p if start is None else start
    if start < p:
        raise ValueError("start must leave room for p lags")
    n = T - start
    cols = [np.ones((n, 1))] if intercept else []
    for i in range(1, p + 1):
        cols.append(y[start - i : T - i])
    return y[start:], np.hstack(cols)


def _data_matrix(data) -> np.ndarray:
    return data.matrix if isinstance(data, Dataset) else np.asarray(data, dtype=float)


def ols_var_fit(data, spec: VarSpec, *, start: int | None = None) -> VarEstimate:
    """Equation-by-equation least squares; ``start`` fixes the first dependent observation.

    The residual covariance divides by the number of dependent observations
    (the Gaussian maximum-likelihood estimate).
    """
    y = _data_matrix(data)
    if y.ndim != 2 or y.shape[1] != spec.K:
        raise DataError(f"data must be T x {spec.K}")
    Y, X = lag_matrix(y, spec.p, spec.intercept, start)
    n, m = X.shape
    if n <= m + spec.K:
        raise DataError(f"{n} observations are too few for a VAR({spec.p}) with K={spec.K}")
    xtx = X.T @ X
    # rank test on the column-scaled design; an exactly collinear column shows up here
    scale = np.sqrt(np.diag(xtx))
    if np.any(scale == 0) or np.linalg.matrix_rank(X / scale) < m:
        raise EstimationError("singular regressor cross-product (collinear or constant regressors)")
    xtx_inv = np.linalg.inv(xtx)
    C = np.linalg.solve(xtx, X.T @ Y).T
    U = Y - X @ C.T
    sigma = U.T @ U / n
    sigma = 0.5 * (sigma + sigma.T)
    sign, logdet = np.linalg.slogdet(sigma)
    loglik = -0.5 * n * (spec.K * np.log(2 * np.pi) + logdet + spec.K) if sign > 0 else -np.inf
    off = int(spec.intercept)
    coefs = np.stack([C[:, off + i * spec.K : off + (i + 1) * spec.K] for i in range(spec.p)])
    c = C[:, 0].copy() if spec.intercept else np.zeros(spec.K)
    return VarEstimate(spec, coefs, c, sigma, float(loglik), n, U, xtx_inv)


@dataclass(frozen=True)
class LagSelection:
    p_aic: int
    p_bic: int
    table: list[dict]   # rows: {"p", "aic", "bic", "logdet", "n_params"}


def select_lag(data, p_max: int, intercept: bool = True) -> LagSelection:
    """AIC/BIC over p = 1..p_max, every candidate fitted on the sample implied by p_max."""
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    y = _data_matrix(data)
    K = y.shape[1]
    rows = []
    for p in range(1, p_max + 1):
        spec = VarSpec(K, p, intercept)
        est = ols_var_fit(y, spec, start=p_max)
        T = est.T_effective
        logdet = np.linalg.slogdet(est.sigma_u)[1]
        m = spec.n_coef
        rows.append(dict(p=p, aic=logdet + 2.0 * m / T, bic=logdet + m * np.log(T) / T,
                         logdet=logdet, n_params=m))
    p_aic = min(rows, key=lambda r: r["aic"])["p"]
    p_bic = min(rows, key=lambda r: r["bic"])["p"]
    return LagSelection(p_aic, p_bic, rows)


def cholesky_impact(omega) -> ImpactMatrix:
    omega = np.asarray(omega, dtype=float)
    if omega.ndim != 2 or omega.shape[0] != omega.shape[1]:
        raise ValueError("covariance must be square")
    if not np.allclose(omega, omega.T, rtol=0, atol=1e-12 * max(1.0, np.abs(omega).max())):
        raise ValueError("covariance must be symmetric")
    try:
        L = np.linalg.cholesky(0.5 * (omega + omega.T))
    except np.linalg.LinAlgError:
        raise ValueError("covariance is not positive definite") from None
    return ImpactMatrix(L)


def propagate(coefs: np.ndarray, impulse: np.ndarray, H: int) -> np.ndarray:
    """MA recursion ``r_h = sum_i A_i r_{h-i}`` starting from ``r_0 = impulse``.

    ``coefs`` has shape (..., p, K, K) and ``impulse`` (..., K); leading axes
    broadcast, which lets the posterior code push all draws through at once.
    Returns (..., K, H + 1).
    """
    coefs = np.asarray(coefs, dtype=float)
    impulse = np.asarray(impulse, dtype=float)
    p = coefs.shape[-3]
    lead = np.broadcast_shapes(coefs.shape[:-3], impulse.shape[:-1])
    K = impulse.shape[-1]
    out = np.zeros(lead + (K, H + 1))
    out[..., 0] = impulse
    for h in range(1, H + 1):
        acc = np.zeros(lead + (K,))
        for i in range(1, min(h, p) + 1):
            acc = acc + np.einsum("...jk,...k->...j", coefs[..., i - 1, :, :], out[..., h - i])
        out[..., h] = acc
    return out


def irf_constant(est: VarEstimate, impact: ImpactMatrix, H: int, shock: ShockSpec) -> np.ndarray:
    """K x (H+1) responses to ``shock``; the intercept plays no role."""
    if H < 0:
        raise ValueError("H must be >= 0")
    K = est.spec.K
    if not 1 <= shock.variable <= K:
        raise ValueError(f"shock variable {shock.variable} out of range 1..{K}")
    impulse = shock.scale * impact.L[:, shock.index]
    return propagate(est.coefs, impulse, H)


def companion(coefs: np.ndarray) -> np.ndarray:
    """Companion matrix (..., Kp, Kp) of lag matrices (..., p, K, K)."""
    coefs = np.asarray(coefs, dtype=float)
    p, K = coefs.shape[-3], coefs.shape[-1]
    lead = coefs.shape[:-3]
    C = np.zeros(lead + (K * p, K * p))
    C[..., :K, :] = np.concatenate([coefs[..., i, :, :] for i in range(p)], axis=-1)
    if p > 1:
        C[..., K:, :-K] = np.eye(K * (p - 1))
    return C


def spectral_radius(coefs: np.ndarray) -> np.ndarray:
    return np.abs(np.linalg.eigvals(companion(coefs))).max(axis=-1)


BURN_IN = 200


def simulate_var(params: VarEstimate, T: int, seed, *, start: Period | None = None,
                 names=None, allow_unstable: bool = False) -> Dataset:
    """Gaussian VAR sample of length T after discarding BURN_IN draws.

    Random-number contract: one ``standard_normal((BURN_IN + T, K))`` call on a
    fresh ``default_rng(seed)``; innovations are those draws times the
    Cholesky factor of the covariance.  The synthetic TVP simulator consumes
    the stream identically, which keeps its degenerate case equal to this one.
    """
    K, p = params.spec.K, params.spec.p
    if not allow_unstable and spectral_radius(params.coefs) >= 1:
        raise EstimationError("VAR parameters are not stable (companion spectral radius >= 1)")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((BURN_IN + T, K))
    L = np.linalg.cholesky(params.sigma_u)
    n = BURN_IN + T
    y = np.zeros((n + p, K))
    for t in range(n):
        acc = params.intercept + L @ z[t]
        for i in range(p):
            acc = acc + params.coefs[i] @ y[p + t - 1 - i]
        y[p + t] = acc
    start = start or Period(2000, 1, Frequency.MONTHLY)
    names = names or [f"y{k + 1}" for k in range(K)]
    return Dataset.from_matrix(y[p + BURN_IN :], names, start)
