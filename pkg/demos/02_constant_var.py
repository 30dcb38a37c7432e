"""Constant-coefficient VAR: lag choice, OLS fit, Cholesky identification, responses."""
import numpy as np

from tvprebound import ShockSpec, VarEstimate, VarSpec, cholesky_impact, irf_constant, ols_var_fit, select_lag, simulate_var

A = np.array([[[0.5, 0.1, 0.0], [-0.1, 0.6, 0.0], [0.0, 0.2, 0.4]],
              [[-0.3, 0.0, 0.0], [0.0, 0.25, 0.0], [0.0, 0.0, -0.2]]])
truth = VarEstimate.from_params(A, np.array([[1.0, 0.2, 0.1], [0.2, 1.0, 0.3], [0.1, 0.3, 1.0]]))
data = simulate_var(truth, 600, seed=3, names=["activity", "energy", "price"])

sel = select_lag(data, 6)
print("AIC picks", sel.p_aic, "BIC picks", sel.p_bic)
for row in sel.table:
    print("p=%d  aic %.4f  bic %.4f" % (row["p"], row["aic"], row["bic"]))

fit = ols_var_fit(data, VarSpec(3, sel.p_bic))
impact = cholesky_impact(fit.sigma_u)
resp = irf_constant(fit, impact, 24, ShockSpec(variable=2, sign=-1))   # negative energy shock
print("energy response, first year:", np.round(resp[1, :13], 3))
print("activity response, first year:", np.round(resp[0, :13], 3))
