"""Kalman likelihood and Carter-Kohn draws on a local-level model with a closed form."""
import numpy as np

from tvprebound import analytic_local_level, carter_kohn_draw, kalman_loglik, kalman_smoother

ll = analytic_local_level(q=0.2, r=1.0, T=40, m1=0.0, p1=4.0)
y = np.cumsum(0.4 * np.random.default_rng(1).standard_normal(40)) + np.random.default_rng(2).standard_normal(40)

print("log likelihood %.6f" % kalman_loglik(ll.model, y))
mean, cov = ll.smoothed(y)
sm, sc = kalman_smoother(ll.model, y)
print("smoother vs dense closed form, max gap %.2e" % np.abs(sm[:, 0] - mean).max())

draws = carter_kohn_draw(ll.model, y, np.random.default_rng(3), size=20_000)[:, :, 0]
print("sampled mean vs exact, max gap %.3f" % np.abs(draws.mean(0) - mean).max())
print("sampled sd vs exact, max gap %.3f" % np.abs(draws.std(0) - np.sqrt(np.diag(cov))).max())
