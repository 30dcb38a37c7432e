"""Simulate a drifting VAR with stochastic volatility and run a short Gibbs chain on it.

A real analysis uses the "desk" (2,000 sweeps) or "paper" (55,000) profiles;
this short chain only shows the moving parts.
"""
from dataclasses import replace

import numpy as np

from tvprebound import McmcSettings, VarSpec, gibbs_run, init_priors, load_posterior, save_posterior, simulate_tvp
from tvprebound.cli import default_synthetic

spec = replace(default_synthetic(3, 1, 200, seed=4), Q=5e-6, S=3e-4, W=1e-3)
data, truth = simulate_tvp(spec)

priors = init_priors(data, VarSpec(3, 1), tau=40)
settings = McmcSettings(n_draws=300, burn_in=100, thin=2, seed=4)
post = gibbs_run(data, VarSpec(3, 1), priors, settings, progress=lambda i, n: i % 100 == 0 and print("sweep", i, "of", n))
print("retained draws", post.n_draws, "estimation sample", post.start, "to", post.end)

vol = np.exp(post.log_sigma)
med = np.median(vol, axis=0)
true_vol = np.exp(truth.log_sigma[40:])
print("median volatility vs truth (first variable), every 40 periods:")
for t in range(0, post.T, 40):
    print(f"  {post.start + t}  {med[t, 0]:.3f}  {true_vol[t, 0]:.3f}")

path = save_posterior(post, "/tmp/demo_posterior.npz")
print("round-trip equal:", np.array_equal(load_posterior(path).beta, post.beta))
