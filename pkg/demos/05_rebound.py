"""Date-specific responses and rebound tables from a posterior."""
from dataclasses import replace

import numpy as np

from tvprebound import CycleDate, McmcSettings, ShockSpec, VarSpec, gibbs_run, init_priors, rebound_path, rebound_table, simulate_tvp
from tvprebound.cli import default_synthetic

# the arithmetic: 1 - x_i / x_0, in percent, read at whole years
x = -np.linspace(1.0, 0.2, 61)
print("rebound at 1..5 years:", np.round(rebound_path(x, 12), 1))

spec = replace(default_synthetic(3, 2, 200, seed=8), W=1e-3)
data, _ = simulate_tvp(spec)
post = gibbs_run(data, VarSpec(3, 2), init_priors(data, VarSpec(3, 2), 40), McmcSettings(200, 50, 1, seed=8))

dates = [CycleDate("peak", post.start + 30), CycleDate("peak", post.start + 100),
         CycleDate("peak", post.start - 12)]            # the last one precedes the sample
table = rebound_table(post, dates, ShockSpec(variable=2, sign=-1))
print(table.to_text())
