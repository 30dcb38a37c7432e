"""Drifting-coefficient VAR with stochastic volatility for date-specific rebound analysis."""
from .analysis import (CycleDate, IrfPosterior, ReboundColumn, ReboundTable, date_set, irf_at_date,
                       rebound_path, rebound_table, summarize, write_irf_fans, write_rebound_density)
from .exceptions import (ConfigError, DataError, EstimationError, IngestionError, ReboundError,
                         SweepError)
from .sampler import (McmcSettings, TvpPosterior, TvpPriors, gibbs_run, init_priors, load_posterior,
                      save_posterior)
from .series import (CcfResult, Dataset, Frequency, Period, TimeSeries, align, ccf, deflate,
                     hamilton_filter, load_csv, log_transform, to_quarterly, write_csv)
from .statespace import StateSpaceModel, carter_kohn_draw, kalman_filter, kalman_loglik, kalman_smoother
from .synthetic import LocalLevel, SyntheticSpec, TruthPaths, analytic_local_level, simulate_tvp
from .var import (ImpactMatrix, LagSelection, ShockSpec, VarEstimate, VarSpec, cholesky_impact,
                  irf_constant, ols_var_fit, select_lag, simulate_var)

__version__ = "0.1.0"
