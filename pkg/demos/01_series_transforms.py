"""Series handling: periods, logs, deflation, quarterly aggregation, Hamilton cycles, CCF."""
import numpy as np

from tvprebound import Period, TimeSeries, ccf, deflate, hamilton_filter, log_transform, to_quarterly

rng = np.random.default_rng(0)
start = Period.parse("1976-01")
n = 480
cpi = TimeSeries("cpi", start.frequency, start, np.exp(np.cumsum(0.003 + 0.002 * rng.standard_normal(n))))
price = TimeSeries("price", start.frequency, start, 30 * np.exp(np.cumsum(0.01 * rng.standard_normal(n))) * cpi.values)

real = deflate(price, cpi, Period.parse("2012-01"))      # base-period prices
print("real price, first and last:", real.values[0], real.values[-1])

cycle = hamilton_filter(log_transform(real))             # monthly defaults h=24, p=12
print("cycle starts", cycle.start, "length", len(cycle), "sd %.4f" % cycle.values.std())

q = to_quarterly(real, "mean")
print("quarterly", q.start, "to", q.end)

other = TimeSeries("lead", cycle.frequency, cycle.start, np.roll(cycle.values, 3) + 0.01 * rng.standard_normal(len(cycle)))
res = ccf(cycle, other, 6)
for lag, c in res:
    print(f"lag {lag:+d}  {c:+.3f}")
print(f"95% band +/- {res.band:.3f}")
