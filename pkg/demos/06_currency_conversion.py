"""Re-expressing a price series in another currency before analysis.

A synthetic exchange rate with its own random walk is joined to the sample
prices on common dates; weekends are missing from the rate file, so the
join drops those days.
"""
import numpy as np

from mfseries import mfdfa, synth
from mfseries.io import convert_currency, ingest_csv, sample_prices_path
from mfseries.series import TimeSeries, log_returns, normalize_returns

prices = ingest_csv(sample_prices_path())
weekday = (prices.dates.astype("datetime64[D]").view("int64") - 4) % 7 < 5
rate_values = 0.12 * np.exp(np.cumsum(0.004 * synth.gaussian_white(int(weekday.sum()), seed=5)))
rates = TimeSeries(rate_values, prices.dates[weekday], "rate")

converted, join = convert_currency(prices, rates, report=True)
print(f"matched {join.matched} days, dropped {join.dropped_prices} price days")

grid = mfdfa.GridSpec.default(len(converted) - 1, q_min=-5, q_max=5)
for name, ts in (("local currency", prices), ("converted", converted)):
    r = normalize_returns(log_returns(ts))
    g = mfdfa.GridSpec(grid.q_values, grid.scales[4 * grid.scales <= len(r)], 2)
    _, hs = mfdfa.mfdfa(r, g, (15, 100))
    print(f"{name:>15}: h(2) = {hs.h_at(2):.3f}, h(-5) - h(5) = {hs.h_at(-5) - hs.h_at(5):.3f}")
