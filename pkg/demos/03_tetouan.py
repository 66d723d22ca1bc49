"""
Weather to power consumption lags (Tetouan)
===========================================

Runs the 5 factor x 3 network TE scan over 1-24 hour lags on the working
week 2017-10-23..27. Pass the UCI CSV as the first argument; without one a
synthetic file with the same layout is generated.
"""

import sys
import tempfile
from datetime import timedelta
from pathlib import Path

from copula_lag.ingest import TETOUAN_SCHEMA, lag_grid_hours, load_csv, pairwise_scan_matrix
from copula_lag.synthetic import write_synthetic_tetouan

if len(sys.argv) > 1:
    path = Path(sys.argv[1])
else:
    path = Path(tempfile.mkdtemp()) / "tetouan_synthetic.csv"
    write_synthetic_tetouan(path)
    print("no CSV given, using synthetic data at", path)

# %% 10-minute samples, five days -> 720 per series
series = load_csv(path, TETOUAN_SCHEMA, ("2017-10-23", "2017-10-27"))
factors = {k: series[k] for k in TETOUAN_SCHEMA.factors}
networks = {k: series[k] for k in TETOUAN_SCHEMA.targets}
print("samples per series:", len(series["temperature"]))

# %% Hourly lags on the raw grid: 6, 12, ..., 144 samples
lags = lag_grid_hours(1, 24, timedelta(minutes=10))
curves = pairwise_scan_matrix(factors, networks, lags)

# %% One row per weather factor, one column per network, like the usual
# factor-by-network grid of TE-vs-lag plots.
print(f"{'':>22} " + " ".join(f"{n:>12}" for n in networks))
for f in factors:
    cells = []
    for n in networks:
        c = curves[(f, n)]
        cells.append(f"{c.identified_lag // 6:>4}h {c.max_te:5.2f}")
    print(f"{f:>22} " + " ".join(f"{c:>12}" for c in cells))

rising = sum(c.values[3] > c.values[0] for c in curves.values())
print(f"TE at 4 h exceeds TE at 1 h in {rising}/15 pairs")
