"""
Recovering time lags in four simulated systems
==============================================

Simulates each system for true lags 1-4, scans TE over lags 1-8 and
reports where the curve peaks. Pass ``--plot out.png`` to draw the curves
(needs matplotlib).
"""

import argparse

import numpy as np

from copula_lag import LagScanConfig, SimulatorSpec, scan_lags, self_scan, simulate

parser = argparse.ArgumentParser()
parser.add_argument("--plot", help="write a 4x1 figure of TE curves to this path")
parser.add_argument("--seed", type=int, default=1)
args = parser.parse_args()

cfg = LagScanConfig(lag_min=1, lag_max=8)
names = {1: "Gaussian shift", 2: "sine + shift", 3: "random walk + shift", 4: "delayed AR (self)"}
curves = {}

# %% Systems 1-3 delay an output behind the state, so TE runs from x to y.
# System 4 delays the state itself, so we scan x against its own past.
for system in (1, 2, 3, 4):
    for lag in (1, 2, 3, 4):
        tr = simulate(SimulatorSpec(system=system, lag=lag, seed=args.seed))
        curve = self_scan(tr.x, cfg) if tr.y is None else scan_lags(tr.x, tr.y, cfg)
        curves[(system, lag)] = curve
        row = " ".join(f"{v:+.3f}" for v in curve.values)
        mark = "ok" if curve.identified_lag == lag else "MISSED"
        print(f"system {system} ({names[system]:<20}) l={lag}: peak at {curve.identified_lag} "
              f"{mark:<6} [{row}]")

# %% The sine system keeps a floor of shared information at every lag and the
# random walk rises to the true lag then decays; both still peak correctly.

if args.plot:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(4, 1, figsize=(6, 10), sharex=True)
    for system, ax in zip((1, 2, 3, 4), axes):
        for lag in (1, 2, 3, 4):
            c = curves[(system, lag)]
            ax.plot(c.lags, c.values, marker="o", label=f"l={lag}")
        ax.set_title(f"System {system}: {names[system]}")
        ax.set_ylabel("TE (nats)")
    axes[0].legend(ncol=4)
    axes[-1].set_xlabel("lag")
    fig.tight_layout()
    fig.savefig(args.plot, dpi=120)
    print("wrote", args.plot)
