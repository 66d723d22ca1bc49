"""Synthetic stand-in for the Tetouan power CSV.

Same header, datetime format and 10-minute cadence as the UCI file, so the
ingest and analysis pipeline can run without the real download. Power
responds to temperature and irradiance with a delay of a few hours.
"""

from __future__ import annotations

import csv
from datetime import datetime, timedelta

import numpy as np

HEADER = ["DateTime", "Temperature", "Humidity", "Wind Speed", "general diffuse flows",
          "diffuse flows", "Zone 1 Power Consumption", "Zone 2  Power Consumption",
          "Zone 3  Power Consumption"]


def write_synthetic_tetouan(path, start=datetime(2017, 10, 16), days: int = 21,
                            response_hours: float = 4.0, seed: int = 0) -> None:
    """Write a Tetouan-shaped CSV covering `days` days from `start`."""
    rng = np.random.default_rng(seed)
    n = days * 144
    hours = np.arange(n) / 6.0
    day_phase = 2 * np.pi * (hours - 9.0) / 24.0

    temp = 20 + 5 * np.sin(day_phase) + np.cumsum(rng.normal(0, 0.05, n))
    hum = 70 - 15 * np.sin(day_phase) + rng.normal(0, 2, n)
    wind = np.abs(1.5 + 0.8 * np.sin(day_phase + 1.0) + rng.normal(0, 0.4, n))
    sun = np.clip(np.sin(2 * np.pi * (hours - 6.0) / 24.0), 0, None)
    gdf = 400 * sun + np.abs(rng.normal(0, 15, n)) + 0.05
    df = 120 * sun + np.abs(rng.normal(0, 8, n)) + 0.05

    shift = int(round(response_hours * 6))
    drive = np.r_[np.full(shift, temp[0]), temp[:-shift]] if shift else temp
    sun_d = np.r_[np.zeros(shift), sun[:-shift]] if shift else sun
    zones = [base + 900 * drive + scale * sun_d + rng.normal(0, 400, n)
             for base, scale in ((14000, 6000), (9000, 4000), (7000, 5000))]

    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for i in range(n):
            t = start + timedelta(minutes=10 * i)
            stamp = f"{t.month}/{t.day}/{t.year} {t.hour}:{t.minute:02d}"
            row = [temp[i], hum[i], wind[i], gdf[i], df[i], *(z[i] for z in zones)]
            w.writerow([stamp, *(f"{v:.6g}" for v in row)])
