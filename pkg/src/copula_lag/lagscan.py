"""Transfer entropy as a function of lag, and the lag where it peaks."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .copula import self_history_offsets, self_transfer_entropy, transfer_entropy
from .errors import ConfigurationError, CopulaLagError, InvalidInputError, with_context
from .estimators import EstimatorConfig
from .series import as_series_array

Direction = Literal["x_to_y", "y_to_x", "both"]


@dataclass(frozen=True)
class LagScanConfig:
    lag_min: int = 1
    lag_max: int = 8
    history_order: int = 1
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    direction: Direction = "x_to_y"

    def __post_init__(self):
        for name in ("lag_min", "lag_max", "history_order"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise ConfigurationError(f"{name} must be a positive integer, got {v!r}")
        if self.lag_min > self.lag_max:
            raise ConfigurationError(f"lag_min={self.lag_min} exceeds lag_max={self.lag_max}")
        if self.direction not in ("x_to_y", "y_to_x", "both"):
            raise ConfigurationError(f"unknown direction {self.direction!r}")

    @property
    def lags(self) -> list[int]:
        return list(range(self.lag_min, self.lag_max + 1))

    def as_dict(self) -> dict:
        return {"lag_min": self.lag_min, "lag_max": self.lag_max,
                "history_order": self.history_order, "direction": self.direction,
                "estimator": self.estimator.as_dict()}


@dataclass(frozen=True)
class TeCurve:
    """TE value (nats) at every scanned lag, ascending, plus its argmax."""

    lags: tuple
    values: tuple
    identified_lag: int
    max_te: float
    direction: str = "x_to_y"
    estimates: tuple = field(default=(), repr=False, compare=False)

    @property
    def entries(self) -> list[tuple[int, float]]:
        return list(zip(self.lags, self.values))

    def __len__(self):
        return len(self.lags)

    @classmethod
    def from_estimates(cls, estimates, direction="x_to_y") -> "TeCurve":
        estimates = sorted(estimates, key=lambda e: e.lag)
        entries = [(e.lag, e.value) for e in estimates]
        lag, best = identify_lag(entries)
        return cls(tuple(l for l, _ in entries), tuple(v for _, v in entries),
                   lag, best, direction, tuple(estimates))


def identify_lag(entries) -> tuple[int, float]:
    """Smallest lag attaining the largest TE value.

    Parameters
    ----------
    entries : iterable of (lag, te_value)

    Returns
    -------
    (lag, max_te)
    """
    entries = sorted((int(l), float(v)) for l, v in entries)
    if not entries:
        raise InvalidInputError("cannot identify a lag from an empty curve")
    best = max(v for _, v in entries)
    for lag, v in entries:
        if v == best:
            return lag, best
    raise InvalidInputError("curve contains NaN values")


def _run(fn, lags, jobs: int):
    """Evaluate `fn` per lag, tagging failures with the lag."""
    def one(lag):
        try:
            return fn(lag)
        except CopulaLagError as exc:
            raise with_context(exc, f"lag {lag}", lag=lag) from exc

    if jobs <= 1 or len(lags) == 1:
        return [one(lag) for lag in lags]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, lags))


def _check_span(n: int, cfg: LagScanConfig, self_mode: bool):
    if self_mode:
        worst = max(max(lag, max(self_history_offsets(lag, cfg.history_order))) for lag in cfg.lags)
    else:
        worst = cfg.lag_max + cfg.history_order - 1
    if n - worst <= cfg.estimator.k:
        raise ConfigurationError(
            f"lag_max={cfg.lag_max} leaves {n - worst} aligned rows from {n} samples; "
            f"need more than k={cfg.estimator.k}")


def scan_lags(x, y, cfg: LagScanConfig | None = None, jobs: int = 1) -> TeCurve:
    """TE from `x` to `y` (or reverse, per ``cfg.direction``) at every lag.

    Each lag is estimated independently, so ``jobs > 1`` gives the same
    curve as a sequential run. An estimation failure is re-raised with the
    offending lag in its message and as ``exc.lag``.
    """
    cfg = cfg or LagScanConfig()
    if cfg.direction == "both":
        raise ConfigurationError("direction='both' yields two curves; use scan_directions")
    xs = as_series_array(x, "x")
    ys = as_series_array(y, "y")
    if xs.shape != ys.shape:
        raise InvalidInputError(f"series lengths differ: {xs.shape[0]} vs {ys.shape[0]}")
    if cfg.direction == "y_to_x":
        xs, ys = ys, xs
    _check_span(xs.shape[0], cfg, self_mode=False)
    return scan_lag_grid(xs, ys, cfg.lags, cfg.history_order, cfg.estimator, jobs,
                         direction=cfg.direction)


def scan_lag_grid(x, y, lags, history_order: int = 1, estimator: EstimatorConfig | None = None,
                  jobs: int = 1, direction: str = "x_to_y") -> TeCurve:
    """TE from `x` to `y` on an arbitrary set of lags (e.g. every 6th sample)."""
    estimator = estimator or EstimatorConfig()
    lags = sorted(set(int(l) for l in lags))
    if not lags:
        raise InvalidInputError("empty lag grid")
    est = _run(lambda lag: transfer_entropy(x, y, lag, history_order, estimator), lags, jobs)
    return TeCurve.from_estimates(est, direction)


def scan_directions(x, y, cfg: LagScanConfig | None = None, jobs: int = 1) -> dict[str, TeCurve]:
    """Curves keyed by direction; both directions when ``cfg.direction == 'both'``."""
    cfg = cfg or LagScanConfig()
    dirs = ("x_to_y", "y_to_x") if cfg.direction == "both" else (cfg.direction,)
    out = {}
    for d in dirs:
        sub = LagScanConfig(cfg.lag_min, cfg.lag_max, cfg.history_order, cfg.estimator, d)
        out[d] = scan_lags(x, y, sub, jobs)
    return out


def self_scan(x, cfg: LagScanConfig | None = None, jobs: int = 1) -> TeCurve:
    """Scan the influence of a series' own past on its present.

    At lag L the estimate is ``I(x[t]; x[t-L] | x[t-1])``; at ``L == 1``
    the history moves back to ``x[t-2]`` so it never duplicates the source.
    """
    cfg = cfg or LagScanConfig()
    xs = as_series_array(x, "x")
    _check_span(xs.shape[0], cfg, self_mode=True)
    est = _run(lambda lag: self_transfer_entropy(xs, lag, cfg.history_order, cfg.estimator),
               cfg.lags, jobs)
    return TeCurve.from_estimates(est, "self")
