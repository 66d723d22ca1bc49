"""Seeded generators for four stochastic systems with a known time lag.

Systems 1-3 delay an output behind a state (``Y[i+l] = X[i] + noise``);
system 4 delays the state recursion itself
(``X[i] = alpha X[i-1] + beta X[i-l] + noise``).

Noise terms ``N(mu, delta)`` take ``delta`` as a *variance*. Each noise
source draws from its own child of ``numpy.random.SeedSequence(seed)``
(child 0 for the state noise, child 1 for the output noise) through PCG64,
so a spec reproduces the same trajectory on every platform.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .errors import ConfigurationError
from .series import TimeSeries

SYSTEMS = ("gaussian_shift", "sine_shift", "wiener_shift", "delayed_ar")
SYSTEM4_WARMUP = 100


def system_name(system) -> str:
    """Accept ``1..4`` or a system name and return the canonical name."""
    if isinstance(system, str) and system in SYSTEMS:
        return system
    try:
        idx = int(system)
    except (TypeError, ValueError):
        raise ConfigurationError(f"unknown system {system!r}; choose 1-4 or one of {SYSTEMS}")
    if not 1 <= idx <= 4:
        raise ConfigurationError(f"unknown system {system!r}; choose 1-4 or one of {SYSTEMS}")
    return SYSTEMS[idx - 1]


@dataclass(frozen=True)
class SimulatorSpec:
    """Parameters of one simulated trajectory.

    Defaults follow the experiments: zero means, variances 0.001, 500
    samples, alpha 0.2 and beta 0.8. For systems 1-3 the returned series
    have ``length - lag`` samples (see :func:`simulate`).
    """

    system: str = "gaussian_shift"
    lag: int = 1
    mu1: float = 0.0
    mu2: float = 0.0
    delta1: float = 0.001
    delta2: float = 0.001
    alpha: float = 0.2
    beta: float = 0.8
    length: int = 500
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "system", system_name(self.system))
        if isinstance(self.lag, bool) or int(self.lag) != self.lag or self.lag < 1:
            raise ConfigurationError(f"lag must be a positive integer, got {self.lag!r}")
        for name in ("delta1", "delta2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ConfigurationError(f"{name} must be a finite variance >= 0, got {v!r}")
        for name in ("mu1", "mu2", "alpha", "beta"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")
        if self.length <= self.lag + self.warmup:
            raise ConfigurationError(
                f"length={self.length} must exceed lag + warmup = {self.lag + self.warmup}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError(f"seed must fit in 64 bits, got {self.seed!r}")

    @property
    def warmup(self) -> int:
        return SYSTEM4_WARMUP if self.system == "delayed_ar" else 0

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Trajectory:
    """Simulated state ``x`` and, for systems 1-3, output ``y``.

    ``index`` holds the simulation time index of every returned sample.
    """

    x: TimeSeries
    y: TimeSeries | None
    true_lag: int
    index: np.ndarray
    spec: SimulatorSpec
    diagnostics: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.x)


def _streams(seed):
    children = np.random.SeedSequence(int(seed)).spawn(2)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def _noise(rng, mu, delta, n):
    return rng.normal(mu, math.sqrt(delta), n)


def _output_delay(spec: SimulatorSpec, state: np.ndarray, out_rng) -> Trajectory:
    # state holds X[1..m]; Y[i+l] = X[i] + xi2[i] is defined on l+1..m+l.
    # Both are cropped to the common range l+1..m.
    m, l = spec.length, spec.lag
    xi2 = _noise(out_rng, spec.mu2, spec.delta2, m)
    y_full = state + xi2
    x = state[l:]
    y = y_full[: m - l]
    index = np.arange(l + 1, m + 1)
    return Trajectory(TimeSeries(x, name="x"), TimeSeries(y, name="y"), l, index, spec)


def simulate_system1(spec: SimulatorSpec) -> Trajectory:
    """Gaussian state, output shifted by the lag: ``X = xi1, Y[i+l] = X[i] + xi2``."""
    spec = replace(spec, system="gaussian_shift")
    s_rng, o_rng = _streams(spec.seed)
    state = _noise(s_rng, spec.mu1, spec.delta1, spec.length)
    return _output_delay(spec, state, o_rng)


def simulate_system2(spec: SimulatorSpec) -> Trajectory:
    """Like system 1 with a one-period sine added to the state.

    ``X[i] = sin(2 pi i / m) + xi1`` for ``i = 1..m``, ``m = spec.length``.
    """
    spec = replace(spec, system="sine_shift")
    s_rng, o_rng = _streams(spec.seed)
    i = np.arange(1, spec.length + 1)
    state = np.sin(2 * np.pi * i / spec.length) + _noise(s_rng, spec.mu1, spec.delta1, spec.length)
    return _output_delay(spec, state, o_rng)


def simulate_system3(spec: SimulatorSpec) -> Trajectory:
    """Random-walk state started at ``X[0] = 0`` with a delayed noisy output."""
    spec = replace(spec, system="wiener_shift")
    s_rng, o_rng = _streams(spec.seed)
    state = np.cumsum(_noise(s_rng, spec.mu1, spec.delta1, spec.length))
    return _output_delay(spec, state, o_rng)


def simulate_system4(spec: SimulatorSpec) -> Trajectory:
    """State with its own delayed feedback; returns ``x`` only.

    The first ``max(1, lag)`` values are plain noise draws, then
    ``X[i] = alpha X[i-1] + beta X[i-lag] + xi1[i]``. The first 100 samples
    are discarded as warmup.
    """
    spec = replace(spec, system="delayed_ar")
    s_rng, _ = _streams(spec.seed)
    l, a, b = spec.lag, spec.alpha, spec.beta
    n = spec.warmup + spec.length
    xi = _noise(s_rng, spec.mu1, spec.delta1, n)
    x = np.empty(n)
    p = max(1, l)
    x[:p] = xi[:p]
    for i in range(p, n):
        x[i] = a * x[i - 1] + b * x[i - l] + xi[i]
    diagnostics = ()
    if abs(a) + abs(b) >= 1:
        diagnostics = (f"stationarity: |alpha| + |beta| = {abs(a) + abs(b):g} >= 1; "
                       "the recursion may not be stationary",)
    index = np.arange(spec.warmup + 1, n + 1)
    return Trajectory(TimeSeries(x[spec.warmup:], name="x"), None, l, index, spec, diagnostics)


_SIMULATORS = {
    "gaussian_shift": simulate_system1,
    "sine_shift": simulate_system2,
    "wiener_shift": simulate_system3,
    "delayed_ar": simulate_system4,
}


def simulate(spec: SimulatorSpec) -> Trajectory:
    """Dispatch on ``spec.system``."""
    return _SIMULATORS[spec.system](spec)


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Write ``index,x,y`` (or ``index,x`` for system 4) with round-trip floats."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if traj.y is None:
            w.writerow(["index", "x"])
            for i, xv in zip(traj.index, traj.x.values):
                w.writerow([int(i), repr(float(xv))])
        else:
            w.writerow(["index", "x", "y"])
            for i, xv, yv in zip(traj.index, traj.x.values, traj.y.values):
                w.writerow([int(i), repr(float(xv)), repr(float(yv))])
