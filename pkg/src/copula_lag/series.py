"""Uniformly sampled scalar time series."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A scalar series with optional sampling metadata.

    ``sample_interval`` and ``start`` are ``None`` for index-only data such
    as simulator output.
    """

    values: np.ndarray
    name: str = ""
    unit: str = ""
    sample_interval: timedelta | None = None
    start: datetime | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise InvalidInputError(f"series {self.name!r} must be 1-D, got shape {v.shape}")
        bad = np.flatnonzero(~np.isfinite(v))
        if bad.size:
            raise InvalidInputError(
                f"series {self.name!r} has a non-finite value at index {bad[0]}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.values
        return self.values.astype(dtype)

    def __repr__(self):
        return (f"TimeSeries(name={self.name!r}, n={len(self)}, "
                f"interval={self.sample_interval}, start={self.start})")


def as_series_array(x, name: str) -> np.ndarray:
    """Validate a 1-D finite series (array-like or :class:`TimeSeries`)."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 1:
        raise InvalidInputError(f"{name} must be a 1-D series, got shape {a.shape}")
    bad = np.flatnonzero(~np.isfinite(a))
    if bad.size:
        raise InvalidInputError(f"{name} has a non-finite value at index {bad[0]}")
    return a
