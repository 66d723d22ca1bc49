"""Load, window and align CSV time series, with a Tetouan power profile.

The Tetouan profile expects the UCI "Power consumption of Tetouan city"
layout: a ``DateTime`` column at 10-minute resolution, five weather
factors and the consumption of three distribution networks.
"""

from __future__ import annotations

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta

import numpy as np
import pandas as pd

from .copula import transfer_entropy
from .errors import ConfigurationError, CopulaLagError, InvalidInputError, with_context
from .estimators import EstimatorConfig
from .lagscan import TeCurve
from .series import TimeSeries


class MissingColumnError(InvalidInputError):
    def __init__(self, column, available=()):
        self.column = column
        msg = f"missing column {column!r}"
        if available:
            msg += f" (available: {', '.join(map(repr, available))})"
        super().__init__(msg)


class DatetimeParseError(InvalidInputError):
    pass


class SamplingGapError(InvalidInputError):
    pass


class EmptyWindowError(InvalidInputError):
    pass


def normalize_name(name: str) -> str:
    """Trim and collapse whitespace runs; the UCI header has double spaces."""
    return re.sub(r"\s+", " ", str(name).strip())


@dataclass(frozen=True)
class DatasetSchema:
    """Role-to-column mapping.

    ``factors`` and ``targets`` map a short label to a CSV column name.
    """

    datetime_column: str
    factors: dict = field(default_factory=dict)
    targets: dict = field(default_factory=dict)

    @classmethod
    def from_mapping(cls, doc: dict) -> "DatasetSchema":
        def roles(v):
            if isinstance(v, dict):
                return {str(k): str(c) for k, c in v.items()}
            return {str(c): str(c) for c in v}

        try:
            return cls(str(doc["datetime"]), roles(doc.get("factors", {})),
                       roles(doc.get("targets", {})))
        except KeyError as exc:
            raise ConfigurationError(f"schema lacks the {exc.args[0]!r} entry") from None

    @classmethod
    def from_file(cls, path) -> "DatasetSchema":
        """Read a JSON schema: ``{"datetime": ..., "factors": ..., "targets": ...}``."""
        with open(path, encoding="utf-8") as fh:
            return cls.from_mapping(json.load(fh))

    def as_dict(self) -> dict:
        return {"datetime": self.datetime_column, "factors": dict(self.factors),
                "targets": dict(self.targets)}

    @property
    def columns(self) -> dict:
        return {**self.factors, **self.targets}


TETOUAN_SCHEMA = DatasetSchema(
    datetime_column="DateTime",
    factors={
        "temperature": "Temperature",
        "humidity": "Humidity",
        "wind_speed": "Wind Speed",
        "general_diffuse_flows": "general diffuse flows",
        "diffuse_flows": "diffuse flows",
    },
    targets={
        "quads": "Zone 1 Power Consumption",
        "smir": "Zone 2 Power Consumption",
        "boussafou": "Zone 3 Power Consumption",
    },
)

TETOUAN_WINDOW = (date(2017, 10, 23), date(2017, 10, 27))

_UCI_FORMAT = "%m/%d/%Y %H:%M"


def parse_datetimes(raw: pd.Series) -> pd.DatetimeIndex:
    """Parse ``M/D/YYYY H:MM`` (UCI) or ISO-8601 stamps, picked from the data."""
    raw = raw.astype(str).str.strip()
    for fmt in (_UCI_FORMAT, "ISO8601"):
        parsed = pd.to_datetime(raw, format=fmt, errors="coerce")
        if not parsed.isna().any():
            return pd.DatetimeIndex(parsed)
    uci = pd.to_datetime(raw, format=_UCI_FORMAT, errors="coerce")
    iso = pd.to_datetime(raw, format="ISO8601", errors="coerce")
    # report the first row neither format accepts, or the first UCI failure
    both_bad = np.flatnonzero(uci.isna() & iso.isna())
    row = int(both_bad[0]) if both_bad.size else int(np.flatnonzero(uci.isna())[0])
    raise DatetimeParseError(f"unparseable datetime {raw.iloc[row]!r} at data row {row}")


def _as_date(d) -> date:
    if isinstance(d, datetime):
        return d.date()
    if isinstance(d, date):
        return d
    return date.fromisoformat(str(d))


def read_table(path, columns) -> pd.DataFrame:
    """Read `columns` (already normalized names) from a CSV as strings/floats."""
    df = pd.read_csv(path, float_precision="round_trip", skipinitialspace=False)
    df.columns = [normalize_name(c) for c in df.columns]
    for c in columns:
        if normalize_name(c) not in df.columns:
            raise MissingColumnError(c, list(df.columns))
    return df


def load_csv(path, schema: DatasetSchema = TETOUAN_SCHEMA, window=TETOUAN_WINDOW,
             fill: str | None = None, resample_hourly: bool = False) -> dict[str, TimeSeries]:
    """Load schema columns as uniformly sampled series clipped to a day window.

    Parameters
    ----------
    path : path-like
        CSV with a header row.
    schema : DatasetSchema
    window : (start, end)
        Calendar days, both included. Dates or ISO strings.
    fill : {None, "ffill"}
        ``"ffill"`` fills missing timestamps and values from the previous
        sample; by default a gap is an error.
    resample_hourly : bool
        Average each clock hour into one sample.

    Returns
    -------
    dict
        Series keyed by schema label, factors first.
    """
    if fill not in (None, "ffill"):
        raise ConfigurationError(f"unknown fill policy {fill!r}")
    start, end = (_as_date(w) for w in window)
    if end < start:
        raise EmptyWindowError(f"window end {end} precedes start {start}")
    labels = schema.columns
    df = read_table(path, [schema.datetime_column, *labels.values()])
    stamps = parse_datetimes(df[normalize_name(schema.datetime_column)])
    data = {}
    for label, col in labels.items():
        values = pd.to_numeric(df[normalize_name(col)], errors="coerce")
        bad = values.isna() & df[normalize_name(col)].notna()
        if bad.any():
            row = int(np.flatnonzero(bad)[0])
            raise InvalidInputError(
                f"column {col!r} has a non-numeric value at data row {row}")
        data[label] = values.to_numpy(dtype=np.float64)
    frame = pd.DataFrame(data, index=stamps)
    if not frame.index.is_monotonic_increasing or frame.index.has_duplicates:
        raise SamplingGapError("timestamps are not strictly increasing")

    lo = pd.Timestamp(start)
    hi = pd.Timestamp(end) + pd.Timedelta(days=1)
    frame = frame[(frame.index >= lo) & (frame.index < hi)]
    if frame.empty:
        raise EmptyWindowError(f"no rows between {start} and {end}")
    if len(frame) < 2:
        raise SamplingGapError("need at least two rows to infer the sample interval")

    steps = np.diff(frame.index.asi8)
    interval = pd.Timedelta(int(steps.min()), unit="ns")
    if interval <= pd.Timedelta(0):
        raise SamplingGapError("non-positive sample interval")
    if (steps != steps.min()).any() or frame.isna().any().any():
        if fill != "ffill":
            if (steps != steps.min()).any():
                where = frame.index[int(np.flatnonzero(steps != steps.min())[0])]
                raise SamplingGapError(f"sampling gap after {where} (interval {interval})")
            col = frame.columns[frame.isna().any()][0]
            raise SamplingGapError(f"missing value in {col!r}")
        grid = pd.date_range(frame.index[0], frame.index[-1], freq=interval)
        frame = frame.reindex(grid).ffill()
        if frame.isna().any().any():
            raise SamplingGapError("leading missing values cannot be forward-filled")

    if resample_hourly:
        frame = frame.resample("1h").mean()
        interval = pd.Timedelta(hours=1)

    t0 = frame.index[0].to_pydatetime()
    step = interval.to_pytimedelta()
    return {label: TimeSeries(frame[label].to_numpy(), name=label, sample_interval=step,
                              start=t0, meta={"column": labels[label]})
            for label in labels}


def load_series_csv(path, columns=None) -> dict[str, TimeSeries]:
    """Read index-only numeric columns (e.g. a simulated ``index,x,y`` file).

    Floats are parsed with round-trip precision so values written with
    ``repr`` come back bit-identical.
    """
    df = pd.read_csv(path, float_precision="round_trip")
    df.columns = [normalize_name(c) for c in df.columns]
    if columns is None:
        columns = [c for c in df.columns if c != "index"]
    out = {}
    for c in columns:
        key = normalize_name(c)
        if key not in df.columns:
            raise MissingColumnError(c, list(df.columns))
        values = pd.to_numeric(df[key], errors="coerce")
        if values.isna().any():
            row = int(np.flatnonzero(values.isna())[0])
            raise InvalidInputError(f"column {c!r} has a missing or non-numeric value at data row {row}")
        out[c] = TimeSeries(values.to_numpy(dtype=np.float64), name=c)
    return out


def lag_grid_hours(hmin: int, hmax: int, sample_interval) -> list[int]:
    """Lags in samples for every whole hour from `hmin` to `hmax`.

    >>> lag_grid_hours(1, 3, timedelta(minutes=60))
    [1, 2, 3]
    """
    if not isinstance(sample_interval, timedelta):
        sample_interval = pd.Timedelta(sample_interval).to_pytimedelta()
    micro = sample_interval // timedelta(microseconds=1)
    hour = 3600 * 10**6
    if micro <= 0 or hour % micro:
        raise ConfigurationError(f"sample interval {sample_interval} does not divide one hour")
    if not 1 <= hmin <= hmax:
        raise ConfigurationError(f"bad hour range {hmin}..{hmax}")
    per_hour = hour // micro
    return [h * per_hour for h in range(hmin, hmax + 1)]


def pairwise_scan_matrix(factors: dict, targets: dict, lags, cfg: EstimatorConfig | None = None,
                         history_order: int = 1, jobs: int = 1) -> dict[tuple, TeCurve]:
    """TE curve from every factor to every target over the same lag grid.

    Returns
    -------
    dict
        ``{(factor, target): TeCurve}`` in factor-major order.

    Raises
    ------
    CopulaLagError
        From any single estimate, re-raised with ``factor``, ``target`` and
        ``lag`` attached.
    """
    cfg = cfg or EstimatorConfig()
    lags = sorted(set(int(l) for l in lags))
    if not lags:
        raise InvalidInputError("empty lag grid")
    n = {len(s) for s in (*factors.values(), *targets.values())}
    if len(n) > 1:
        raise InvalidInputError(f"series lengths differ: {sorted(n)}")
    intervals = {getattr(s, "sample_interval", None)
                 for s in (*factors.values(), *targets.values())} - {None}
    if len(intervals) > 1:
        raise InvalidInputError("series have different sample intervals")

    tasks = [(f, t, lag) for f in factors for t in targets for lag in lags]

    def one(task):
        f, t, lag = task
        try:
            return transfer_entropy(factors[f], targets[t], lag, history_order, cfg)
        except CopulaLagError as exc:
            raise with_context(exc, f"factor {f!r} -> target {t!r}, lag {lag}",
                               factor=f, target=t, lag=lag) from exc

    if jobs <= 1:
        results = [one(task) for task in tasks]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, tasks))

    out = {}
    per_pair = len(lags)
    for i, f in enumerate(factors):
        for j, t in enumerate(targets):
            k = (i * len(targets) + j) * per_pair
            out[(f, t)] = TeCurve.from_estimates(results[k:k + per_pair])
    return out
