"""Copula entropy, mutual information and transfer entropy estimators.

Every estimator ranks its input first (empirical copula), so results are
unchanged by strictly increasing transforms of any variable. Transfer
entropy is assembled from copula entropies of the aligned lagged sample:

    TE = H_c(future, history) + H_c(source, history)
         - H_c(future, history, source) - H_c(history)

which is the conditional mutual information I(future; source | history)
rewritten with MI = -H_c.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSampleError, DimensionError, InsufficientSampleError, InvalidInputError
from .estimators import (
    EstimatorConfig,
    apply_jitter,
    as_sample_matrix,
    empirical_copula_transform,
    knn_entropy_detail,
)
from .series import as_series_array


@dataclass(frozen=True)
class CeEstimate:
    value: float
    sample_size: int
    config: EstimatorConfig
    n_clamped: int = 0


@dataclass(frozen=True)
class TeEstimate:
    """Transfer entropy at one lag.

    ``terms`` holds the copula entropies the value was assembled from,
    keyed ``"future,history"``, ``"source,history"``,
    ``"future,history,source"`` and ``"history"``.
    """

    value: float
    lag: int
    history_order: int
    effective_length: int
    terms: dict = field(default_factory=dict)
    n_clamped: int = 0


@dataclass(frozen=True)
class LaggedEmbedding:
    """Aligned (future, history, source) rows.

    Row ``j`` holds the target value ``lag`` steps after the source sample,
    the conditioning history, and the source sample itself.
    """

    future: np.ndarray
    history: np.ndarray
    source: np.ndarray
    lag: int
    history_offsets: tuple

    @property
    def history_order(self) -> int:
        return self.history.shape[1]

    @property
    def effective_length(self) -> int:
        return self.future.shape[0]

    def as_matrix(self) -> np.ndarray:
        """Columns ordered future, history..., source."""
        return np.column_stack([self.future, self.history, self.source])


def _check_not_constant(x: np.ndarray, labels):
    for j, label in enumerate(labels):
        col = x[:, j]
        if (col == col[0]).all():
            raise DegenerateSampleError(f"{label} is constant over the sample")


def _ce_of_pseudo(u: np.ndarray, cfg: EstimatorConfig) -> tuple[float, int]:
    return knn_entropy_detail(u, cfg)


def copula_entropy(x, cfg: EstimatorConfig | None = None) -> CeEstimate:
    """Copula entropy of a multivariate sample (nats).

    The sample is ranked column-wise into pseudo-observations and their
    differential entropy is estimated with the kNN estimator. The result is
    minus the mutual information among the columns.

    Parameters
    ----------
    x : array_like, shape (T, d)
        Observations in rows; ``d`` must be at least 2.
    cfg : EstimatorConfig, optional
    """
    cfg = cfg or EstimatorConfig()
    a = as_sample_matrix(x)
    if a.shape[1] < 2:
        raise DimensionError(
            f"copula entropy needs at least 2 variables, got {a.shape[1]}")
    if a.shape[0] <= cfg.k:
        raise InsufficientSampleError(
            f"need more than k={cfg.k} observations, got {a.shape[0]}")
    a = apply_jitter(a, cfg)
    _check_not_constant(a, [f"column {j}" for j in range(a.shape[1])])
    value, n_clamped = _ce_of_pseudo(empirical_copula_transform(a), cfg)
    return CeEstimate(value, a.shape[0], cfg, n_clamped)


def mutual_information(x, cfg: EstimatorConfig | None = None) -> float:
    """Mutual information among the columns of `x`, as ``-copula_entropy``."""
    return -copula_entropy(x, cfg).value


def _check_lag(lag, what="lag"):
    if isinstance(lag, bool) or not isinstance(lag, (int, np.integer)) or lag < 1:
        raise InvalidInputError(f"{what} must be a positive integer, got {lag!r}")


def build_lagged_embedding(x, y, lag: int, history_order: int = 1,
                           min_length: int = 1) -> LaggedEmbedding:
    """Align source `x` with the future and past of target `y`.

    For every usable index t: ``future = y[t + lag]``,
    ``history = (y[t], y[t-1], ..., y[t-history_order+1])`` and
    ``source = x[t]``.

    Raises
    ------
    InvalidInputError
        If the series lengths differ.
    InsufficientSampleError
        If fewer than `min_length` aligned rows remain.
    """
    _check_lag(lag)
    _check_lag(history_order, "history_order")
    xs = as_series_array(x, "x")
    ys = as_series_array(y, "y")
    if xs.shape != ys.shape:
        raise InvalidInputError(f"series lengths differ: {xs.shape[0]} vs {ys.shape[0]}")
    n = xs.shape[0]
    n_eff = n - lag - (history_order - 1)
    if n_eff < min_length or n_eff < 1:
        raise InsufficientSampleError(
            f"lag={lag}, history_order={history_order} leaves {max(n_eff, 0)} rows "
            f"from {n} samples")
    t = np.arange(history_order - 1, n - lag)
    history = np.column_stack([ys[t - j] for j in range(history_order)])
    return LaggedEmbedding(ys[t + lag], history, xs[t], lag,
                           tuple(-j for j in range(history_order)))


def self_history_offsets(lag: int, history_order: int = 1) -> tuple:
    """Past offsets used as history when a series is its own source.

    The nearest `history_order` offsets, skipping the source offset `lag`.
    """
    offsets = []
    h = 1
    while len(offsets) < history_order:
        if h != lag:
            offsets.append(h)
        h += 1
    return tuple(offsets)


def build_self_embedding(x, lag: int, history_order: int = 1,
                         min_length: int = 1) -> LaggedEmbedding:
    """Embedding for the influence of a series' own past at distance `lag`.

    ``future = x[t]``, ``source = x[t - lag]`` and the history holds the
    closest past values that are not the source, so at ``lag == 1`` the
    history starts at ``x[t - 2]``.
    """
    _check_lag(lag)
    _check_lag(history_order, "history_order")
    xs = as_series_array(x, "x")
    offsets = self_history_offsets(lag, history_order)
    start = max(lag, max(offsets))
    n = xs.shape[0]
    if n - start < min_length or n - start < 1:
        raise InsufficientSampleError(
            f"lag={lag}, history_order={history_order} leaves {max(n - start, 0)} rows "
            f"from {n} samples")
    t = np.arange(start, n)
    history = np.column_stack([xs[t - h] for h in offsets])
    return LaggedEmbedding(xs[t], history, xs[t - lag], lag,
                           tuple(-h for h in offsets))


def te_from_embedding(emb: LaggedEmbedding, cfg: EstimatorConfig | None = None) -> TeEstimate:
    """Transfer entropy of a prepared embedding (no jitter applied here)."""
    cfg = cfg or EstimatorConfig()
    n = emb.effective_length
    if n <= cfg.k:
        raise InsufficientSampleError(
            f"lag={emb.lag}: {n} aligned rows, need more than k={cfg.k}")
    m = emb.as_matrix()
    p = emb.history_order
    _check_not_constant(m[:, [0, p + 1]], ["target series", "source series"])
    u = empirical_copula_transform(m)
    fut, hist, src = [0], list(range(1, p + 1)), [p + 1]

    h_fc, c1 = _ce_of_pseudo(u[:, fut + hist], cfg)
    h_sc, c2 = _ce_of_pseudo(u[:, hist + src], cfg)
    h_all, c3 = _ce_of_pseudo(u, cfg)
    h_c, c4 = (0.0, 0) if p == 1 else _ce_of_pseudo(u[:, hist], cfg)
    value = h_fc + h_sc - h_all - h_c
    terms = {"future,history": h_fc, "source,history": h_sc,
             "future,history,source": h_all, "history": h_c}
    return TeEstimate(value, emb.lag, p, n, terms, c1 + c2 + c3 + c4)


def _jitter_pair(x, y, cfg):
    if cfg.jitter_scale == 0:
        return x, y
    both = apply_jitter(np.column_stack([x, y]), cfg)
    return both[:, 0], both[:, 1]


def transfer_entropy(x, y, lag: int = 1, history_order: int = 1,
                     cfg: EstimatorConfig | None = None) -> TeEstimate:
    """Transfer entropy from `x` to `y` at `lag` samples, in nats.

    Estimates ``I(y[t+lag]; x[t] | y[t], ..., y[t-history_order+1])`` from
    copula entropies of one shared set of aligned rows. Negative estimates
    are returned as they are.

    Examples
    --------
    >>> rng = np.random.default_rng(0)
    >>> x = rng.normal(size=1000)
    >>> y = np.r_[0.0, x[:-1]] + 0.5 * rng.normal(size=1000)
    >>> transfer_entropy(x, y, lag=1).value > 0.5
    True
    """
    cfg = cfg or EstimatorConfig()
    xs = as_series_array(x, "x")
    ys = as_series_array(y, "y")
    xs, ys = _jitter_pair(xs, ys, cfg)
    emb = build_lagged_embedding(xs, ys, lag, history_order, min_length=cfg.k + 1)
    return te_from_embedding(emb, cfg)


def self_transfer_entropy(x, lag: int, history_order: int = 1,
                          cfg: EstimatorConfig | None = None) -> TeEstimate:
    """Information ``x[t - lag]`` adds about ``x[t]`` beyond its nearer past."""
    cfg = cfg or EstimatorConfig()
    xs = as_series_array(x, "x")
    if cfg.jitter_scale:
        xs = apply_jitter(xs[:, None], cfg)[:, 0]
    emb = build_self_embedding(xs, lag, history_order, min_length=cfg.k + 1)
    return te_from_embedding(emb, cfg)
