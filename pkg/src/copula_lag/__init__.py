"""Time-lag identification with copula-entropy based transfer entropy."""

__version__ = "0.1.0"

from .copula import (
    CeEstimate,
    LaggedEmbedding,
    TeEstimate,
    build_lagged_embedding,
    build_self_embedding,
    copula_entropy,
    mutual_information,
    self_transfer_entropy,
    transfer_entropy,
)
from .errors import (
    ConfigurationError,
    CopulaLagError,
    DegenerateSampleError,
    DimensionError,
    InsufficientSampleError,
    InvalidInputError,
)
from .estimators import (
    EstimatorConfig,
    digamma,
    empirical_copula_transform,
    knn_distances,
    knn_entropy,
)
from .lagscan import LagScanConfig, TeCurve, identify_lag, scan_directions, scan_lags, self_scan
from .series import TimeSeries
from .simulators import (
    SimulatorSpec,
    Trajectory,
    simulate,
    simulate_system1,
    simulate_system2,
    simulate_system3,
    simulate_system4,
)
