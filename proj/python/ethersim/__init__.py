"""CSMA/CD collision-domain simulator with R/S Hurst-parameter analysis."""

from ._core import (
    HurstEstimate,
    RSPoint,
    SimResult,
    aggregate,
    gen_fgn,
    gen_white_noise,
    hurst_estimate,
    pox_points,
    rescale,
    rs_statistic,
    run_simulation,
    sample_backoff,
    segment_file,
)

__all__ = [
    "HurstEstimate",
    "RSPoint",
    "SimResult",
    "aggregate",
    "gen_fgn",
    "gen_white_noise",
    "hurst_estimate",
    "pox_points",
    "rescale",
    "rs_statistic",
    "run_simulation",
    "sample_backoff",
    "segment_file",
]

__version__ = "0.1.0"
