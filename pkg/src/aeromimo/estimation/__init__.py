from .pilots import PilotBook, build_pilot_book
from .onesided import eta, eta_tilde, eta_raw, eta_tilde_raw, transform_covariance, as_blocks
from .mmse import (
    EstimationStats,
    link_estimation_stats,
    pilot_observe,
    mmse_estimate,
    estimate_links,
    error_load,
    error_loads,
)

__all__ = [
    "PilotBook",
    "build_pilot_book",
    "eta",
    "eta_tilde",
    "eta_raw",
    "eta_tilde_raw",
    "transform_covariance",
    "as_blocks",
    "EstimationStats",
    "link_estimation_stats",
    "pilot_observe",
    "mmse_estimate",
    "estimate_links",
    "error_load",
    "error_loads",
]
