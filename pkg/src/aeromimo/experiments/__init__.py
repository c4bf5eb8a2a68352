from .trials import PointSetup, build_point_setup, run_trial, local_detectors, oneshot_tensors
from .csvio import ResultRow, emit_csv, parse_csv, CSV_HEADER
from .sweep import expand_sweep
from .runner import run_point, run_sweep, PointResult

__all__ = [
    "PointSetup",
    "build_point_setup",
    "run_trial",
    "local_detectors",
    "oneshot_tensors",
    "run_point",
    "run_sweep",
    "PointResult",
    "ResultRow",
    "emit_csv",
    "parse_csv",
    "CSV_HEADER",
    "expand_sweep",
]
