from .centralized import global_mmse, fc_logdets, se_fully_centralized
from .local import local_mmse, gram_q
from .combining import WeightSystem, empirical_weights, trace_weights, combine, solve_weights
from .spectral import SEReport, OneShotAccumulator, se_from_logdets, oneshot_logdets

__all__ = [
    "global_mmse",
    "fc_logdets",
    "se_fully_centralized",
    "local_mmse",
    "gram_q",
    "WeightSystem",
    "empirical_weights",
    "trace_weights",
    "combine",
    "solve_weights",
    "SEReport",
    "OneShotAccumulator",
    "se_from_logdets",
    "oneshot_logdets",
]
