from .apstats import ApStatistics, ap_statistics_from_setup
from .picard import damped_picard, FixedPointResult
from .signal_gram import SignalGramSolution, solve_signal_gram
from .receive_gram import ReceiveGramSolution, solve_receive_gram
from .derivatives import signal_gram_derivatives, receive_gram_derivatives
from .weights import asymptotic_weight_system, SolverDiagnostics

__all__ = [
    "ApStatistics",
    "ap_statistics_from_setup",
    "damped_picard",
    "FixedPointResult",
    "SignalGramSolution",
    "solve_signal_gram",
    "ReceiveGramSolution",
    "solve_receive_gram",
    "signal_gram_derivatives",
    "receive_gram_derivatives",
    "asymptotic_weight_system",
    "SolverDiagnostics",
]
