"""Uplink simulator for aerial cell-free massive MIMO with UAV-mounted APs.

Subpackages
-----------
scenario    geometry, path loss, spatial correlation, Rician channel synthesis
estimation  pilot books, pilot-phase MMSE estimation, one-sided correlation operators
detection   centralized / distributed MMSE receivers, combining weights, SE evaluation
freeprob    matrix-valued Cauchy-transform fixed points and asymptotic weights
experiments Monte-Carlo sweep engine with deterministic seeding and CSV emission
"""

__version__ = "0.1.0"
