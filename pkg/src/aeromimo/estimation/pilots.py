"""Pilot books: exactly orthogonal pilot matrices and UE-to-pilot assignment.

Pilot matrices are disjoint N-column blocks of the (unnormalized) tau_p-point
DFT matrix, so Phi_k^H Phi_i = tau_p * I_N when UEs k and i share a pilot and
the zero matrix otherwise -- exactly, by column orthogonality. With a reuse
factor theta > 1, UEs are grouped into cosets of size <= theta by random
permutation chunking; every UE in a coset shares one pilot matrix.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError

__all__ = ["PilotBook", "build_pilot_book"]


@dataclass
class PilotBook:
    pilots: list        # distinct (tau_p, N) pilot matrices
    assignment: np.ndarray  # UE k -> pilot index t_k
    cosets: list        # UE k -> sorted tuple of co-pilot UEs (k included)
    tau_p: int

    def pilot_of(self, k: int) -> np.ndarray:
        return self.pilots[self.assignment[k]]

    def coset(self, k: int):
        return self.cosets[k]


def build_pilot_book(tau_p, N, K, pilot_reuse, rng) -> PilotBook:
    if tau_p < N:
        raise ConfigurationError(f"pilot book: tau_p={tau_p} < N={N}, no orthogonal pilot fits")
    capacity = tau_p // N
    needed = math.ceil(K / pilot_reuse)
    if capacity < needed:
        raise ConfigurationError(
            f"pilot book: capacity violated, floor(tau_p/N)={capacity} pilot matrices available "
            f"but ceil(K/pilot_reuse)={needed} required (tau_p={tau_p}, N={N}, K={K}, "
            f"pilot_reuse={pilot_reuse})"
        )

    grid = np.arange(tau_p)
    dft = np.exp(-2j * np.pi * np.outer(grid, grid) / tau_p)
    pilots = [dft[:, t * N:(t + 1) * N].copy() for t in range(capacity)]

    order = np.arange(K) if pilot_reuse == 1 else rng.permutation(K)
    assignment = np.empty(K, dtype=int)
    groups = [order[i:i + pilot_reuse] for i in range(0, K, pilot_reuse)]
    for t, members in enumerate(groups):
        assignment[members] = t
    cosets = [tuple(sorted(int(i) for i in np.flatnonzero(assignment == assignment[k])))
              for k in range(K)]
    return PilotBook(pilots=pilots, assignment=assignment, cosets=cosets, tau_p=tau_p)
