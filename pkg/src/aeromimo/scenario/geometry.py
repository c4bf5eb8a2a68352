"""Deployment geometry: AP lattice, random UE drops, distances and ULA angles."""

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Deployment", "make_deployment", "fold_to_broadside"]


@dataclass
class Deployment:
    """AP and UE positions, 3-D, meters. Shapes (L, 3) and (K, 3)."""

    ap_positions: np.ndarray
    ue_positions: np.ndarray

    @property
    def num_aps(self) -> int:
        return self.ap_positions.shape[0]

    @property
    def num_ues(self) -> int:
        return self.ue_positions.shape[0]

    def ground_distance(self, k: int, l: int) -> float:
        d = self.ue_positions[k, :2] - self.ap_positions[l, :2]
        return float(np.hypot(d[0], d[1]))

    def distance_3d(self, k: int, l: int) -> float:
        d = self.ue_positions[k] - self.ap_positions[l]
        return float(np.linalg.norm(d))

    def azimuth_deg(self, k: int, l: int):
        """Azimuth of the UE->AP line seen from each end, in degrees.

        Returns (at_ap, at_ue): direction towards the UE as seen from the AP,
        and towards the AP as seen from the UE.
        """
        d = self.ue_positions[k] - self.ap_positions[l]
        at_ap = math.degrees(math.atan2(d[1], d[0]))
        at_ue = math.degrees(math.atan2(-d[1], -d[0]))
        return at_ap, at_ue

    def nearest_ap(self, k: int) -> int:
        """Index of the AP closest (3-D) to UE k; ties break to the lowest index."""
        d = np.linalg.norm(self.ap_positions - self.ue_positions[k], axis=1)
        return int(np.argmin(d))


def fold_to_broadside(angle_deg: float) -> float:
    """Fold an azimuth into [-90, 90] preserving sin (ULA front-back symmetry)."""
    a = (angle_deg + 180.0) % 360.0 - 180.0
    if a > 90.0:
        return 180.0 - a
    if a < -90.0:
        return -180.0 - a
    return a


def squarest_factors(L: int):
    """The factor pair (rows, cols) of L with the smallest aspect ratio."""
    rows = 1
    for a in range(1, math.isqrt(L) + 1):
        if L % a == 0:
            rows = a
    return rows, L // rows


def make_deployment(L, K, area_side, uav_height, ue_height, rng) -> Deployment:
    """Regular AP lattice plus uniformly random UE drops in a square area.

    APs sit on the rows x cols rectangular lattice of the squarest
    factorization of L, centered in the area, so every L covers the whole
    square without dead corners.
    """
    rows, cols = squarest_factors(L)
    ap = []
    for r in range(rows):
        for c in range(cols):
            ap.append(((c + 0.5) * area_side / cols,
                       (r + 0.5) * area_side / rows,
                       uav_height))
    ap_positions = np.array(ap, dtype=float)
    xy = rng.uniform(0.0, area_side, size=(K, 2))
    ue_positions = np.column_stack([xy, np.full(K, float(ue_height))])
    return Deployment(ap_positions=ap_positions, ue_positions=ue_positions)
