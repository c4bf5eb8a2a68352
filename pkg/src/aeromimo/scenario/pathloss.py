"""LoS probability and distance-dependent path loss for air-to-ground links."""

import math

from .environments import Environment, PATHLOSS_RHO_DB, PATHLOSS_EXPONENT

__all__ = ["los_probability", "path_loss", "PathLoss"]


def los_probability(env: Environment, h: float, d_ground: float) -> float:
    """Probability of an LoS connection at UAV height `h` and ground distance
    `d_ground` (both in meters).

    Logistic in the elevation angle: 1 / (1 + a*exp(-b*(theta_deg - a))),
    theta_deg = atan(h / d_ground) in degrees; d_ground = 0 counts as 90 deg.
    """
    if not (math.isfinite(h) and math.isfinite(d_ground)):
        raise ValueError("los_probability: h and d_ground must be finite")
    if h <= 0 or d_ground < 0:
        raise ValueError(f"los_probability: need h > 0 and d_ground >= 0, got h={h}, d_ground={d_ground}")
    theta_deg = 90.0 if d_ground == 0 else math.degrees(math.atan(h / d_ground))
    return 1.0 / (1.0 + env.a * math.exp(-env.b * (theta_deg - env.a)))


class PathLoss:
    """Per-link path loss split (all in dB gain convention, i.e. negative)."""

    __slots__ = ("pl_los_db", "pl_nlos_db", "pl_avg_db")

    def __init__(self, pl_los_db, pl_nlos_db, pl_avg_db):
        self.pl_los_db = pl_los_db
        self.pl_nlos_db = pl_nlos_db
        self.pl_avg_db = pl_avg_db

    @property
    def beta(self) -> float:
        """Averaged channel gain in linear scale."""
        return 10.0 ** (self.pl_avg_db / 10.0)


def path_loss(env: Environment, d_3d: float, p_los: float) -> PathLoss:
    """Mixture path loss at 3-D distance `d_3d` (m) given LoS probability.

    FSPL_dB = rho_dB - 10*alpha*log10(d); the environment's excess loss is
    subtracted from the free-space gain per propagation group, and the LoS and
    NLoS branches are mixed in dB with weight `p_los`.
    """
    if not math.isfinite(d_3d) or d_3d <= 0:
        raise ValueError(f"path_loss: need d_3d > 0, got {d_3d}")
    if not 0.0 <= p_los <= 1.0:
        raise ValueError(f"path_loss: p_los outside [0,1]: {p_los}")
    fspl_db = PATHLOSS_RHO_DB - 10.0 * PATHLOSS_EXPONENT * math.log10(d_3d)
    pl_los_db = fspl_db - env.excess_los_db
    pl_nlos_db = fspl_db - env.excess_nlos_db
    pl_avg_db = p_los * pl_los_db + (1.0 - p_los) * pl_nlos_db
    return PathLoss(pl_los_db, pl_nlos_db, pl_avg_db)
