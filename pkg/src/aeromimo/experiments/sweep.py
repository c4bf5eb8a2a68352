"""Sweep-axis expansion: substitute each point into the base scenario.

Axes
----
antennas_fixed_ratio  points are N values; M = antenna_ratio * N (fixed L, K)
ratio_lm              fixed M_tot = L*M; points are L values (divisors of
                      M_tot); empty points enumerate all divisor pairs;
                      recorded axis value is the ratio L/M
num_uavs              same constraint, axis value is L itself
height                points are UAV heights (m)
num_ues               points are K values
pilot_reuse           points are N values at the base pilot-reuse factor
                      (tau_p re-derives as N*ceil(K/reuse) per point)
"""

from ..config import SweepSpec, SystemConfig
from ..errors import ConfigurationError

__all__ = ["expand_sweep", "divisor_pairs"]


def divisor_pairs(m_tot):
    """All (L, M) with L*M = m_tot, ascending in L."""
    out = []
    for L in range(1, m_tot + 1):
        if m_tot % L == 0:
            out.append((L, m_tot // L))
    return out


def expand_sweep(base: SystemConfig, spec: SweepSpec, environment: str):
    """Yield (axis_value, config) per feasible point and a list of skipped
    (axis_value, reason) pairs."""
    points, skipped = [], []
    base = base.with_updates(environment=environment, env=None)

    if spec.axis in ("ratio_lm", "num_uavs"):
        if not spec.m_tot:
            raise ConfigurationError(f"sweep axis {spec.axis!r} requires m_tot")
        ls = [lm[0] for lm in divisor_pairs(spec.m_tot)] if not spec.points else [int(p) for p in spec.points]
        for L in ls:
            if spec.m_tot % L != 0:
                skipped.append((float(L), f"L={L} does not divide m_tot={spec.m_tot}"))
                continue
            M = spec.m_tot // L
            cfg = base.with_updates(L=L, M=M)
            value = L / M if spec.axis == "ratio_lm" else float(L)
            points.append((value, cfg))
    elif spec.axis == "antennas_fixed_ratio":
        for n in spec.points:
            cfg = base.with_updates(N=int(n), M=int(spec.antenna_ratio * int(n)))
            points.append((float(n), cfg))
    elif spec.axis == "height":
        for h in spec.points:
            cfg = base.with_updates(uav_height=float(h))
            points.append((float(h), cfg))
    elif spec.axis == "num_ues":
        for k in spec.points:
            cfg = base.with_updates(K=int(k))
            points.append((float(k), cfg))
    elif spec.axis == "pilot_reuse":
        for n in spec.points:
            cfg = base.with_updates(N=int(n))
            points.append((float(n), cfg))
    else:
        raise ConfigurationError(f"unknown sweep axis {spec.axis!r}")

    feasible = []
    for value, cfg in points:
        bad = cfg.violations()
        if bad:
            skipped.append((value, "; ".join(bad)))
        else:
            feasible.append((value, cfg))
    return feasible, skipped
