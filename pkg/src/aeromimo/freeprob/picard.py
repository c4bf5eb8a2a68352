"""Damped Picard iteration for matrix-valued fixed points.

The state is a flat list of complex matrices; `step` maps state -> state. The
convergence measure is the sup-norm of the undamped update distance. Updates
are relaxed as x <- (1-lam) x + lam F(x); lam starts at 1 and halves whenever
the residual increases (floor 1/64), which keeps the residual trace
essentially monotone once damping engages.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import SolverError

__all__ = ["FixedPointResult", "damped_picard"]

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 2000
DAMPING_FLOOR = 1.0 / 64.0


@dataclass
class FixedPointResult:
    state: list
    iterations: int
    residual: float
    residual_history: list


def _distance(a, b):
    return max(float(np.max(np.abs(x - y))) if x.size else 0.0 for x, y in zip(a, b))


def damped_picard(step, state0, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                  label="fixed point") -> FixedPointResult:
    state = [np.array(s, dtype=complex) for s in state0]
    lam = 1.0
    prev_res = np.inf
    history = []
    for it in range(1, max_iter + 1):
        raw = step(state)
        res = _distance(raw, state)
        history.append(res)
        if res < tol:
            return FixedPointResult(state=raw, iterations=it, residual=res,
                                    residual_history=history)
        if res > prev_res and lam > DAMPING_FLOOR:
            lam = max(lam / 2.0, DAMPING_FLOOR)
        prev_res = res
        state = [(1.0 - lam) * s + lam * r for s, r in zip(state, raw)]
    raise SolverError(
        f"{label}: no convergence after {max_iter} iterations "
        f"(last residual {history[-1]:.3e}, damping {lam:.4f})",
        residual_history=history,
    )
