"""One-shot combining weights at the CPU (exact and trace-lemma variants).

For local detections xhat_l = U_l^H y_l combined as xhat = sum_l omega_l xhat_l,
the MSE-optimal weights are

    omega = (A + Y)^{-1} v,
    [v]_l = x^H Q_l x,  [A]_{lm} = x^H Q_l Q_m x,  [Y]_{ll} = Tr(U_l^H S_l U_l),

with Q_l the local signal-space Gram matrix and S_l = Cerr'_l + sigma2 I. The
minimized MSE is ||x||^2 - v^H (A+Y)^{-1} v. The trace-lemma variant replaces
the quadratic forms by traces (the x-free midpoint towards the asymptotic
weights): v_l = Tr(Q_l), A_lm = Tr(Q_l Q_m), E||x||^2 = N_tot.
"""

from dataclasses import dataclass, field

import numpy as np

from ..linalg import herm

__all__ = ["WeightSystem", "solve_weights", "empirical_weights", "trace_weights", "combine"]


@dataclass
class WeightSystem:
    v: np.ndarray       # (L,)
    A: np.ndarray       # (L, L) Hermitian PSD
    Y: np.ndarray       # (L, L) real nonnegative diagonal
    omega: np.ndarray   # (L,)
    mse: float
    xnorm2: float
    source: str         # "empirical" | "trace" | "asymptotic"
    regularized: bool = False
    diagnostics: dict = field(default_factory=dict)

    def mse_of(self, omega) -> float:
        """MSE of arbitrary weights under this system's quadratic model."""
        omega = np.asarray(omega)
        quad = omega.conj() @ (self.A + self.Y) @ omega
        return float(self.xnorm2 - 2.0 * np.real(self.v.conj() @ omega) + np.real(quad))

    @property
    def imag_residual(self) -> float:
        """Magnitude of the imaginary part of omega (weights are real asymptotically)."""
        return float(np.max(np.abs(np.imag(self.omega))))


def solve_weights(v, A, Y, xnorm2, source) -> WeightSystem:
    L = len(v)
    m = herm(A + Y)
    regularized = False
    try:
        omega = np.linalg.solve(m, v)
        if not np.all(np.isfinite(omega)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        ridge = 1e-12 * np.trace(m).real / L
        omega = np.linalg.solve(m + ridge * np.eye(L), v)
        regularized = True
    mse = float(xnorm2 - np.real(v.conj() @ omega))
    return WeightSystem(v=np.asarray(v, dtype=complex), A=np.asarray(A, dtype=complex),
                        Y=np.asarray(Y, dtype=complex), omega=omega, mse=mse,
                        xnorm2=float(xnorm2), source=source, regularized=regularized)


def empirical_weights(x, q_list, u_list, s_list) -> WeightSystem:
    """Exact per-realization weights; x is the transmitted signal of the block."""
    L = len(q_list)
    qx = [q @ x for q in q_list]
    v = np.array([np.vdot(x, qx[l]) for l in range(L)])
    A = np.empty((L, L), dtype=complex)
    for l in range(L):
        for m in range(L):
            A[l, m] = np.vdot(qx[l], qx[m])
    Y = np.diag([np.trace(u.conj().T @ s @ u).real for u, s in zip(u_list, s_list)]).astype(complex)
    return solve_weights(v, A, Y, float(np.vdot(x, x).real), "empirical")


def trace_weights(q_list, u_list, s_list) -> WeightSystem:
    """x-free weights from the trace lemma (N_tot -> inf limit of the quadratic forms)."""
    L = len(q_list)
    n_tot = q_list[0].shape[0]
    v = np.array([np.trace(q).real for q in q_list], dtype=complex)
    A = np.empty((L, L), dtype=complex)
    for l in range(L):
        for m in range(L):
            A[l, m] = np.trace(q_list[l] @ q_list[m])
    Y = np.diag([np.trace(u.conj().T @ s @ u).real for u, s in zip(u_list, s_list)]).astype(complex)
    return solve_weights(v, A, Y, float(n_tot), "trace")


def combine(xhat_list, omega):
    """CPU-side one-shot combination sum_l omega_l xhat_l."""
    out = np.zeros_like(xhat_list[0], dtype=complex)
    for w, xh in zip(omega, xhat_list):
        out = out + w * xh
    return out
