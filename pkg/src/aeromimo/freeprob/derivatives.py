"""Derivative recursions for the Cauchy-transform fixed points.

Primes follow the resolvent-squared convention used by the weight formulas:
G'(z) corresponds to E Tr (zI - X)^{-2} = -d/dz of the base transform (a
positive quantity on the negative real axis), so

    G'_D1 = G_D1 [ I + dlt~(G'_D2) + Gbar^H Psit^{-1} dlt(G'_D1) Psit^{-1} Gbar ] G_D1,
    G'_D2 = G_D2 [ dlt(G'_D1) + Gbar Psi^{-1} (I + dlt~(G'_D2)) Psi^{-1} Gbar^H ] G_D2,

with dlt / dlt~ the one-sided correlation sums of the base problem (their
derivative action is by linearity), and analogously for the second fixed
point, where Upsilon differentiates through Phi^{-1} and the inner pencil
(I - W Phi^{-1} W)^{-1}. The recursions are linear in the primed unknowns and
are solved by the same damped Picard driver, seeded from the squared base
solution with all base quantities frozen.
"""

from dataclasses import dataclass

import numpy as np

from ..linalg import herm
from .apstats import ApStatistics
from .picard import DEFAULT_MAX_ITER, DEFAULT_TOL, damped_picard
from .signal_gram import SignalGramSolution, SignalGramProblem
from .receive_gram import ReceiveGramSolution, ReceiveGramProblem

__all__ = ["SignalGramDerivatives", "ReceiveGramDerivatives", "signal_gram_derivatives", "receive_gram_derivatives"]


@dataclass
class SignalGramDerivatives:
    g_d1_prime: np.ndarray      # (N_tot, N_tot)
    g_d2_prime: np.ndarray      # (M, M)
    g_b_prime: float            # Tr(G'_D1)/N_tot
    iterations: int
    residual: float


@dataclass
class ReceiveGramDerivatives:
    g_dt_prime: np.ndarray      # (M, M), unscaled
    g_d_prime: np.ndarray       # (N_tot, N_tot), unscaled
    iterations: int
    residual: float

    def g_bt_prime(self, xi) -> float:
        return float(np.trace(self.g_dt_prime @ xi).real) / self.g_dt_prime.shape[0]


def signal_gram_derivatives(ap: ApStatistics, sol: SignalGramSolution, tol=DEFAULT_TOL,
                      max_iter=DEFAULT_MAX_ITER) -> SignalGramDerivatives:
    prob = SignalGramProblem(ap)
    z = sol.z
    d1_blocks = list(sol.g_d1_blocks)
    psi_blocks = prob.psi(z, sol.g_d2)
    psit = prob.psi_tilde(d1_blocks)
    psi_inv = prob.blkdiag([np.linalg.inv(b) for b in psi_blocks])
    psit_inv = np.linalg.inv(psit)
    f = sol.g_d1_full
    g2 = sol.g_d2
    gbar = prob.gbar
    eye_n = np.eye(prob.n_tot)

    def step(state):
        gp1, gp2 = state
        gp1_blocks = prob.diag_blocks(gp1)
        dlt = prob.delta(list(gp1_blocks))
        dlt_t = prob.blkdiag(prob.delta_tilde_blocks(gp2))
        new1 = f @ (eye_n + dlt_t + gbar.conj().T @ psit_inv @ dlt @ psit_inv @ gbar) @ f
        new2 = g2 @ (dlt + gbar @ psi_inv @ (eye_n + dlt_t) @ psi_inv @ gbar.conj().T) @ g2
        return [herm(new1), herm(new2)]

    state0 = [f @ f, np.zeros_like(g2)]
    res = damped_picard(step, state0, tol=tol, max_iter=max_iter,
                        label="signal-gram derivative recursion")
    gp1, gp2 = res.state
    return SignalGramDerivatives(
        g_d1_prime=gp1, g_d2_prime=gp2,
        g_b_prime=float(np.trace(gp1).real) / prob.n_tot,
        iterations=res.iterations, residual=res.residual)


def receive_gram_derivatives(ap: ApStatistics, sol: ReceiveGramSolution, tol=DEFAULT_TOL,
                      max_iter=DEFAULT_MAX_ITER) -> ReceiveGramDerivatives:
    scale = sol.scale
    prob = ReceiveGramProblem(ap, scale)
    gdt_s = sol.g_dt * scale
    gd = sol.g_d_full
    phi_inv = np.linalg.inv(sol.phi)
    phit_inv = np.linalg.inv(sol.phi_t)
    w = prob.w_half
    hp = prob.hbar_p
    eye_m = np.eye(prob.M)
    k_in = np.linalg.inv(eye_m - w @ phi_inv @ w)

    def step(state):
        gpt, gpd = state
        gpd_blocks = prob.diag_blocks(gpd)
        zet = prob.zeta(list(gpd_blocks))                     # dlt(G'_D)
        zet_t = prob.blkdiag(prob.zeta_tilde_blocks(gpt))     # dlt~(G'_Dt)
        new_t = gdt_s @ (eye_m + zet
                         + hp @ phit_inv @ zet_t @ phit_inv @ hp.conj().T) @ gdt_s
        j_prime = -phi_inv @ (eye_m + zet) @ phi_inv          # d Phi^{-1} / dw
        k_prime = k_in @ (w @ j_prime @ w) @ k_in
        jw = phi_inv @ w
        ups_prime = hp.conj().T @ (
            j_prime @ w @ k_in @ jw.conj().T
            + jw @ k_prime @ jw.conj().T
            + jw @ k_in @ w @ j_prime
        ) @ hp
        new_d = gd @ (zet_t - hp.conj().T @ j_prime @ hp - ups_prime) @ gd
        return [herm(new_t), herm(new_d)]

    state0 = [gdt_s @ gdt_s, np.zeros_like(gd)]
    res = damped_picard(step, state0, tol=tol, max_iter=max_iter,
                        label="receive-gram derivative recursion")
    gpt, gpd = res.state
    return ReceiveGramDerivatives(
        g_dt_prime=gpt / scale**2, g_d_prime=gpd / scale,
        iterations=res.iterations, residual=res.residual)
