"""Matrix-valued fixed point for the per-AP received-signal Gram matrix.

For Bt = Hhat_l P P^H Hhat_l^H + Cerr'_l, the weighted resolvent trace
g_{Bt,Xi}(z) = E Tr((zI - Bt)^{-1} Xi) / M equals Tr(G_Dt(z) Xi) / M with

    G_Dt = (Phi - Cerr' - Hbar P Phit^{-1} P^H Hbar^H)^{-1},
    G_D  = (Phit - P^H Hbar^H Phi^{-1} Hbar P - Ups)^{-1},
    Phi  = z I_M - sum_k eta_k(I, G_Dk, P_k),
    Phit = I_Ntot - blkdiag_k( eta_tilde_k(I, G_Dt, P_k) ),
    Ups  = P^H Hbar^H Phi^{-1} W (I - W Phi^{-1} W)^{-1} W Phi^{-1} Hbar P,

with W = (Cerr')^{1/2}. The solve is performed in units normalized by
s = |z| (channel covariances and Cerr' divided by s, evaluation point -1),
where the sup-norm tolerance is meaningful; results are unscaled on exit.
For real z < 0, G_Dt stays negative definite and G_D positive definite.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import SolverError
from ..estimation.onesided import as_blocks, eta_raw, eta_tilde_raw
from ..linalg import herm, psd_sqrt
from .apstats import ApStatistics
from .picard import DEFAULT_MAX_ITER, DEFAULT_TOL, damped_picard

__all__ = ["ReceiveGramSolution", "solve_receive_gram", "ReceiveGramProblem"]

_SIGN_TOL = 1e-8


@dataclass
class ReceiveGramSolution:
    g_dt: np.ndarray            # (M, M), unscaled G_Dt(z)
    g_d_blocks: np.ndarray      # (K, N, N), G_D(z) diagonal blocks (scale-free)
    g_d_full: np.ndarray        # (N_tot, N_tot)
    phi: np.ndarray             # (M, M) Phi(z) in scaled units
    phi_t: np.ndarray           # (N_tot, N_tot) Phit(z) in scaled units
    upsilon: np.ndarray         # (N_tot, N_tot) Ups(z) in scaled units
    z: float
    scale: float                # normalization s = |z|
    iterations: int
    residual: float

    def g_bt(self, xi) -> float:
        """Tr(G_Dt(z) Xi) / M."""
        return float(np.trace(self.g_dt @ xi).real) / self.g_dt.shape[0]


class ReceiveGramProblem:
    """Scaled operators: covariances / s, Hbar / sqrt(s), Cerr' / s."""

    def __init__(self, ap: ApStatistics, scale: float):
        self.ap = ap
        self.scale = scale
        M, N, K = ap.M, ap.N, ap.K
        self.M, self.N, self.K = M, N, K
        self.n_tot = ap.n_tot
        self.c4 = [as_blocks(ap.chat[k] / scale, M, N) for k in range(K)]
        self.P = ap.P
        self.cprime = ap.cprime / scale
        self.w_half = psd_sqrt(self.cprime)
        self.hbar_p = (ap.hbar / np.sqrt(scale)) @ ap.p_blk()

    def zeta(self, d_blocks):
        acc = np.zeros((self.M, self.M), dtype=complex)
        for k in range(self.K):
            a = self.P[k] @ d_blocks[k] @ self.P[k].conj().T
            acc += eta_raw(self.c4[k], a)
        return acc

    def zeta_tilde_blocks(self, dt):
        out = np.empty((self.K, self.N, self.N), dtype=complex)
        for k in range(self.K):
            out[k] = self.P[k].conj().T @ eta_tilde_raw(self.c4[k], dt) @ self.P[k]
        return out

    def blkdiag(self, blocks):
        out = np.zeros((self.n_tot, self.n_tot), dtype=complex)
        for k in range(self.K):
            out[k * self.N:(k + 1) * self.N, k * self.N:(k + 1) * self.N] = blocks[k]
        return out

    def diag_blocks(self, full):
        out = np.empty((self.K, self.N, self.N), dtype=complex)
        for k in range(self.K):
            out[k] = full[k * self.N:(k + 1) * self.N, k * self.N:(k + 1) * self.N]
        return out

    def upsilon(self, phi_inv):
        """Ups from Phi^{-1}; raises when the inner pencil is singular."""
        w = self.w_half
        inner = np.eye(self.M) - w @ phi_inv @ w
        try:
            k_in = np.linalg.inv(inner)
        except np.linalg.LinAlgError as exc:
            raise SolverError("receive-gram solve: singular (I - W Phi^{-1} W) inside Upsilon") from exc
        jw = phi_inv @ w
        return self.hbar_p.conj().T @ jw @ k_in @ jw.conj().T @ self.hbar_p

    def phi(self, w_eval, d_blocks):
        return w_eval * np.eye(self.M) - self.zeta(d_blocks)

    def phi_tilde(self, dt):
        return np.eye(self.n_tot) - self.blkdiag(self.zeta_tilde_blocks(dt))


def _assert_signs(dt, d_blocks, it):
    wmax = float(np.max(np.linalg.eigvalsh(herm(dt))))
    if wmax > _SIGN_TOL * max(1.0, float(np.max(np.abs(dt)))):
        raise SolverError(f"receive-gram iterate {it}: G_Dt lost negative definiteness "
                          f"(max eig {wmax:.3e})")
    for k, blk in enumerate(d_blocks):
        wmin = float(np.min(np.linalg.eigvalsh(herm(blk))))
        if wmin < -_SIGN_TOL * max(1.0, float(np.max(np.abs(blk)))):
            raise SolverError(f"receive-gram iterate {it}: G_D block {k} lost positive "
                              f"definiteness (min eig {wmin:.3e})")


def solve_receive_gram(ap: ApStatistics, z: float, tol=DEFAULT_TOL,
                max_iter=DEFAULT_MAX_ITER, init_state=None) -> ReceiveGramSolution:
    if not (np.isreal(z) and z < 0):
        raise ValueError(f"solve_receive_gram: z must be real negative, got {z}")
    scale = abs(z)
    w_eval = z / scale  # always -1
    prob = ReceiveGramProblem(ap, scale)
    K, N, M = prob.K, prob.N, prob.M
    it_count = [0]

    def step(state):
        it_count[0] += 1
        dt = herm(state[0])
        d_blocks = [herm(b) for b in state[1:]]
        phi = prob.phi(w_eval, d_blocks)
        phit = prob.phi_tilde(dt)
        phi_inv = np.linalg.inv(phi)
        phit_inv = np.linalg.inv(phit)
        ups = prob.upsilon(phi_inv)
        dt_new = herm(np.linalg.inv(
            phi - prob.cprime - prob.hbar_p @ phit_inv @ prob.hbar_p.conj().T))
        d_full = np.linalg.inv(
            phit - prob.hbar_p.conj().T @ phi_inv @ prob.hbar_p - ups)
        d_new = [herm(b) for b in prob.diag_blocks(d_full)]
        _assert_signs(dt_new, d_new, it_count[0])
        return [dt_new] + d_new

    if init_state is None:
        init_state = ([np.eye(M, dtype=complex) * w_eval]
                      + [np.eye(N, dtype=complex) for _ in range(K)])
    res = damped_picard(step, init_state, tol=tol, max_iter=max_iter, label="receive-gram fixed point")

    dt = herm(res.state[0])
    d_blocks = np.stack([herm(b) for b in res.state[1:]])
    phi = prob.phi(w_eval, list(d_blocks))
    phit = prob.phi_tilde(dt)
    phi_inv = np.linalg.inv(phi)
    ups = prob.upsilon(phi_inv)
    d_full = herm(np.linalg.inv(
        phit - prob.hbar_p.conj().T @ phi_inv @ prob.hbar_p - ups))
    return ReceiveGramSolution(
        g_dt=dt / scale, g_d_blocks=d_blocks, g_d_full=d_full,
        phi=phi, phi_t=phit, upsilon=ups,
        z=float(z), scale=scale, iterations=res.iterations, residual=res.residual)
