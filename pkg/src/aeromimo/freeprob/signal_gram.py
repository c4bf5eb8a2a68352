"""Matrix-valued fixed point for the whitened signal-space Gram matrix.

For B = P^H Hhat_l^H (Cerr'_l + sigma2 I)^{-1} Hhat_l P with Hhat_l = Hbar_l
+ Ht_l (Ht zero-mean with per-UE vec-covariances chat), the normalized
expected resolvent trace g_B(z) = E Tr(zI - B)^{-1} / N_tot is, in the large
dimension limit, Tr(G_D1(z)) / N_tot where (G_D1, G_D2) solve

    G_D1 = (Psi - Gbar^H Psit^{-1} Gbar)^{-1},
    G_D2 = (Psit - Gbar Psi^{-1} Gbar^H)^{-1},
    Psi  = z I - blkdiag_k( eta_tilde_k(S^{-1/2}, G_D2, P_k) ),
    Psit = I - sum_k eta_k(S^{-1/2}, G_D1k, P_k),

with S = Cerr' + sigma2 I, Gbar = S^{-1/2} Hbar P and G_D1k the k-th N x N
diagonal block. For real z < 0 all iterates keep G_D1 negative definite and
G_D2 positive definite; both are Hermitian and are re-symmetrized each sweep.
The full matrix (Psi - Gbar^H Psit^{-1} Gbar)^{-1} approximates the resolvent
entrywise and is kept alongside the block-diagonal projection.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import SolverError
from ..estimation.onesided import as_blocks, eta_raw, eta_tilde_raw, transform_covariance
from ..linalg import herm, psd_inv_sqrt
from .apstats import ApStatistics
from .picard import DEFAULT_MAX_ITER, DEFAULT_TOL, damped_picard

__all__ = ["SignalGramSolution", "solve_signal_gram", "SignalGramProblem"]

_SIGN_TOL = 1e-8


@dataclass
class SignalGramSolution:
    g_d1_blocks: np.ndarray     # (K, N, N) block-diagonal projection of G_D1
    g_d1_full: np.ndarray       # (N_tot, N_tot) entrywise resolvent equivalent
    g_d2: np.ndarray            # (M, M)
    g_b: float                  # Tr(G_D1)/N_tot
    z: float
    iterations: int
    residual: float

    @property
    def g_d1(self) -> np.ndarray:
        """Block-diagonal G_D1 as a full matrix."""
        K, N, _ = self.g_d1_blocks.shape
        out = np.zeros((K * N, K * N), dtype=complex)
        for k in range(K):
            out[k * N:(k + 1) * N, k * N:(k + 1) * N] = self.g_d1_blocks[k]
        return out


class SignalGramProblem:
    """Precomputed operators for one AP: whitened covariances and Gbar."""

    def __init__(self, ap: ApStatistics):
        self.ap = ap
        M, N, K = ap.M, ap.N, ap.K
        self.M, self.N, self.K = M, N, K
        self.n_tot = ap.n_tot
        l_half = psd_inv_sqrt(ap.s_mat())
        self.gbar = l_half @ ap.hbar @ ap.p_blk()
        self.c4 = [transform_covariance(as_blocks(ap.chat[k], M, N), l_half)
                   for k in range(K)]
        self.P = ap.P

    def delta(self, d1_blocks):
        """sum_k eta_k(., D_1k, P_k): (M, M)."""
        acc = np.zeros((self.M, self.M), dtype=complex)
        for k in range(self.K):
            a = self.P[k] @ d1_blocks[k] @ self.P[k].conj().T
            acc += eta_raw(self.c4[k], a)
        return acc

    def delta_tilde_blocks(self, d2):
        """eta_tilde_k(., D_2, P_k) per UE: (K, N, N)."""
        out = np.empty((self.K, self.N, self.N), dtype=complex)
        for k in range(self.K):
            out[k] = self.P[k].conj().T @ eta_tilde_raw(self.c4[k], d2) @ self.P[k]
        return out

    def psi(self, z, d2):
        """Block-diagonal Psi(z) as (K, N, N) blocks."""
        eye = np.eye(self.N)
        return z * eye[None, :, :] - self.delta_tilde_blocks(d2)

    def psi_tilde(self, d1_blocks):
        return np.eye(self.M) - self.delta(d1_blocks)

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


def _assert_signs(d1_blocks, d2, z, it):
    if z >= 0:
        return
    for k, blk in enumerate(d1_blocks):
        wmax = float(np.max(np.linalg.eigvalsh(herm(blk))))
        if wmax > _SIGN_TOL * max(1.0, float(np.max(np.abs(blk)))):
            raise SolverError(
                f"signal-gram iterate {it}: G_D1 block {k} lost negative definiteness "
                f"(max eig {wmax:.3e})")
    wmin = float(np.min(np.linalg.eigvalsh(herm(d2))))
    if wmin < -_SIGN_TOL * max(1.0, float(np.max(np.abs(d2)))):
        raise SolverError(
            f"signal-gram iterate {it}: G_D2 lost positive definiteness (min eig {wmin:.3e})")


def solve_signal_gram(ap: ApStatistics, z: float, tol=DEFAULT_TOL,
                max_iter=DEFAULT_MAX_ITER, init_state=None) -> SignalGramSolution:
    if not (np.isreal(z) and z < 0):
        raise ValueError(f"solve_signal_gram: z must be real negative, got {z}")
    prob = SignalGramProblem(ap)
    K, N, M = prob.K, prob.N, prob.M
    it_count = [0]

    def step(state):
        it_count[0] += 1
        d1 = [herm(b) for b in np.asarray(state[:K])]
        d2 = herm(state[K])
        psi_blocks = prob.psi(z, d2)
        psit = prob.psi_tilde(d1)
        psi_inv = np.stack([np.linalg.inv(psi_blocks[k]) for k in range(K)])
        psit_inv = np.linalg.inv(psit)
        full = np.linalg.inv(prob.blkdiag(psi_blocks)
                             - prob.gbar.conj().T @ psit_inv @ prob.gbar)
        d1_new = prob.diag_blocks(full)
        d2_new = np.linalg.inv(psit - prob.gbar @ prob.blkdiag(psi_inv) @ prob.gbar.conj().T)
        d1_new = [herm(b) for b in d1_new]
        d2_new = herm(d2_new)
        _assert_signs(d1_new, d2_new, z, it_count[0])
        return list(d1_new) + [d2_new]

    if init_state is None:
        init_state = [np.eye(N, dtype=complex) / z for _ in range(K)] + [np.eye(M, dtype=complex)]
    res = damped_picard(step, init_state, tol=tol, max_iter=max_iter, label="signal-gram fixed point")

    d1_blocks = np.stack([herm(b) for b in res.state[:K]])
    d2 = herm(res.state[K])
    psi_blocks = prob.psi(z, d2)
    psit = prob.psi_tilde(list(d1_blocks))
    full = np.linalg.inv(prob.blkdiag(psi_blocks)
                         - prob.gbar.conj().T @ np.linalg.inv(psit) @ prob.gbar)
    full = herm(full)
    g_b = float(np.trace(full).real) / prob.n_tot
    if g_b >= 0:
        raise SolverError(f"signal-gram solve: g_B(z) = {g_b:.3e} must be negative for z < 0")
    return SignalGramSolution(g_d1_blocks=d1_blocks, g_d1_full=full, g_d2=d2, g_b=g_b,
                           z=float(z), iterations=res.iterations, residual=res.residual)
