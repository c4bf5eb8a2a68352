"""Spectral-efficiency evaluation for the distributed schemes.

The statistical-CSI MMSE-SIC bound for UE k under combining weights omega is

    SE_k = prelog * log2 det(I_N + S_k^H Gamma_k^{-1} S_k),
    S_k     = E[ sum_l omega_l U_kl^H H_kl P_k ],
    Gamma_k = E[ sum_i W_ki W_ki^H ] - S_k S_k^H
              + sigma2 E[ sum_l |omega_l|^2 U_kl^H U_kl ],
    W_ki    = sum_l omega_l U_kl^H H_il P_i.

Expectations are sample averages over the trial set (common random numbers
across schemes). Weights may differ per UE (small-cell: the nearest-AP
indicator) and per trial (empirical weights go inside the averages; for fixed
omega the expressions reduce exactly to the statistical bound).
"""

from dataclasses import dataclass

import numpy as np

from ..errors import NumericsError
from ..linalg import herm, solve_hermitian

__all__ = ["SEReport", "OneShotAccumulator", "se_from_logdets"]


@dataclass
class SEReport:
    scheme: str
    per_ue_se: np.ndarray   # (K,) bits/s/Hz
    prelog: float

    @property
    def sum_se(self) -> float:
        return float(np.sum(self.per_ue_se))


class OneShotAccumulator:
    """Order-independent Monte Carlo sums for the statistical-CSI SE bound.

    Per trial, feed the effective-channel tensor V[k, i, l] = U_kl^H H_il P_i
    (K, K, L, N, N), the detector Gram UU[k, l] = U_kl^H U_kl (K, L, N, N) and
    the per-UE weight matrix Omega (K, L). Accumulators merge by addition, so
    chunked parallel execution reproduces serial results bit-for-bit.
    """

    def __init__(self, K, N, L):
        self.K, self.N, self.L = K, N, L
        self.sig = np.zeros((K, N, N), dtype=complex)
        self.mid = np.zeros((K, N, N), dtype=complex)
        self.noise = np.zeros((K, N, N), dtype=complex)
        self.count = 0

    def add_trial(self, V, UU, omega_kl):
        self.sig += np.einsum("kl,kklab->kab", omega_kl, V, optimize=True)
        W = np.einsum("kl,kilab->kiab", omega_kl, V, optimize=True)
        self.mid += np.einsum("kiab,kicb->kac", W, W.conj(), optimize=True)
        self.noise += np.einsum("kl,klab->kab", np.abs(omega_kl) ** 2, UU, optimize=True)
        self.count += 1

    def merge(self, other: "OneShotAccumulator"):
        self.sig += other.sig
        self.mid += other.mid
        self.noise += other.noise
        self.count += other.count
        return self

    def finalize(self, prelog, sigma2, scheme) -> SEReport:
        if self.count == 0:
            raise NumericsError("one-shot SE: no trials accumulated")
        T = self.count
        per_ue = np.empty(self.K)
        eye = np.eye(self.N)
        for k in range(self.K):
            S = self.sig[k] / T
            gamma = herm(self.mid[k] / T - S @ S.conj().T + sigma2 * self.noise[k] / T)
            if not np.any(S):
                per_ue[k] = 0.0
                continue
            scale = max(np.linalg.norm(gamma, 2), 1e-300)
            if float(np.min(np.linalg.eigvalsh(gamma))) <= -1e-10 * scale:
                raise NumericsError(
                    f"one-shot SE: interference covariance of UE {k} not PSD after "
                    f"symmetrization; increase the trial count"
                )
            inner = herm(S.conj().T @ solve_hermitian(gamma, S, warn_label="one-shot SINR"))
            sign, logabs = np.linalg.slogdet(eye + inner)
            per_ue[k] = prelog * logabs / np.log(2.0)
        return SEReport(scheme=scheme, per_ue_se=per_ue, prelog=prelog)


def se_from_logdets(logdet_samples, prelog, scheme) -> SEReport:
    """SEReport for schemes that average per-trial log-dets (fully centralized)."""
    per_ue = prelog * np.mean(np.asarray(logdet_samples), axis=0)
    return SEReport(scheme=scheme, per_ue_se=per_ue, prelog=prelog)


def oneshot_logdets(V, UU, omega_kl, sigma2):
    """Per-realization log2 det(I + SINR_k) of the combined receiver.

    Conditional on the block's channels, UE k's combined estimate has signal
    matrix D_kk = sum_l omega_kl V[k,k,l], interference D_ki from other UEs
    and noise covariance sigma2 sum_l |omega_kl|^2 UU[k,l] (AP noises are
    independent). This is the genie per-block counterpart of the statistical
    bound: with hardening the two coincide.
    """
    K, _, L, N, _ = V.shape
    D = np.einsum("kl,kilab->kiab", omega_kl, V, optimize=True)
    noise = np.einsum("kl,klab->kab", np.abs(omega_kl) ** 2, UU, optimize=True)
    out = np.empty(K)
    eye = np.eye(N)
    for k in range(K):
        sig = D[k, k]
        if not np.any(sig):
            out[k] = 0.0
            continue
        interf = sigma2 * noise[k]
        for i in range(K):
            if i != k:
                interf = interf + D[k, i] @ D[k, i].conj().T
        inner = herm(sig.conj().T @ solve_hermitian(herm(interf), sig,
                                                    warn_label="one-shot per-trial SINR"))
        out[k] = np.linalg.slogdet(eye + inner)[1] / np.log(2.0)
    return out
