"""Fully-centralized MMSE reception (benchmark scheme).

The CPU sees the stacked estimates Hhat (M_tot x N_tot) and applies the global
MMSE detector

    U = (Hhat P P^H Hhat^H + Cerr' + sigma2 I)^{-1} Hhat P,

with Cerr' = blkdiag of the per-AP aggregated error loads. The per-UE SE uses
the MMSE-SIC log-det bound, with the SINR resolved as the Hermitian-similar
form X_k^H W_k^{-1} X_k, X_k = U_k^H Hhat_k P_k and W_k = U_k^H Sigma_k U_k,
where Sigma_k removes UE k's own estimated-signal term from the Gram matrix.
"""

import numpy as np

from ..errors import NumericsError
from ..linalg import herm, solve_hermitian

__all__ = ["global_mmse", "fc_logdets", "se_fully_centralized"]


def global_mmse(hhat_tot, P, cprime, sigma2):
    """Global detector U (M_tot x N_tot); columns of UE k are U[:, k*N:(k+1)*N]."""
    hp = hhat_tot @ P
    gram = herm(hp @ hp.conj().T) + cprime + sigma2 * np.eye(hhat_tot.shape[0])
    return solve_hermitian(gram, hp, warn_label="global MMSE gram")


def fc_logdets(hhat_tot, P, cprime, sigma2, K, N):
    """Per-UE log2 det(I + SINR_k) for one realization of the estimates."""
    m_tot = hhat_tot.shape[0]
    hp = hhat_tot @ P
    gram = herm(hp @ hp.conj().T) + cprime + sigma2 * np.eye(m_tot)
    U = solve_hermitian(gram, hp, warn_label="global MMSE gram")
    out = np.empty(K)
    for k in range(K):
        cols = slice(k * N, (k + 1) * N)
        hpk = hp[:, cols]
        Uk = U[:, cols]
        if not np.any(hpk):
            out[k] = 0.0
            continue
        sigma_k = gram - hpk @ hpk.conj().T
        X = Uk.conj().T @ hpk
        W = herm(Uk.conj().T @ sigma_k @ Uk)
        wmin = float(np.min(np.linalg.eigvalsh(W)))
        if wmin < -1e-10 * np.linalg.norm(W, 2):
            raise NumericsError(f"FC interference matrix not PSD for UE {k}: min eig {wmin:.3e}")
        inner = herm(X.conj().T @ solve_hermitian(W, X, warn_label="FC SINR"))
        sign, logabs = np.linalg.slogdet(np.eye(N) + inner)
        out[k] = logabs / np.log(2.0)
    return out


def se_fully_centralized(logdet_samples, prelog):
    """Average per-trial log-dets into the FC spectral efficiency.

    `logdet_samples` has shape (trials, K); returns (per-UE SE, per-trial sums).
    """
    per_ue = prelog * np.mean(logdet_samples, axis=0)
    per_trial_sum = prelog * np.sum(logdet_samples, axis=1)
    return per_ue, per_trial_sum
