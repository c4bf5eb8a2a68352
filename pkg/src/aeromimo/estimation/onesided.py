"""Parameterized one-sided correlation operators of the equivalent channel.

For a zero-mean random M x N channel Ht with vec-covariance C (MN x MN,
column-stacking), and the transformed channel L @ Ht @ R:

    eta(L, D, R)        = E[(L Ht R) D (L Ht R)^H]        (M x M), D is N x N,
    eta_tilde(L, Dt, R) = E[(L Ht R)^H Dt (L Ht R)]       (N x N), Dt is M x M.

Both reduce to contractions over the M x M sub-blocks C^{ji} = E[col_j col_i^H]
of C: with A = R D R^H and B = L^H Dt L,

    eta       = L [ sum_{j,i} A_{ji} C^{ji} ] L^H,
    eta_tilde = R^H [ T(B) ] R,   T(B)_{mn} = sum_{j,i} B_{ji} [C^{nm}]_{ij}.

Both are linear in D (resp. Dt) and Hermitian whenever D (resp. Dt) is.
The raw contractions operate on the covariance reshaped to (N, M, N, M).
"""

import numpy as np

__all__ = ["as_blocks", "transform_covariance", "eta_raw", "eta_tilde_raw", "eta", "eta_tilde"]


def as_blocks(cov, M, N):
    """Reshape an MN x MN vec-covariance so that [j, :, i, :] is C^{ji}."""
    return np.ascontiguousarray(cov.reshape(N, M, N, M))


def transform_covariance(c4, L):
    """Covariance blocks of L @ Ht given those of Ht: C^{ji} -> L C^{ji} L^H."""
    return np.einsum("mp,jpiq,nq->jmin", L, c4, L.conj(), optimize=True)


def eta_raw(c4, A):
    """sum_{j,i} A_{ji} C^{ji} for an (N, M, N, M) block tensor."""
    return np.einsum("ji,jmin->mn", A, c4, optimize=True)


def eta_tilde_raw(c4, B):
    """T(B) with T[m, n] = sum_{j,i} B_{ji} [C^{nm}]_{ij}."""
    return np.einsum("ji,nimj->mn", B, c4, optimize=True)


def eta(cov, M, N, L_mat, D, R_mat):
    """E[(L Ht R) D (L Ht R)^H] for vec(Ht) ~ CN(0, cov)."""
    c4 = cov.reshape(N, M, N, M)
    A = R_mat @ D @ R_mat.conj().T
    return L_mat @ eta_raw(c4, A) @ L_mat.conj().T


def eta_tilde(cov, M, N, L_mat, Dt, R_mat):
    """E[(L Ht R)^H Dt (L Ht R)] for vec(Ht) ~ CN(0, cov)."""
    c4 = cov.reshape(N, M, N, M)
    B = L_mat.conj().T @ Dt @ L_mat
    return R_mat.conj().T @ eta_tilde_raw(c4, B) @ R_mat
