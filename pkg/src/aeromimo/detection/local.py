"""Per-AP local MMSE detection for the two-layer distributed scheme."""

import numpy as np

from ..linalg import herm, solve_hermitian

__all__ = ["local_mmse", "gram_q"]


def local_mmse(hhat_l, P, cprime_l, sigma2):
    """Local detector U_l = (Hhat_l P P^H Hhat_l^H + Cerr'_l + sigma2 I)^{-1} Hhat_l P."""
    hp = hhat_l @ P
    gram = herm(hp @ hp.conj().T) + cprime_l + sigma2 * np.eye(hhat_l.shape[0])
    return solve_hermitian(gram, hp, warn_label="local MMSE gram")


def gram_q(hhat_l, P, cprime_l, sigma2, cross_check=False, check_tol=1e-10):
    """Signal-space Gram matrix Q_l = P^H Hhat_l^H (gram)^{-1} Hhat_l P.

    With `cross_check`, also evaluates the resolvent form
    Q = I - (B + I)^{-1}, B = P^H Hhat^H (Cerr' + sigma2 I)^{-1} Hhat P,
    and asserts the two agree to `check_tol` relative (they are equal by the
    matrix inversion lemma).
    """
    m = hhat_l.shape[0]
    n_tot = P.shape[1]
    hp = hhat_l @ P
    gram = herm(hp @ hp.conj().T) + cprime_l + sigma2 * np.eye(m)
    q = herm(hp.conj().T @ solve_hermitian(gram, hp, warn_label="local Q"))
    if cross_check:
        s = cprime_l + sigma2 * np.eye(m)
        b = herm(hp.conj().T @ solve_hermitian(s, hp, warn_label="local B"))
        q_alt = np.eye(n_tot) - np.linalg.inv(b + np.eye(n_tot))
        rel = np.linalg.norm(q - q_alt) / max(np.linalg.norm(q), 1e-300)
        if rel > check_tol:
            raise AssertionError(f"Q dual-formula mismatch: rel {rel:.3e} > {check_tol:.0e}")
    return q
