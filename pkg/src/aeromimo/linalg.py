"""Small complex-Hermitian linear algebra helpers used across the package.

All Hermitian solves go through factorizations; explicit inverses appear only
in tests. Matrix square roots clip negative eigenvalues at zero so that tiny
quadrature / roundoff violations of PSD-ness cannot leak NaNs.
"""

import warnings

import numpy as np
import scipy.linalg as sla

__all__ = [
    "herm",
    "psd_sqrt",
    "psd_inv_sqrt",
    "solve_hermitian",
    "min_eig",
    "vec",
    "unvec",
    "blkdiag",
]

COND_WARN = 1e12


def herm(a: np.ndarray) -> np.ndarray:
    """Hermitian part (A + A^H)/2."""
    return 0.5 * (a + a.conj().T)


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    """Hermitian square root of a PSD matrix, negative eigenvalues clipped at 0."""
    w, v = np.linalg.eigh(herm(a))
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def psd_inv_sqrt(a: np.ndarray, rcond: float = 1e-14) -> np.ndarray:
    """Hermitian inverse square root; eigenvalues below rcond*max are pseudo-inverted."""
    w, v = np.linalg.eigh(herm(a))
    cutoff = rcond * max(float(w[-1]), 0.0)
    inv = np.where(w > cutoff, 1.0 / np.sqrt(np.clip(w, cutoff, None)), 0.0)
    return (v * inv) @ v.conj().T


def solve_hermitian(a: np.ndarray, b: np.ndarray, warn_label: str = "") -> np.ndarray:
    """Solve A x = b for Hermitian A via factorization, warning when A is
    ill-conditioned (condition number above 1e12)."""
    a = herm(a)
    w = np.linalg.eigvalsh(a)
    wmax = float(np.max(np.abs(w)))
    wmin = float(np.min(np.abs(w)))
    if wmin == 0.0 or wmax / wmin > COND_WARN:
        warnings.warn(
            f"ill-conditioned Hermitian solve{' in ' + warn_label if warn_label else ''}: "
            f"cond ~ {np.inf if wmin == 0.0 else wmax / wmin:.2e}",
            RuntimeWarning,
            stacklevel=2,
        )
    if np.min(w) > 0.0:
        return sla.solve(a, b, assume_a="pos")
    return sla.solve(a, b, assume_a="her")


def min_eig(a: np.ndarray) -> float:
    return float(np.min(np.linalg.eigvalsh(herm(a))))


def vec(h: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization, the convention matching T^T (x) R."""
    return h.reshape(-1, order="F")


def unvec(v: np.ndarray, m: int, n: int) -> np.ndarray:
    return v.reshape((m, n), order="F")


def blkdiag(blocks) -> np.ndarray:
    return sla.block_diag(*blocks)
