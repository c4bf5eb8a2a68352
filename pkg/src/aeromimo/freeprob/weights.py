"""Asymptotic one-shot combining weights from statistical CSI only.

Entries of the weight system, all at the resolvent evaluation points z = -1
(signal space) and z = -sigma2 (receive space):

    v_l     = N_tot + N_tot g_{B_l}(-1)
    A_ll    = N_tot + 2 N_tot g_{B_l}(-1) + N_tot g'_{B_l}(-1)
    A_lm    = N_tot + N_tot g_{B_l}(-1) + N_tot g_{B_m}(-1)
              + Tr(G_D1_l(-1) G_D1_m(-1)),    l != m
    Y_ll    = -M g_{Bt_l, S_l}(-sigma2) - M g'_{Bt_l, S_l S_l^H}(-sigma2)

with S_l = Cerr'_l + sigma2 I. The cross term uses the entrywise resolvent
approximation with the full deterministic-equivalent matrices; APs have
independent estimates, so the cross expectation factorizes.
"""

from dataclasses import dataclass

import numpy as np

from ..detection.combining import WeightSystem, solve_weights
from .derivatives import signal_gram_derivatives, receive_gram_derivatives
from .signal_gram import solve_signal_gram
from .receive_gram import solve_receive_gram

__all__ = ["SolverDiagnostics", "asymptotic_weight_system"]


@dataclass
class SolverDiagnostics:
    iterations: int         # total fixed-point iterations across APs and solves
    max_residual: float
    per_ap: list


def asymptotic_weight_system(ap_stats: list, sigma2: float, tol=1e-10) -> WeightSystem:
    """Statistical-CSI weights for L APs; attaches SolverDiagnostics."""
    L = len(ap_stats)
    n_tot = ap_stats[0].n_tot
    M = ap_stats[0].M

    g_b = np.empty(L)
    g_b_prime = np.empty(L)
    g_d1_full = []
    y_diag = np.empty(L)
    per_ap = []
    total_iters = 0
    max_res = 0.0
    for l, ap in enumerate(ap_stats):
        sol3 = solve_signal_gram(ap, z=-1.0, tol=tol)
        der3 = signal_gram_derivatives(ap, sol3, tol=tol)
        sol5 = solve_receive_gram(ap, z=-sigma2, tol=tol)
        der5 = receive_gram_derivatives(ap, sol5, tol=tol)
        s_l = ap.s_mat()
        g_b[l] = sol3.g_b
        g_b_prime[l] = der3.g_b_prime
        g_d1_full.append(sol3.g_d1_full)
        y_diag[l] = -M * sol5.g_bt(s_l) - M * der5.g_bt_prime(s_l @ s_l.conj().T)
        iters = sol3.iterations + der3.iterations + sol5.iterations + der5.iterations
        res = max(sol3.residual, der3.residual, sol5.residual, der5.residual)
        total_iters += iters
        max_res = max(max_res, res)
        per_ap.append({"ap": l, "iterations": iters, "residual": res})

    v = n_tot + n_tot * g_b
    A = np.empty((L, L), dtype=complex)
    for l in range(L):
        for m in range(L):
            if l == m:
                A[l, l] = n_tot + 2 * n_tot * g_b[l] + n_tot * g_b_prime[l]
            else:
                A[l, m] = (n_tot + n_tot * g_b[l] + n_tot * g_b[m]
                           + np.trace(g_d1_full[l] @ g_d1_full[m]))
    Y = np.diag(y_diag).astype(complex)
    ws = solve_weights(v.astype(complex), A, Y, float(n_tot), "asymptotic")
    ws.diagnostics["solver"] = SolverDiagnostics(
        iterations=total_iters, max_residual=max_res, per_ap=per_ap)
    return ws
