"""Pilot-phase synthesis and MMSE channel estimation under pilot contamination.

Per coherence block, AP l receives Y_l = sum_i H_il F_i Phi_i^T + N_l and
de-spreads with the pilot of UE k: Y_kl = Y_l Phi_k^*, which keeps only the
co-pilot coset U_k. In vectorized form

    y_kl = tau_p sum_{i in U_k} Ft_i h_il + vec(N_l Phi_k^*),   Ft_i = F_i^T (x) I_M,

and the MMSE estimate and its second-order statistics are

    hhat_kl = hbar_kl + C_kl Ft_k^H Pi_kl^{-1} (y_kl - ybar_kl),
    Pi_kl   = tau_p sum_{i in U_k} Ft_i C_il Ft_i^H + sigma2 I,
    Chat_kl = tau_p C_kl Ft_k^H Pi_kl^{-1} Ft_k C_kl,   Cerr_kl = C_kl - Chat_kl.

All statistics are computed once per scenario point; per-trial work is the
de-spreading plus one gain-matrix product per link.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError
from ..linalg import herm, solve_hermitian, vec, unvec
from .onesided import eta_raw
from .pilots import PilotBook

__all__ = [
    "EstimationStats",
    "link_estimation_stats",
    "pilot_observe",
    "mmse_estimate",
    "estimate_links",
    "error_load",
    "error_loads",
]


def _check_precoder_power(F, p_max, label):
    for k, Fk in F.items():
        power = float(np.trace(Fk @ Fk.conj().T).real)
        if power > p_max[k] * (1.0 + 1e-12):
            raise ConfigurationError(
                f"{label} precoder of UE {k} violates its power constraint: "
                f"Tr(F F^H) = {power:.6g} > p_{k} = {p_max[k]:.6g}"
            )


@dataclass
class EstimationStats:
    """Statistical CSI of the estimator for every link of one scenario point."""

    book: PilotBook
    F: dict             # UE k -> (N, N) pilot precoder
    pi: dict            # (k, l) -> (MN, MN) normalized observation covariance
    gain: dict          # (k, l) -> (MN, MN) MMSE gain C Ft^H Pi^{-1}
    chat: dict          # (k, l) -> (MN, MN) estimate covariance
    cerr: dict          # (k, l) -> (MN, MN) error covariance
    ybar: dict          # (k, l) -> (MN,) mean de-spread observation
    M: int
    N: int


def link_estimation_stats(stats, book: PilotBook, F: dict, sigma2: float,
                          p_max: dict = None) -> EstimationStats:
    """Precompute Pi, the MMSE gain, and the estimate/error covariances."""
    if p_max is not None:
        _check_precoder_power(F, p_max, "pilot")
    some = next(iter(stats.values()))
    M, N = some.shape
    tau_p = book.tau_p
    eye_m = np.eye(M)
    ftil = {k: np.kron(F[k].T, eye_m) for k in F}
    cov = {key: stats[key].full_covariance() for key in stats}
    hbar_vec = {key: vec(stats[key].hbar) for key in stats}

    pi, gain, chat, cerr, ybar = {}, {}, {}, {}, {}
    links = sorted(stats.keys())
    for (k, l) in links:
        coset = book.coset(k)
        acc = np.zeros((M * N, M * N), dtype=complex)
        mean = np.zeros(M * N, dtype=complex)
        for i in coset:
            fc = ftil[i] @ cov[(i, l)]
            acc += fc @ ftil[i].conj().T
            mean += ftil[i] @ hbar_vec[(i, l)]
        pi_kl = herm(tau_p * acc) + sigma2 * np.eye(M * N)
        x = solve_hermitian(pi_kl, ftil[k] @ cov[(k, l)], warn_label=f"Pi[{k},{l}]")
        g = x.conj().T                       # C Ft^H Pi^{-1}
        chat_kl = herm(tau_p * (g @ (ftil[k] @ cov[(k, l)])))
        pi[(k, l)] = pi_kl
        gain[(k, l)] = g
        chat[(k, l)] = chat_kl
        cerr[(k, l)] = herm(cov[(k, l)] - chat_kl)
        ybar[(k, l)] = tau_p * mean
    return EstimationStats(book=book, F=F, pi=pi, gain=gain, chat=chat,
                           cerr=cerr, ybar=ybar, M=M, N=N)


def pilot_observe(realization, book: PilotBook, F: dict, sigma2=None, p_max=None):
    """De-spread pilot observations y_kl (and their means are in EstimationStats).

    Returns (k, l) -> length-MN vector vec(Y_l Phi_k^*). The noise block of the
    realization already carries the sigma2 scaling from the channel draw.
    """
    if p_max is not None:
        _check_precoder_power(F, p_max, "pilot")
    links = sorted(realization.H.keys())
    aps = sorted({l for (_, l) in links})
    ues = sorted({k for (k, _) in links})
    y = {}
    for l in aps:
        some = realization.H[(ues[0], l)]
        M = some.shape[0]
        Y = np.zeros((M, book.tau_p), dtype=complex)
        for k in ues:
            Y += realization.H[(k, l)] @ F[k] @ book.pilot_of(k).T
        Y += realization.pilot_noise[l]
        for k in ues:
            y[(k, l)] = vec(Y @ np.conj(book.pilot_of(k)))
    return y


def mmse_estimate(y_kl, k, l, stats_kl, est: EstimationStats):
    """Estimate of H_kl from its de-spread observation."""
    h = vec(stats_kl.hbar) + est.gain[(k, l)] @ (y_kl - est.ybar[(k, l)])
    return unvec(h, est.M, est.N)


def estimate_links(realization, stats, est: EstimationStats) -> dict:
    """All per-link channel estimates of one coherence block."""
    y = pilot_observe(realization, est.book, est.F)
    return {(k, l): mmse_estimate(y[(k, l)], k, l, stats[(k, l)], est)
            for (k, l) in sorted(stats.keys())}


def error_load(cerr_kl, P_k, M, N):
    """Interference load of one link's estimation error under data precoder P_k:
    E[Herr P P^H Herr^H] = sum_{j,i} [P P^H]_{ji} Cerr^{ji}."""
    c4 = cerr_kl.reshape(N, M, N, M)
    return herm(eta_raw(c4, P_k @ P_k.conj().T))


def error_loads(est: EstimationStats, P: dict) -> dict:
    """Aggregated error loads Cerr'_l = sum_k Cerr'_kl per AP."""
    aps = sorted({l for (_, l) in est.cerr.keys()})
    out = {}
    for l in aps:
        acc = np.zeros((est.M, est.M), dtype=complex)
        for (k, ll) in est.cerr:
            if ll == l:
                acc += error_load(est.cerr[(k, ll)], P[k], est.M, est.N)
        out[l] = herm(acc)
    return out
