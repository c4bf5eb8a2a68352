"""Fast oracle suite behind `aeromimo selftest`.

Four independent checks, each reporting its numeric margin:

  mp-stieltjes      fixed-point transform vs the closed-form Marchenko-Pastur
                    Stieltjes transform (the white-covariance degenerate case)
  derivative-fd     derivative recursions vs central differences of the base
                    fixed point
  mmse-orthogonality  Monte Carlo E[(h - hhat) hhat^H] = 0 within 5 standard
                    errors, plus the error-covariance match
  weight-optimality  exact combining weights beat random competitors and
                    one-coordinate perturbations

The MP oracle constant can be perturbed through AEROMIMO_MP_PERTURB (or the
--perturb-mp flag) as a negative control: a perturbed oracle must fail.
"""

import os
from dataclasses import dataclass

import numpy as np

from . import rng as rngmod
from .config import SystemConfig
from .detection import empirical_weights
from .estimation import estimate_links
from .experiments import build_point_setup, local_detectors, run_trial
from .freeprob import ApStatistics, signal_gram_derivatives, solve_signal_gram
from .linalg import vec
from .scenario import draw_channel

__all__ = ["OracleResult", "run_selftest", "SELFTEST_ORACLES"]


@dataclass
class OracleResult:
    name: str
    passed: bool
    margin: str


def _mp_stieltjes(w, lam):
    a = 1.0 - lam - w
    return (a - np.sqrt(a * a - 4.0 * lam * w)) / (2.0 * lam * w)


def oracle_mp(perturb=0.0):
    M, K, N = 32, 4, 4
    ap = ApStatistics(
        hbar=np.zeros((M, K * N), dtype=complex),
        chat=[np.eye(M * N, dtype=complex) for _ in range(K)],
        cprime=np.zeros((M, M)),
        P=[np.eye(N, dtype=complex) for _ in range(K)],
        sigma2=1.0,
    )
    lam = (K * N) / M * (1.0 + perturb)
    tol = 1e-6
    worst = 0.0
    for z in (-0.5, -1.0, -2.0):
        sol = solve_signal_gram(ap, z)
        want = -_mp_stieltjes(z / M, lam) / M
        worst = max(worst, abs(sol.g_b - want))
    return OracleResult("mp-stieltjes", worst < tol,
                        f"max |g_B - MP| = {worst:.3e} (tol {tol:.0e})")


def oracle_derivative_fd():
    g = np.random.default_rng(2024)
    M, K, N = 5, 2, 2
    a = g.standard_normal((M * N, M * N)) + 1j * g.standard_normal((M * N, M * N))
    chat = a @ a.conj().T / (M * N)
    c = g.standard_normal((M, M)) + 1j * g.standard_normal((M, M))
    ap = ApStatistics(
        hbar=(g.standard_normal((M, K * N)) + 1j * g.standard_normal((M, K * N))) / np.sqrt(M),
        chat=[0.5 * (chat + chat.conj().T) for _ in range(K)],
        cprime=0.1 * (c @ c.conj().T),
        P=[np.eye(N) for _ in range(K)],
        sigma2=0.8,
    )
    z, eps = -1.0, 1e-4
    sol = solve_signal_gram(ap, z)
    der = signal_gram_derivatives(ap, sol)
    lo = solve_signal_gram(ap, z - eps)
    hi = solve_signal_gram(ap, z + eps)
    fd = (lo.g_d1_full - hi.g_d1_full) / (2 * eps)
    err = np.abs(der.g_d1_prime - fd)
    tol = 1e-6 + 1e-4 * np.abs(der.g_d1_prime)
    worst = float(np.max(err - tol))
    return OracleResult("derivative-fd", bool(np.all(err <= tol)),
                        f"max (|G' - FD| - tol) = {worst:.3e} (pass if <= 0)")


def oracle_orthogonality():
    cfg = SystemConfig(L=1, M=2, K=2, N=2, pilot_reuse=2, seed=3)
    setup = build_point_setup(cfg)
    T = 4000
    g = rngmod.stream(3, "selftest-orth")
    MN = cfg.M * cfg.N
    prods = np.zeros((T, MN, MN), dtype=complex)
    for t in range(T):
        real = draw_channel(setup.stats, g, tau_p=cfg.tau_p, sigma2=cfg.sigma2)
        hhat = estimate_links(real, setup.stats, setup.est)
        e = vec(real.H[(0, 0)] - hhat[(0, 0)])
        prods[t] = np.outer(e, vec(hhat[(0, 0)]).conj())
    mean = prods.mean(axis=0)
    sem = prods.std(axis=0) / np.sqrt(T)
    worst = float(np.max(np.abs(mean) / np.maximum(sem, 1e-300)))
    return OracleResult("mmse-orthogonality", worst < 5.0,
                        f"max |E[e hhat^H]| / stderr = {worst:.2f} (tol 5)")


def oracle_weight_optimality():
    cfg = SystemConfig(L=3, M=4, K=2, N=2, seed=5)
    setup = build_point_setup(cfg)
    g = rngmod.stream(5, "selftest-weights")
    worst = -np.inf
    for t in range(10):
        trial = run_trial(setup, rngmod.stream(cfg.seed, "trial", 0, t))
        u_list, q_list = local_detectors(setup, trial)
        ws = empirical_weights(trial.x, q_list, u_list, setup.s_mats)
        for _ in range(20):
            omega = ws.omega + 1e-3 * (g.standard_normal(cfg.L) + 1j * g.standard_normal(cfg.L))
            worst = max(worst, ws.mse - ws.mse_of(omega))
    return OracleResult("weight-optimality", worst <= 1e-12,
                        f"max (mse* - mse(competitor)) = {worst:.3e} (pass if <= 1e-12)")


SELFTEST_ORACLES = ("mp-stieltjes", "derivative-fd", "mmse-orthogonality", "weight-optimality")


def run_selftest(perturb_mp: float = None) -> list:
    if perturb_mp is None:
        perturb_mp = float(os.environ.get("AEROMIMO_MP_PERTURB", "0") or 0)
    return [
        oracle_mp(perturb_mp),
        oracle_derivative_fd(),
        oracle_orthogonality(),
        oracle_weight_optimality(),
    ]
