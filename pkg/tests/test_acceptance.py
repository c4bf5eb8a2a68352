"""Acceptance suite: one test per release criterion, each printing its margin.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
Tolerances are fixed here, not tuned at runtime; Monte Carlo criteria use
frozen seeds, so every run reproduces the same numbers bit-for-bit.
"""

import time

import numpy as np
import pytest
import sympy

from aeromimo import rng as rngmod
from aeromimo.config import SystemConfig, parse_config
from aeromimo.detection import empirical_weights, oneshot_logdets
from aeromimo.estimation import estimate_links
from aeromimo.experiments import (
    build_point_setup,
    local_detectors,
    oneshot_tensors,
    run_point,
    run_sweep,
    run_trial,
)
from aeromimo.experiments.csvio import render_csv
from aeromimo.freeprob import (
    ApStatistics,
    ap_statistics_from_setup,
    asymptotic_weight_system,
    signal_gram_derivatives,
    receive_gram_derivatives,
    solve_signal_gram,
    solve_receive_gram,
)
from aeromimo.linalg import psd_inv_sqrt, vec
from aeromimo.scenario import draw_channel

from conftest import random_psd


def report(name, passed, detail):
    print(f"\n[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    assert passed, f"{name}: {detail}"


# --- Criterion: Marchenko-Pastur oracle --------------------------------------

def white_ap(M, K, N):
    return ApStatistics(
        hbar=np.zeros((M, K * N), dtype=complex),
        chat=[np.eye(M * N, dtype=complex) for _ in range(K)],
        cprime=np.zeros((M, M)),
        P=[np.eye(N, dtype=complex) for _ in range(K)],
        sigma2=1.0,
    )


def mp_closed_form():
    w = sympy.symbols("w")
    lam = sympy.symbols("lam", positive=True)
    a = 1 - lam - w
    m = (a - sympy.sqrt(a * a - 4 * lam * w)) / (2 * lam * w)
    m_fun = sympy.lambdify((w, lam), m)
    mp_fun = sympy.lambdify((w, lam), sympy.diff(m, w))
    return m_fun, mp_fun


def test_marchenko_pastur_oracle():
    t0 = time.monotonic()
    M, K, N = 32, 4, 4
    ap = white_ap(M, K, N)
    lam = (K * N) / M
    m_fun, mp_fun = mp_closed_form()
    worst_val, worst_der = 0.0, 0.0
    for z in (-0.5, -1.0, -2.0):
        sol = solve_signal_gram(ap, z)
        der = signal_gram_derivatives(ap, sol)
        worst_val = max(worst_val, abs(sol.g_b - (-m_fun(z / M, lam) / M)))
        worst_der = max(worst_der, abs(der.g_b_prime - mp_fun(z / M, lam) / M**2))
    elapsed = time.monotonic() - t0
    report(
        "marchenko-pastur",
        worst_val < 1e-6 and worst_der < 1e-5 and elapsed < 5.0,
        f"max |g_B - MP| = {worst_val:.2e} (tol 1e-6), max |g'_B - MP'| = {worst_der:.2e} "
        f"(tol 1e-5), runtime {elapsed:.1f}s (< 5s)",
    )


# --- Criterion: resolvent agreement across growing dimensions ----------------

def _resolvent_error(M, N, draws, seed):
    # strong scattering, tight angular spread and high SNR keep the
    # deterministic-equivalent bias well above the Monte Carlo noise floor,
    # so the error ladder is bias-dominated at every size
    cfg = SystemConfig(L=1, M=M, K=2, N=N, seed=seed, environment="urban",
                       area_side=250.0, p_k=20.0, kappa=0.1, asd_deg=8.0)
    setup = build_point_setup(cfg)
    ap = ap_statistics_from_setup(setup, 0)
    sol = solve_signal_gram(ap, -1.0)
    g = rngmod.stream(seed, "resolvent-mc", M)
    l_half = psd_inv_sqrt(ap.s_mat())
    p_blk = ap.p_blk()
    facs = []
    for k in range(ap.K):
        w, v = np.linalg.eigh(ap.chat[k])
        facs.append(v * np.sqrt(np.clip(w, 0, None)))
    acc = 0.0
    eye = np.eye(ap.n_tot)
    for _ in range(draws):
        hh = ap.hbar.copy()
        for k in range(ap.K):
            zv = (g.standard_normal(ap.M * ap.N) + 1j * g.standard_normal(ap.M * ap.N)) / np.sqrt(2)
            hh[:, k * ap.N:(k + 1) * ap.N] += (facs[k] @ zv).reshape(ap.M, ap.N, order="F")
        gm = l_half @ hh @ p_blk
        b = gm.conj().T @ gm
        acc += np.trace(np.linalg.inv(-eye - b)).real / ap.n_tot
    mc = acc / draws
    return abs(sol.g_b - mc) / abs(mc)


def test_resolvent_agreement():
    t0 = time.monotonic()
    errs = [_resolvent_error(M, N, draws=2000, seed=5) for (M, N) in ((8, 2), (16, 4), (32, 8))]
    elapsed = time.monotonic() - t0
    report(
        "resolvent-agreement",
        all(e < 0.02 for e in errs) and errs[0] > errs[1] > errs[2] and elapsed < 120.0,
        f"rel errors (8,4)->(16,8)->(32,16): {errs[0]:.5f} > {errs[1]:.5f} > {errs[2]:.5f} "
        f"(tol 0.02, strictly decreasing), runtime {elapsed:.0f}s (< 120s)",
    )


# --- Criterion: asymptotic-weights accuracy ----------------------------------

def test_asymptotic_weights_accuracy():
    t0 = time.monotonic()
    cfg = SystemConfig(L=4, K=4, M=16, N=4, seed=7, environment="urban")
    setup = build_point_setup(cfg)
    aps = [ap_statistics_from_setup(setup, l) for l in range(cfg.L)]
    ws_asym = asymptotic_weight_system(aps, cfg.sigma2)
    T = 2000
    ld_emp = np.empty((T, cfg.K))
    ld_asym = np.empty((T, cfg.K))
    for t in range(T):
        trial = run_trial(setup, rngmod.stream(cfg.seed, "trial", 0, t))
        u_list, q_list = local_detectors(setup, trial)
        V, UU = oneshot_tensors(setup, trial, u_list)
        ws = empirical_weights(trial.x, q_list, u_list, setup.s_mats)
        ld_emp[t] = oneshot_logdets(V, UU, np.tile(ws.omega, (cfg.K, 1)), cfg.sigma2)
        ld_asym[t] = oneshot_logdets(V, UU, np.tile(ws_asym.omega, (cfg.K, 1)), cfg.sigma2)
    se_emp = cfg.prelog * ld_emp.mean(axis=0).sum()
    se_asym = cfg.prelog * ld_asym.mean(axis=0).sum()
    rel = abs(se_emp - se_asym) / se_emp
    elapsed = time.monotonic() - t0
    report(
        "asymptotic-weights-accuracy",
        rel < 0.05 and elapsed < 600.0,
        f"sum SE per-trial-empirical {se_emp:.4f} vs asymptotic {se_asym:.4f}, "
        f"rel diff {rel:.4f} (tol 0.05) over {T} trials, runtime {elapsed:.0f}s (< 600s)",
    )


# --- Criterion: Prop-1 weight optimality --------------------------------------

def test_weight_optimality():
    g = np.random.default_rng(424242)
    worst = -np.inf
    instances = 0
    while instances < 200:
        L = int(g.integers(1, 5))
        M = int(g.integers(2, 9))
        K = int(g.integers(1, 3))
        N = int(g.integers(1, 3))
        n_tot = K * N
        qs, us, ss = [], [], []
        for _ in range(L):
            hhat = g.standard_normal((M, n_tot)) + 1j * g.standard_normal((M, n_tot))
            cp = random_psd(M, g, scale=0.3)
            s = cp + 0.5 * np.eye(M)
            hp = hhat
            gram = hp @ hp.conj().T + s
            u = np.linalg.solve(gram, hp)
            q = hp.conj().T @ np.linalg.solve(gram, hp)
            qs.append(0.5 * (q + q.conj().T))
            us.append(u)
            ss.append(s)
        x = g.standard_normal(n_tot) + 1j * g.standard_normal(n_tot)
        ws = empirical_weights(x, qs, us, ss)
        for _ in range(100):
            omega = g.standard_normal(L) + 1j * g.standard_normal(L)
            worst = max(worst, ws.mse - ws.mse_of(omega))
        instances += 1
    report(
        "weight-optimality",
        worst <= 1e-12,
        f"max (mse* - mse(random omega)) over 200 instances x 100 competitors = "
        f"{worst:.3e} (slack 1e-12)",
    )


# --- Criterion: scheme ordering on the height sweep ---------------------------

def test_scheme_ordering_height_sweep():
    t0 = time.monotonic()
    schemes = ["fc", "oneshot_asymptotic", "small_cell"]
    lines = []
    ok = True
    for h in (40.0, 60.0, 80.0, 100.0, 120.0, 140.0, 160.0):
        cfg = SystemConfig(L=4, K=4, M=8, N=2, uav_height=h, seed=55,
                           environment="urban", area_side=500.0)
        res = {r.scheme: r for r in run_point(cfg, schemes, trials=2000)}
        fc, one, sc = res["fc"], res["oneshot_asymptotic"], res["small_cell"]
        ord1 = fc.sum_se >= one.sum_se - 3.0 * (fc.stderr + one.stderr)
        ord2 = one.sum_se >= sc.sum_se - 3.0 * (one.stderr + sc.stderr)
        ok = ok and ord1 and ord2
        lines.append(f"h={h:.0f}: fc {fc.sum_se:.3f} >= oneshot {one.sum_se:.3f} "
                     f">= smallcell {sc.sum_se:.3f} ({ord1 and ord2})")
    elapsed = time.monotonic() - t0
    report("scheme-ordering", ok, "; ".join(lines) + f"; runtime {elapsed:.0f}s")


# --- Criterion: suburban optimum shape ----------------------------------------
#
# Desk translation of the fixed-total-antennas study: M_tot = 36 over the
# divisor grid, UE density and per-AP load matched to the reference setup
# (K=8, N=2 on 1 km^2 at 100 m). The urban / dense-urban "keeps rising with
# more AP-UAVs" clause reproduces robustly. The clause pinning the suburban
# grid maximum to exactly L/M = 1 (L=M=6) does NOT reproduce at this scale:
# the suburban curve has its interior optimum at moderate L/M, but the
# maximum sits at L=9 in every probed configuration in which urban and dense
# urban still rise (see the blocking analysis in the decisions ledger). The
# criterion is asserted as specified and is expected RED on the argmax
# clause; the printed curves document the actual desk-scale shape.

SHAPE_K = 8
SHAPE_N = 2
SHAPE_HEIGHT = 100.0
SHAPE_AREA = 1000.0
SHAPE_KAPPA = 2.0
SHAPE_TRIALS = 1998          # split over deployments
SHAPE_DEPLOYMENTS = 6
SHAPE_SEED = 33


def _shape_curve(env):
    vals = {}
    errs = {}
    for L in (1, 2, 3, 4, 6, 9, 12, 18):
        M = 36 // L
        ses = []
        for d in range(SHAPE_DEPLOYMENTS):
            cfg = SystemConfig(L=L, M=M, K=SHAPE_K, N=SHAPE_N, seed=SHAPE_SEED,
                               environment=env, uav_height=SHAPE_HEIGHT,
                               area_side=SHAPE_AREA, kappa=SHAPE_KAPPA)
            r = run_point(cfg, ["oneshot_asymptotic"],
                          trials=SHAPE_TRIALS // SHAPE_DEPLOYMENTS, deployment_index=d)[0]
            ses.append(r.sum_se)
        vals[L] = float(np.mean(ses))
        errs[L] = float(np.std(ses) / np.sqrt(len(ses)))
    return vals, errs


def test_suburban_optimum_shape():
    t0 = time.monotonic()
    sub, sub_e = _shape_curve("suburban")
    urb, urb_e = _shape_curve("urban")
    den, den_e = _shape_curve("dense_urban")
    arg_sub = max(sub, key=sub.get)
    urb_rises = urb[18] > urb[6] - 3.0 * (urb_e[18] + urb_e[6])
    den_rises = den[18] > den[6] - 3.0 * (den_e[18] + den_e[6])
    interior = arg_sub not in (1, 18)
    elapsed = time.monotonic() - t0
    detail = (f"suburban argmax L={arg_sub} (criterion wants 6; interior optimum: {interior}): "
              + " ".join(f"L{l}:{v:.2f}" for l, v in sub.items())
              + f" | urban L18 {urb[18]:.2f} vs L6 {urb[6]:.2f} (rises {urb_rises})"
              + f" | dense L18 {den[18]:.2f} vs L6 {den[6]:.2f} (rises {den_rises})"
              + f"; runtime {elapsed:.0f}s"
              + "; argmax clause documented as unattainable at desk scale"
                " (see decisions ledger)")
    report("suburban-optimum-shape", arg_sub == 6 and urb_rises and den_rises, detail)


# --- Criterion: estimator correctness ------------------------------------------

def test_estimator_correctness():
    t0 = time.monotonic()
    cfg = SystemConfig(L=1, M=2, K=2, N=2, pilot_reuse=2, seed=3)
    setup = build_point_setup(cfg)
    T = 100_000
    g = rngmod.stream(3, "acceptance-orth")
    MN = cfg.M * cfg.N
    prods = np.zeros((T, MN, MN), dtype=complex)
    errs = np.zeros((MN, MN), dtype=complex)
    for t in range(T):
        real = draw_channel(setup.stats, g, tau_p=cfg.tau_p, sigma2=cfg.sigma2)
        hhat = estimate_links(real, setup.stats, setup.est)
        e = vec(real.H[(0, 0)] - hhat[(0, 0)])
        prods[t] = np.outer(e, vec(hhat[(0, 0)]).conj())
        errs += np.outer(e, e.conj())
    mean = prods.mean(axis=0)
    sem = prods.std(axis=0) / np.sqrt(T)
    ratio = float(np.max(np.abs(mean) / np.maximum(sem, 1e-300)))
    cov = errs / T
    rel = float(np.linalg.norm(cov - setup.est.cerr[(0, 0)])
                / np.linalg.norm(setup.est.cerr[(0, 0)]))
    elapsed = time.monotonic() - t0
    report(
        "estimator-correctness",
        ratio < 5.0 and rel < 0.03 and elapsed < 60.0,
        f"orthogonality max |mean|/stderr = {ratio:.2f} (tol 5), error-covariance rel "
        f"Frobenius = {rel:.4f} (tol 0.03) at {T} draws, runtime {elapsed:.0f}s (< 60s)",
    )


# --- Criterion: finite-difference derivative suite ------------------------------

def test_derivative_finite_difference_suite():
    t0 = time.monotonic()
    worst_margin = -np.inf
    checked = 0
    g = np.random.default_rng(31337)
    for i in range(50):
        M = int(g.integers(3, 7))
        K = int(g.integers(1, 3))
        N = int(g.integers(1, 3))
        ap = ApStatistics(
            hbar=(g.standard_normal((M, K * N)) + 1j * g.standard_normal((M, K * N))) / np.sqrt(M),
            chat=[random_psd(M * N, g, scale=1.0 / M) for _ in range(K)],
            cprime=random_psd(M, g, scale=0.2),
            P=[np.eye(N) + 0.1 * random_psd(N, g) for _ in range(K)],
            sigma2=0.7,
        )
        if i % 2 == 0:
            z, eps = -1.0, 1e-4
            sol = solve_signal_gram(ap, z)
            der = signal_gram_derivatives(ap, sol)
            fd = (solve_signal_gram(ap, z - eps).g_d1_full - solve_signal_gram(ap, z + eps).g_d1_full) / (2 * eps)
            err = np.abs(der.g_d1_prime - fd)
            tol = 1e-6 + 1e-4 * np.abs(der.g_d1_prime)
        else:
            z = -0.9
            eps = 1e-4 * abs(z)
            sol = solve_receive_gram(ap, z)
            der = receive_gram_derivatives(ap, sol)
            fd = (solve_receive_gram(ap, z - eps).g_dt - solve_receive_gram(ap, z + eps).g_dt) / (2 * eps)
            err = np.abs(der.g_dt_prime - fd)
            tol = 1e-6 + 1e-4 * np.abs(der.g_dt_prime)
        worst_margin = max(worst_margin, float(np.max(err - tol)))
        checked += 1
    elapsed = time.monotonic() - t0
    report(
        "derivative-finite-difference",
        worst_margin <= 0.0 and checked == 50,
        f"max (|G' - central difference| - tol) over {checked} instances = "
        f"{worst_margin:.3e} (pass if <= 0), runtime {elapsed:.0f}s",
    )


# --- Criterion: determinism -----------------------------------------------------

DET_CONFIG = """
scenario:
  L: 3
  M: 4
  K: 3
  N: 2
  seed: 11
sweep:
  axis: height
  points: [80, 120]
  trials: 32
  schemes: [fc, oneshot_empirical, oneshot_asymptotic, small_cell]
  environments: [urban]
output:
  directory: out
  prefix: det
"""


def test_determinism_across_parallelism():
    cfg = parse_config(DET_CONFIG)
    texts = []
    for par in (1, 8):
        out = run_sweep(cfg, seed=7, parallel=par)
        texts.append(render_csv(out.rows_by_env["urban"]))
    again = render_csv(run_sweep(cfg, seed=7, parallel=1).rows_by_env["urban"])
    identical = texts[0] == texts[1] == again
    report(
        "determinism",
        identical and len(texts[0].splitlines()) == 1 + 2 * 4,
        f"CSV bytes identical across parallelism 1 and 8 and across reruns: {identical} "
        f"({len(texts[0].splitlines()) - 1} rows)",
    )
