import numpy as np
import pytest

from aeromimo import rng as rngmod
from aeromimo.config import SystemConfig
from aeromimo.detection import (
    OneShotAccumulator,
    combine,
    empirical_weights,
    fc_logdets,
    global_mmse,
    gram_q,
    local_mmse,
    se_from_logdets,
    trace_weights,
)
from aeromimo.experiments import build_point_setup, local_detectors, oneshot_tensors, run_trial
from aeromimo.linalg import herm

from conftest import random_psd


def _random_instance(g, M=4, K=2, N=2, sigma2=0.5):
    n_tot = K * N
    hhat = g.standard_normal((M, n_tot)) + 1j * g.standard_normal((M, n_tot))
    P = np.kron(np.eye(K), np.eye(N))  # unit precoders
    cprime = random_psd(M, g, scale=0.3)
    return hhat, P, cprime, sigma2


class TestGlobalMmse:
    def test_zero_precoder_zero_detector(self, g):
        hhat, _, cprime, s2 = _random_instance(g)
        U = global_mmse(hhat, np.zeros((4, 4)), cprime, s2)
        assert np.allclose(U, 0.0)

    def test_scalar_closed_form(self, g):
        # M_tot = N_tot = 1, perfect CSI: U = sqrt(p) h / (p |h|^2 + sigma2)
        h = np.array([[0.7 - 0.3j]])
        p, s2 = 2.0, 0.4
        U = global_mmse(h, np.sqrt(p) * np.eye(1), np.zeros((1, 1)), s2)
        want = np.sqrt(p) * h[0, 0] / (p * abs(h[0, 0]) ** 2 + s2)
        assert U[0, 0] == pytest.approx(want, rel=1e-12)

    def test_single_ap_equals_local(self, g):
        hhat, P, cprime, s2 = _random_instance(g)
        assert np.allclose(global_mmse(hhat, P, cprime, s2), local_mmse(hhat, P, cprime, s2))


class TestFcSe:
    def test_zero_precoder_zero_se(self, g):
        hhat, _, cprime, s2 = _random_instance(g)
        ld = fc_logdets(hhat, np.zeros((4, 4)), cprime, s2, K=2, N=2)
        assert np.allclose(ld, 0.0)

    def test_se_vanishes_with_noise(self, g):
        hhat, P, cprime, _ = _random_instance(g)
        lds = [np.sum(fc_logdets(hhat, P, cprime, s2, 2, 2)) for s2 in (0.1, 10.0, 1e4, 1e8)]
        assert all(a > b for a, b in zip(lds, lds[1:]))
        assert lds[-1] < 1e-6

    def test_scalar_perfect_csi_closed_form(self, g):
        p, s2 = 1.3, 0.7
        for _ in range(20):
            h = (g.standard_normal((1, 1)) + 1j * g.standard_normal((1, 1))) / np.sqrt(2)
            ld = fc_logdets(h, np.sqrt(p) * np.eye(1), np.zeros((1, 1)), s2, 1, 1)
            assert ld[0] == pytest.approx(np.log2(1 + p * abs(h[0, 0]) ** 2 / s2), rel=1e-10)


class TestLocalMmse:
    def test_zero_estimates(self, g):
        P = np.eye(4)
        U = local_mmse(np.zeros((4, 4), dtype=complex), P, random_psd(4, g), 1.0)
        Q = gram_q(np.zeros((4, 4), dtype=complex), P, random_psd(4, g), 1.0)
        assert np.allclose(U, 0.0)
        assert np.allclose(Q, 0.0)

    @pytest.mark.parametrize("trial", range(5))
    def test_dual_formula_identity(self, trial):
        g = np.random.default_rng(100 + trial)
        hhat, P, cprime, s2 = _random_instance(g, M=5, K=3, N=2, sigma2=0.8)
        gram_q(hhat, P, cprime, s2, cross_check=True, check_tol=1e-10)

    def test_q_spectrum_in_unit_interval(self, g):
        hhat, P, cprime, s2 = _random_instance(g, M=6, K=2, N=2)
        w = np.linalg.eigvalsh(gram_q(hhat, P, cprime, s2))
        assert np.all(w >= -1e-12)
        assert np.all(w < 1.0)


class TestEmpiricalWeights:
    def _lists(self, g, L, M=4, K=2, N=2, s2=0.6):
        qs, us, ss = [], [], []
        for _ in range(L):
            hhat, P, cprime, _ = _random_instance(g, M=M, K=K, N=N)
            us.append(local_mmse(hhat, P, cprime, s2))
            qs.append(gram_q(hhat, P, cprime, s2))
            ss.append(cprime + s2 * np.eye(M))
        return qs, us, ss

    def test_single_ap_scalar_solution(self, g):
        qs, us, ss = self._lists(g, L=1)
        x = g.standard_normal(4) + 1j * g.standard_normal(4)
        ws = empirical_weights(x, qs, us, ss)
        v1 = np.vdot(x, qs[0] @ x)
        a11 = np.vdot(qs[0] @ x, qs[0] @ x)
        y11 = np.trace(us[0].conj().T @ ss[0] @ us[0]).real
        assert ws.omega[0] == pytest.approx(v1 / (a11 + y11), rel=1e-12)
        assert ws.mse == pytest.approx(np.vdot(x, x).real - abs(v1) ** 2 / (a11 + y11).real, rel=1e-10)

    def test_identical_aps_equal_weights(self, g):
        qs, us, ss = self._lists(g, L=1)
        x = g.standard_normal(4) + 1j * g.standard_normal(4)
        ws = empirical_weights(x, qs * 3, us * 3, ss * 3)
        assert np.allclose(ws.omega, ws.omega[0])

    @pytest.mark.parametrize("trial", range(10))
    def test_perturbation_optimality(self, trial):
        g = np.random.default_rng(500 + trial)
        qs, us, ss = self._lists(g, L=3)
        x = g.standard_normal(4) + 1j * g.standard_normal(4)
        ws = empirical_weights(x, qs, us, ss)
        base = ws.mse_of(ws.omega)
        assert base == pytest.approx(ws.mse, rel=1e-9)
        for l in range(3):
            for eps in (1e-3, -1e-3):
                pert = ws.omega.copy()
                pert[l] += eps
                assert ws.mse_of(pert) >= base - 1e-12

    def test_mse_beats_random_competitors(self, g):
        qs, us, ss = self._lists(g, L=4)
        x = g.standard_normal(4) + 1j * g.standard_normal(4)
        ws = empirical_weights(x, qs, us, ss)
        for _ in range(100):
            omega = g.standard_normal(4) + 1j * g.standard_normal(4)
            assert ws.mse_of(omega) >= ws.mse - 1e-12


class TestTraceWeights:
    def test_identity_grams(self, g):
        n_tot = 4
        qs = [np.eye(n_tot)] * 2
        us = [np.zeros((3, n_tot))] * 2
        ss = [np.eye(3)] * 2
        ws = trace_weights(qs, us, ss)
        assert np.allclose(ws.v, n_tot)

    def test_trace_lemma_concentration(self):
        # |x^H Q x - Tr Q| / N_tot shrinks as N_tot grows
        devs = []
        for n_tot in (4, 16, 64):
            g = np.random.default_rng(n_tot)
            a = g.standard_normal((n_tot, n_tot)) + 1j * g.standard_normal((n_tot, n_tot))
            q = herm(a @ a.conj().T) / n_tot
            acc = 0.0
            T = 200
            for _ in range(T):
                x = (g.standard_normal(n_tot) + 1j * g.standard_normal(n_tot)) / np.sqrt(2)
                acc += abs(np.vdot(x, q @ x) - np.trace(q)) / n_tot
            devs.append(acc / T)
        assert devs[0] > devs[1] > devs[2]

    def test_resolvent_identity(self, g):
        # Tr Q = N_tot + Tr((-I - B)^{-1}) with B the noise-whitened Gram
        hhat, P, cprime, s2 = _random_instance(g, M=5, K=2, N=2)
        n_tot = 4
        q = gram_q(hhat, P, cprime, s2)
        s = cprime + s2 * np.eye(5)
        hp = hhat @ P
        b = herm(hp.conj().T @ np.linalg.solve(s, hp))
        g_emp = np.trace(np.linalg.inv(-np.eye(n_tot) - b)).real / n_tot
        assert np.trace(q).real == pytest.approx(n_tot + n_tot * g_emp, rel=1e-10)


class TestCombine:
    def test_basis_weight_selects_ap(self, g):
        xs = [g.standard_normal(4) + 1j * g.standard_normal(4) for _ in range(3)]
        assert np.allclose(combine(xs, [1.0, 0.0, 0.0]), xs[0])

    def test_convex_identical(self, g):
        x = g.standard_normal(4)
        assert np.allclose(combine([x, x, x], [0.2, 0.3, 0.5]), x)

    def test_matches_direct_sum(self, g):
        xs = [g.standard_normal(4) + 1j * g.standard_normal(4) for _ in range(3)]
        w = g.standard_normal(3) + 1j * g.standard_normal(3)
        want = sum(wi * xi for wi, xi in zip(w, xs))
        assert np.allclose(combine(xs, w), want)


class TestOneShotSe:
    def test_zero_weights_zero_se(self, g):
        K, N, L = 2, 2, 3
        acc = OneShotAccumulator(K, N, L)
        V = g.standard_normal((K, K, L, N, N)) + 0j
        UU = g.standard_normal((K, L, N, N)) + 0j
        acc.add_trial(V, UU, np.zeros((K, L)))
        rep = acc.finalize(prelog=0.9, sigma2=1.0, scheme="oneshot")
        assert np.allclose(rep.per_ue_se, 0.0)

    def test_scheme_coincidence_single_ap_single_ue(self):
        # L=1, K=1, perfect CSI, omega=1: statistical bound ~= FC within MC error
        cfg = SystemConfig(L=1, M=8, K=1, N=1, kappa=20.0, seed=21)
        setup = build_point_setup(cfg)
        # overwrite estimator with perfect CSI: zero error load
        setup.cprime[0][:] = 0.0
        setup.cprime_blk[:] = 0.0
        T = 400
        acc = OneShotAccumulator(cfg.K, cfg.N, cfg.L)
        lds = np.empty((T, cfg.K))
        for t in range(T):
            trial = run_trial(setup, rngmod.stream(cfg.seed, "trial", t))
            trial.Hhat_blocks = trial.H_blocks  # perfect CSI
            U_list, _ = local_detectors(setup, trial)
            V, UU = oneshot_tensors(setup, trial, U_list)
            acc.add_trial(V, UU, np.ones((cfg.K, cfg.L)))
            lds[t] = fc_logdets(trial.hhat_stack(), setup.P_blk, setup.cprime_blk,
                                cfg.sigma2, cfg.K, cfg.N)
        rep = acc.finalize(cfg.prelog, cfg.sigma2, "oneshot")
        fc = se_from_logdets(lds, cfg.prelog, "fc")
        spread = cfg.prelog * np.std(lds.sum(axis=1)) / np.sqrt(T)
        assert abs(rep.sum_se - fc.sum_se) <= max(3 * spread, 0.02 * fc.sum_se)

    def test_smallcell_dominated_by_optimal_oneshot(self):
        # nearest-AP indicator weights vs the optimized statistical weights,
        # both through the same statistical-CSI bound
        from aeromimo.freeprob import ap_statistics_from_setup, asymptotic_weight_system

        cfg = SystemConfig(L=3, M=4, K=2, N=2, seed=31)
        setup = build_point_setup(cfg)
        ws_asym = asymptotic_weight_system(
            [ap_statistics_from_setup(setup, l) for l in range(cfg.L)], cfg.sigma2)
        T = 300
        acc_small = OneShotAccumulator(cfg.K, cfg.N, cfg.L)
        acc_one = OneShotAccumulator(cfg.K, cfg.N, cfg.L)
        omega_small = np.zeros((cfg.K, cfg.L))
        for k in range(cfg.K):
            omega_small[k, setup.nearest[k]] = 1.0
        for t in range(T):
            trial = run_trial(setup, rngmod.stream(cfg.seed, "trial", t))
            U_list, _ = local_detectors(setup, trial)
            V, UU = oneshot_tensors(setup, trial, U_list)
            acc_small.add_trial(V, UU, omega_small)
            acc_one.add_trial(V, UU, np.tile(ws_asym.omega, (cfg.K, 1)))
        rep_small = acc_small.finalize(cfg.prelog, cfg.sigma2, "small_cell")
        rep_one = acc_one.finalize(cfg.prelog, cfg.sigma2, "oneshot_asymptotic")
        assert rep_small.sum_se <= rep_one.sum_se * 1.05 + 0.05

    def test_tie_break_lowest_index(self):
        cfg = SystemConfig(L=4, M=2, K=1, N=1, seed=3)
        setup = build_point_setup(cfg)
        # put the UE exactly at the centroid: all APs equidistant
        setup.deployment.ue_positions[0, :2] = setup.deployment.ap_positions[:, :2].mean(axis=0)
        assert setup.deployment.nearest_ap(0) == 0


class TestWeightSystemStructure:
    def test_gram_matrix_hermitian_psd_and_noise_diag(self, g):
        from aeromimo.linalg import herm
        qs, us, ss = TestEmpiricalWeights()._lists(g, L=4)
        x = g.standard_normal(4) + 1j * g.standard_normal(4)
        ws = empirical_weights(x, qs, us, ss)
        assert np.allclose(ws.A, ws.A.conj().T)
        assert np.min(np.linalg.eigvalsh(herm(ws.A))) >= -1e-12 * np.linalg.norm(ws.A, 2)
        assert np.allclose(ws.Y, np.diag(np.diag(ws.Y)))
        assert np.all(np.diag(ws.Y).real >= 0)
        assert np.allclose(np.diag(ws.Y).imag, 0)
