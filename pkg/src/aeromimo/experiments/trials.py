"""Per-point setup and the per-trial computation kernel.

A scenario point owns one deployment, the large-scale link statistics, the
pilot book and the estimator's second-order statistics; a trial draws one
coherence block (channels + pilot noise + data signal), runs the MMSE
estimator, and exposes the tensors the detection schemes consume.
"""

from dataclasses import dataclass, field

import numpy as np

from .. import rng as rngmod
from ..config import SystemConfig
from ..estimation import build_pilot_book, estimate_links, link_estimation_stats, error_loads
from ..linalg import blkdiag
from ..scenario import build_link_stats, draw_channel, make_deployment

__all__ = ["PointSetup", "build_point_setup", "run_trial", "local_detectors", "oneshot_tensors"]


@dataclass
class PointSetup:
    cfg: SystemConfig
    deployment: object
    stats: dict
    est: object                 # EstimationStats
    F: dict                     # pilot precoders
    P: dict                     # data precoders
    P_blk: np.ndarray           # (N_tot, N_tot)
    cprime: dict                # l -> (M, M) aggregated error load
    cprime_blk: np.ndarray      # (M_tot, M_tot)
    s_mats: list = field(default=None)      # l -> Cerr'_l + sigma2 I
    nearest: np.ndarray = field(default=None)  # UE k -> nearest AP index
    deployment_index: int = 0

    def __post_init__(self):
        cfg = self.cfg
        if self.s_mats is None:
            eye = np.eye(cfg.M)
            self.s_mats = [self.cprime[l] + cfg.sigma2 * eye for l in range(cfg.L)]
        if self.nearest is None:
            self.nearest = np.array([self.deployment.nearest_ap(k) for k in range(cfg.K)])


def equal_power_precoder(cfg) -> dict:
    """p/N * I per UE: transmit power divided equally across antennas."""
    return {k: np.sqrt(cfg.p_k / cfg.N) * np.eye(cfg.N) for k in range(cfg.K)}


def build_point_setup(cfg: SystemConfig, deployment_index: int = 0) -> PointSetup:
    dep = make_deployment(cfg.L, cfg.K, cfg.area_side, cfg.uav_height, cfg.ue_height,
                          rngmod.stream(cfg.seed, "deploy", deployment_index))
    stats = build_link_stats(cfg, dep)
    book = build_pilot_book(cfg.tau_p, cfg.N, cfg.K, cfg.pilot_reuse,
                            rngmod.stream(cfg.seed, "pilots", deployment_index))
    F = equal_power_precoder(cfg)
    P = equal_power_precoder(cfg)
    est = link_estimation_stats(stats, book, F, cfg.sigma2,
                                p_max={k: cfg.p_k for k in range(cfg.K)})
    cprime = error_loads(est, P)
    return PointSetup(
        cfg=cfg, deployment=dep, stats=stats, est=est, F=F, P=P,
        P_blk=blkdiag([P[k] for k in range(cfg.K)]),
        cprime=cprime,
        cprime_blk=blkdiag([cprime[l] for l in range(cfg.L)]),
    )


@dataclass
class TrialData:
    H_blocks: np.ndarray        # (L, K, M, N) true channels
    Hhat_blocks: np.ndarray     # (L, K, M, N) MMSE estimates
    x: np.ndarray               # (N_tot,) transmitted signal of the block

    def hhat_stack(self):
        """(M_tot, N_tot) stacked estimates: AP blocks in rows, UE blocks in columns."""
        L, K, M, N = self.Hhat_blocks.shape
        return self.Hhat_blocks.transpose(0, 2, 1, 3).reshape(L * M, K * N)

    def hhat_ap(self, l):
        K, M, N = self.Hhat_blocks.shape[1:]
        return self.Hhat_blocks[l].transpose(1, 0, 2).reshape(M, K * N)


def run_trial(setup: PointSetup, trial_rng) -> TrialData:
    """Draw one coherence block and estimate every link; x ~ CN(0, I_Ntot)."""
    cfg = setup.cfg
    real = draw_channel(setup.stats, trial_rng, tau_p=cfg.tau_p, sigma2=cfg.sigma2)
    hhat = estimate_links(real, setup.stats, setup.est)
    L, K, M, N = cfg.L, cfg.K, cfg.M, cfg.N
    Hb = np.empty((L, K, M, N), dtype=complex)
    Hhb = np.empty((L, K, M, N), dtype=complex)
    for l in range(L):
        for k in range(K):
            Hb[l, k] = real.H[(k, l)]
            Hhb[l, k] = hhat[(k, l)]
    x = (trial_rng.standard_normal(K * N) + 1j * trial_rng.standard_normal(K * N)) / np.sqrt(2.0)
    return TrialData(H_blocks=Hb, Hhat_blocks=Hhb, x=x)


def local_detectors(setup: PointSetup, trial: TrialData):
    """Local MMSE detectors and signal-space Grams of every AP for one trial."""
    from ..detection import local_mmse, gram_q

    cfg = setup.cfg
    U_list, Q_list = [], []
    for l in range(cfg.L):
        hh = trial.hhat_ap(l)
        U_list.append(local_mmse(hh, setup.P_blk, setup.cprime[l], cfg.sigma2))
        Q_list.append(gram_q(hh, setup.P_blk, setup.cprime[l], cfg.sigma2))
    return U_list, Q_list


def oneshot_tensors(setup: PointSetup, trial: TrialData, U_list):
    """Effective-channel tensor V[k,i,l] = U_kl^H H_il P_i and UU[k,l] = U_kl^H U_kl."""
    cfg = setup.cfg
    L, K, M, N = cfg.L, cfg.K, cfg.M, cfg.N
    UB = np.stack([U.reshape(M, K, N).transpose(1, 0, 2) for U in U_list])   # (L, K, M, N)
    HP = np.einsum("lkmn,knq->lkmq", trial.H_blocks,
                   np.stack([setup.P[k] for k in range(K)]), optimize=True)
    V = np.einsum("lkma,limb->kilab", UB.conj(), HP, optimize=True)
    UU = np.einsum("lkma,lkmb->klab", UB.conj(), UB, optimize=True)
    return V, UU
