"""Shared builders for small synthetic test instances."""

import numpy as np
import pytest

from aeromimo import rng as rngmod
from aeromimo.config import SystemConfig
from aeromimo.estimation import build_pilot_book, link_estimation_stats
from aeromimo.scenario import build_link_stats, make_deployment


def equal_power_precoders(cfg):
    """Default precoders p/N * I for both pilot and data phases."""
    return {k: np.sqrt(cfg.p_k / cfg.N) * np.eye(cfg.N) for k in range(cfg.K)}


def random_psd(n, g, scale=1.0):
    a = g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))
    m = a @ a.conj().T / n
    return scale * 0.5 * (m + m.conj().T)


def build_point(cfg: SystemConfig):
    """Deployment + link stats + estimation stats for a config, seeded from cfg.seed."""
    dep = make_deployment(cfg.L, cfg.K, cfg.area_side, cfg.uav_height, cfg.ue_height,
                          rngmod.stream(cfg.seed, "deploy"))
    stats = build_link_stats(cfg, dep)
    book = build_pilot_book(cfg.tau_p, cfg.N, cfg.K, cfg.pilot_reuse,
                            rngmod.stream(cfg.seed, "pilots"))
    F = equal_power_precoders(cfg)
    est = link_estimation_stats(stats, book, F, cfg.sigma2)
    return dep, stats, book, F, est


@pytest.fixture
def g():
    return np.random.default_rng(12345)
