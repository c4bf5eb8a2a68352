"""Statistical inputs of one AP's deterministic-equivalent solvers."""

from dataclasses import dataclass

import numpy as np

__all__ = ["ApStatistics", "ap_statistics_from_setup"]


@dataclass
class ApStatistics:
    """Everything the Cauchy-transform fixed points need for one AP.

    hbar    (M, N_tot) stacked LoS components of the channel *estimates*
            (the estimate of link (k, l) has mean Hbar_kl)
    chat    per-UE (MN, MN) estimate covariances
    cprime  (M, M) aggregated estimation-error load of this AP
    P       per-UE (N, N) data precoders
    sigma2  noise power
    """

    hbar: np.ndarray
    chat: list
    cprime: np.ndarray
    P: list
    sigma2: float

    @property
    def M(self) -> int:
        return self.hbar.shape[0]

    @property
    def K(self) -> int:
        return len(self.chat)

    @property
    def N(self) -> int:
        return self.P[0].shape[0]

    @property
    def n_tot(self) -> int:
        return self.K * self.N

    def p_blk(self) -> np.ndarray:
        out = np.zeros((self.n_tot, self.n_tot), dtype=complex)
        for k, pk in enumerate(self.P):
            out[k * self.N:(k + 1) * self.N, k * self.N:(k + 1) * self.N] = pk
        return out

    def s_mat(self) -> np.ndarray:
        return self.cprime + self.sigma2 * np.eye(self.M)


def ap_statistics_from_setup(setup, l) -> ApStatistics:
    """Extract AP l's solver inputs from a scenario point."""
    cfg = setup.cfg
    hbar = np.concatenate([setup.stats[(k, l)].hbar for k in range(cfg.K)], axis=1)
    chat = [setup.est.chat[(k, l)] for k in range(cfg.K)]
    return ApStatistics(hbar=hbar, chat=chat, cprime=setup.cprime[l],
                        P=[setup.P[k] for k in range(cfg.K)], sigma2=cfg.sigma2)
