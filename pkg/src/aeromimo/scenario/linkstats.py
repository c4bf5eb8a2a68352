"""Per-link statistical CSI and random channel realizations.

Each (UE k, AP l) pair carries a Rician MIMO model with Kronecker correlation,

    H_kl = Hbar_kl + R_kl^(1/2) W T_kl^(1/2),   vec(H_kl) ~ CN(vec(Hbar), T^T (x) R),

with the three trace normalizations

    Tr(R) = beta*M/(kappa+1),  Tr(T) = N,  Tr(Hbar Hbar^H) = kappa*beta*M/(kappa+1),

enforced exactly by rescaling each factor after synthesis.
"""

from dataclasses import dataclass, field

import numpy as np

from ..linalg import herm, psd_sqrt
from .correlation import correlation_matrix, los_component
from .geometry import Deployment, fold_to_broadside
from .pathloss import los_probability, path_loss

__all__ = ["LinkStats", "ChannelRealization", "build_link_stats", "draw_channel"]


@dataclass
class LinkStats:
    """Statistical CSI of one (UE, AP) link."""

    hbar: np.ndarray    # (M, N) LoS component
    R: np.ndarray       # (M, M) receive correlation, Hermitian PSD
    T: np.ndarray       # (N, N) transmit correlation, Hermitian PSD
    beta: float         # linear average channel gain
    kappa: float        # Rician factor, linear
    R_sqrt: np.ndarray = field(default=None, repr=False)
    T_sqrt: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.R_sqrt is None:
            self.R_sqrt = psd_sqrt(self.R)
        if self.T_sqrt is None:
            self.T_sqrt = psd_sqrt(self.T)

    @property
    def shape(self):
        return self.hbar.shape

    def full_covariance(self) -> np.ndarray:
        """Prior covariance of vec(H): C = T^T (x) R, (MN x MN)."""
        return np.kron(self.T.T, self.R)


@dataclass
class ChannelRealization:
    """True channels of one coherence block plus the pilot-phase noise draws."""

    H: dict                 # (k, l) -> (M, N)
    pilot_noise: dict       # l -> (M, tau_p)


def build_link_stats(config, deployment: Deployment) -> dict:
    """Large-scale statistics for every (k, l) pair of a deployment.

    Mean angles are the geometric azimuths of the UE-AP line (folded to the
    ULA broadside range); correlation shapes come from the quadrature model
    and are rescaled together with the LoS outer product so the three trace
    identities hold exactly.
    """
    stats = {}
    M, N = config.M, config.N
    kappa = config.kappa
    for k in range(deployment.num_ues):
        for l in range(deployment.num_aps):
            az_ap, az_ue = deployment.azimuth_deg(k, l)
            theta_r = fold_to_broadside(az_ap)
            theta_t = fold_to_broadside(az_ue)
            p_los = los_probability(config.env, config.uav_height - config.ue_height,
                                    deployment.ground_distance(k, l))
            beta = path_loss(config.env, deployment.distance_3d(k, l), p_los).beta

            R = correlation_matrix(M, theta_r, config.asd_deg)
            T = correlation_matrix(N, theta_t, config.asd_deg)
            hbar = los_component(M, N, theta_r, theta_t)

            R = R * ((beta * M / (kappa + 1.0)) / np.trace(R).real)
            T = T * (N / np.trace(T).real)
            los_power = kappa * beta * M / (kappa + 1.0)
            hbar = hbar * np.sqrt(los_power / (M * N))
            stats[(k, l)] = LinkStats(hbar=hbar, R=herm(R), T=herm(T),
                                      beta=beta, kappa=kappa)
    return stats


def draw_channel(stats: dict, rng, tau_p: int = 0, sigma2: float = 0.0) -> ChannelRealization:
    """One coherence block: H_kl = Hbar + R^(1/2) W T^(1/2) with W iid CN(0,1),
    plus (optionally) the pilot-phase noise block per AP.

    The same generator state always produces the same draw order: links sorted
    by (k, l), then the per-AP noise.
    """
    H = {}
    for (k, l) in sorted(stats.keys()):
        s = stats[(k, l)]
        M, N = s.shape
        w = (rng.standard_normal((M, N)) + 1j * rng.standard_normal((M, N))) / np.sqrt(2.0)
        H[(k, l)] = s.hbar + s.R_sqrt @ w @ s.T_sqrt
    pilot_noise = {}
    if tau_p > 0:
        aps = sorted({l for (_, l) in stats.keys()})
        for l in aps:
            M = stats[(0, l)].shape[0] if (0, l) in stats else next(
                stats[key].shape[0] for key in stats if key[1] == l)
            noise = (rng.standard_normal((M, tau_p)) + 1j * rng.standard_normal((M, tau_p)))
            pilot_noise[l] = noise * np.sqrt(sigma2 / 2.0)
    return ChannelRealization(H=H, pilot_noise=pilot_noise)
