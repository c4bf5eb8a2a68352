from .environments import ENVIRONMENTS, Environment
from .geometry import Deployment, make_deployment
from .pathloss import los_probability, path_loss
from .correlation import correlation_matrix, steering_vector, los_component
from .linkstats import LinkStats, ChannelRealization, build_link_stats, draw_channel

__all__ = [
    "ENVIRONMENTS",
    "Environment",
    "Deployment",
    "make_deployment",
    "los_probability",
    "path_loss",
    "correlation_matrix",
    "steering_vector",
    "los_component",
    "LinkStats",
    "ChannelRealization",
    "build_link_stats",
    "draw_channel",
]
