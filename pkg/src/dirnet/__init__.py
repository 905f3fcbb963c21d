"""Connectivity of wireless networks with directional antennas.

Analytic expressions and Monte Carlo estimates for connection probability,
ergodic rate and mean node degree in Poisson networks whose nodes use the
gain pattern ``1 + d cos(n theta)``.
"""
from .errors import ConfigError, DomainError, QuadratureError, SingularInputError
from .model import (ISOTROPIC, AntennaPattern, LinkGeometry, NetworkRealization,
                    SystemParams, gain, path_loss, sinr)

__version__ = "0.1.0"

__all__ = [
    "AntennaPattern", "ConfigError", "DomainError", "ISOTROPIC", "LinkGeometry",
    "NetworkRealization", "QuadratureError", "SingularInputError", "SystemParams",
    "gain", "path_loss", "sinr", "__version__",
]
