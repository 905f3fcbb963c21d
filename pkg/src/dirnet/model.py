"""Physical parameters, antenna patterns, link geometry and exact SINR.

Geometry follows a fixed frame: the receiver sits at the origin with its
boresight along the positive x-axis. A transmitter at polar position
``(t, theta)`` whose antenna points towards ``phi`` is seen by the receiver
at gain angle ``theta`` and radiates towards the receiver at gain angle
``theta + pi - phi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SingularInputError


@dataclass(frozen=True)
class SystemParams:
    """Scalar physical parameters shared by every node."""

    power: float = 1.0
    noise: float = 1.0
    threshold: float = 1.0
    gamma: float = 0.3
    eta: float = 4.0
    epsilon: float = 0.0
    density: float = 1.0

    def __post_init__(self):
        checks = (
            ("power", self.power > 0, "power must be positive"),
            ("noise", self.noise >= 0, "noise must be non-negative"),
            ("threshold", self.threshold > 0, "threshold must be positive"),
            ("gamma", 0 <= self.gamma <= 1, "gamma must lie in [0, 1]"),
            ("eta", self.eta > 2, "eta must exceed 2"),
            ("epsilon", self.epsilon >= 0, "epsilon must be non-negative"),
            ("density", self.density >= 0, "density must be non-negative"),
        )
        for name, ok, message in checks:
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise DomainError(f"{name} must be a finite real number", name)
            if not ok:
                raise DomainError(message, name)

    def replace(self, **changes) -> "SystemParams":
        values = {k: getattr(self, k) for k in self.__dataclass_fields__}
        values.update(changes)
        return SystemParams(**values)


@dataclass(frozen=True)
class AntennaPattern:
    """Gain ``1 + d cos(n theta)``: ``d`` sets directivity, ``n`` the lobe count."""

    d: float = 0.0
    n: int = 1

    def __post_init__(self):
        if not (isinstance(self.d, (int, float)) and 0 <= self.d <= 1):
            raise DomainError("d must lie in [0, 1]", "d")
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise DomainError("n must be a positive integer", "n")

    def nulls(self) -> list[float]:
        """Angles in [0, 2pi) where the gain vanishes (only when d == 1)."""
        if self.d != 1:
            return []
        return [(2 * k + 1) * math.pi / self.n for k in range(self.n)]


ISOTROPIC = AntennaPattern(0.0, 1)


@dataclass(frozen=True)
class LinkGeometry:
    """Tagged transmitter: distance, angular position and antenna orientation."""

    distance: float
    angle: float = 0.0
    orientation: float = math.pi

    def __post_init__(self):
        if not (math.isfinite(self.distance) and self.distance >= 0):
            raise DomainError("distance must be non-negative", "distance")
        if not (math.isfinite(self.angle) and math.isfinite(self.orientation)):
            raise DomainError("angles must be finite", "angle")

    @property
    def tx_angle(self) -> float:
        return self.angle + math.pi - self.orientation

    def gain_product(self, tx: AntennaPattern, rx: AntennaPattern) -> float:
        return float(gain(tx, self.tx_angle) * gain(rx, self.angle))


@dataclass(frozen=True, eq=False)
class NetworkRealization:
    """One sampled network: interferer arrays plus the tagged link.

    Interferers are stored column-wise as equal-length arrays of distance,
    angular position, antenna orientation and fading power.
    """

    distance: np.ndarray
    angle: np.ndarray
    orientation: np.ndarray
    fading: np.ndarray
    tagged: LinkGeometry
    tagged_fading: float
    radius: float = field(default=math.inf)

    def __post_init__(self):
        n = len(self.distance)
        if not (len(self.angle) == len(self.orientation) == len(self.fading) == n):
            raise DomainError("interferer arrays must have equal length")
        if n and np.any(self.fading <= 0) or self.tagged_fading <= 0:
            raise DomainError("fading gains must be positive", "fading")
        if n and np.any(self.distance >= self.radius):
            raise DomainError("interferers must lie inside the simulation disk", "distance")

    @property
    def num_interferers(self) -> int:
        return len(self.distance)


def gain(pattern: AntennaPattern, angle):
    """Antenna gain at ``angle`` (radians, any real value)."""
    return 1.0 + pattern.d * np.cos(pattern.n * np.asarray(angle, dtype=float))


def path_loss(params: SystemParams, x):
    """Attenuation ``1 / (x**eta + epsilon)``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("distance must be non-negative", "distance")
    if params.epsilon == 0 and np.any(x == 0):
        raise SingularInputError("zero distance with epsilon = 0 is singular", "distance")
    return 1.0 / (x ** params.eta + params.epsilon)


def sinr(realization: NetworkRealization, params: SystemParams,
         tx_pattern: AntennaPattern, rx_pattern: AntennaPattern | None = None) -> float:
    """Exact SINR of the tagged link in one realization."""
    rx_pattern = tx_pattern if rx_pattern is None else rx_pattern
    link = realization.tagged
    signal = (params.power * realization.tagged_fading * path_loss(params, link.distance)
              * link.gain_product(tx_pattern, rx_pattern))
    interference = 0.0
    if realization.num_interferers:
        theta = realization.angle
        terms = (realization.fading * path_loss(params, realization.distance)
                 * gain(tx_pattern, theta + math.pi - realization.orientation)
                 * gain(rx_pattern, theta))
        interference = params.power * float(np.sum(terms))
    return float(signal / (params.noise + params.gamma * interference))
