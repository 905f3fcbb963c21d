"""Monte Carlo estimates of connection probability, rate and mean degree.

Random streams
--------------
Trial ``j`` of a configuration with seed ``s`` draws from its own Philox
stream: key ``s``, counter starting at ``(0, j, 0, 0)``. A trial is therefore
a pure function of ``(config, j)``, and results do not depend on how trials
are partitioned across workers. Per-trial outputs are concatenated in trial
order before any reduction.

Each trial first draws the tagged link's fading, then interferers in chunks
of ``CHUNK`` points. A chunk is a ``(4, CHUNK)`` block of uniforms giving
exponential area increments, angular positions, orientations and fading.
Points come out ordered by distance (cumulative area of a unit-rate Poisson
process, rescaled by the density), so the realization on a disk of radius
``R`` is exactly the restriction of the realization on any larger disk.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError, SingularInputError
from .model import (ISOTROPIC, AntennaPattern, LinkGeometry, NetworkRealization,
                    SystemParams, path_loss)

CHUNK = 256
BLOCK = 1024
_TINY = 2.0 ** -53
WORKERS_ENV = "DIRNET_WORKERS"
FADING_MODELS = ("rayleigh", "unit")


@dataclass(frozen=True)
class SimulationConfig:
    params: SystemParams = field(default_factory=SystemParams)
    tx_pattern: AntennaPattern = ISOTROPIC
    rx_pattern: AntennaPattern | None = None
    radius: float = 8.0
    trials: int = 30_000
    seed: int = 0
    fading: str = "rayleigh"
    workers: int | None = None

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise DomainError("radius must be positive", "radius")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise DomainError("trials must be a positive integer", "trials")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be an unsigned 64-bit integer", "seed")
        if self.fading not in FADING_MODELS:
            raise DomainError(f"fading must be one of {FADING_MODELS}", "fading")
        if self.workers is not None and self.workers < 1:
            raise DomainError("workers must be positive", "workers")

    @property
    def receiver(self) -> AntennaPattern:
        return self.tx_pattern if self.rx_pattern is None else self.rx_pattern

    def replace(self, **changes) -> "SimulationConfig":
        values = {k: getattr(self, k) for k in self.__dataclass_fields__}
        values.update(changes)
        return SimulationConfig(**values)


@dataclass(frozen=True)
class EstimateWithError:
    estimate: float
    std_error: float
    trials_used: int


@dataclass(frozen=True)
class DegreeStatistics:
    """Mean count of decodable transmitters, plus the decodable fraction."""

    count: EstimateWithError
    fraction: EstimateWithError


@dataclass(frozen=True, eq=False)
class InterferenceSamples:
    """Per-trial aggregate interference (without the power factor) and tagged fading."""

    interference: np.ndarray
    tagged_fading: np.ndarray


def trial_generator(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, trial, 0, 0]))


def _exponential(u):
    return -np.log1p(-np.maximum(u, _TINY))


def _trial_points(seed, trial, density, radius, unit_fading):
    rng = trial_generator(seed, trial)
    tagged = 1.0 if unit_fading else float(_exponential(rng.random()))
    if density == 0:
        empty = np.empty(0)
        return tagged, empty, empty, empty, empty
    limit = density * math.pi * radius * radius
    pieces = []
    level = 0.0
    while True:
        block = rng.random((4, CHUNK))
        cumulative = level + np.cumsum(_exponential(block[0]))
        inside = int(np.searchsorted(cumulative, limit, side="left"))
        pieces.append((cumulative[:inside], block[1:, :inside]))
        if inside < CHUNK:
            break
        level = cumulative[-1]
    cumulative = np.concatenate([p[0] for p in pieces])
    rest = np.concatenate([p[1] for p in pieces], axis=1)
    dist = np.sqrt(cumulative / (math.pi * density))
    angle = 2.0 * math.pi * rest[0]
    orient = 2.0 * math.pi * rest[1]
    fade = np.ones_like(dist) if unit_fading else _exponential(rest[2])
    return tagged, dist, angle, orient, fade


def sample_realization(config: SimulationConfig, tagged: LinkGeometry,
                       trial: int = 0) -> NetworkRealization:
    """Realization seen by trial ``trial`` of ``config``."""
    if tagged.distance >= config.radius:
        raise DomainError("tagged link must lie inside the simulation disk", "distance")
    h, dist, angle, orient, fade = _trial_points(
        config.seed, trial, config.params.density, config.radius, config.fading == "unit")
    return NetworkRealization(dist, angle, orient, fade, tagged, h, config.radius)


def _block_points(config, start, stop):
    unit = config.fading == "unit"
    tagged = np.empty(stop - start)
    offsets = np.zeros(stop - start + 1, dtype=np.int64)
    cols = [[], [], [], []]
    for i, trial in enumerate(range(start, stop)):
        h, *arrays = _trial_points(config.seed, trial, config.params.density, config.radius, unit)
        tagged[i] = h
        offsets[i + 1] = offsets[i] + len(arrays[0])
        for col, arr in zip(cols, arrays):
            col.append(arr)
    flat = [np.ascontiguousarray(np.concatenate(col)) if col else np.empty(0) for col in cols]
    return tagged, offsets, flat


def _pattern_args(config):
    p = config.params
    tx, rx = config.tx_pattern, config.receiver
    return (p.eta, p.epsilon, float(tx.d), float(tx.n), float(rx.d), float(rx.n))


def _interference_range(config, start, stop, backend=None):
    kern = kernels.get(backend)
    out_i, out_h = [], []
    for lo in range(start, stop, BLOCK):
        hi = min(lo + BLOCK, stop)
        tagged, offsets, flat = _block_points(config, lo, hi)
        out_i.append(kern.interference(offsets, *flat, *_pattern_args(config)))
        out_h.append(tagged)
    return np.concatenate(out_i), np.concatenate(out_h)


def _degree_range(config, start, stop, backend=None):
    kern = kernels.get(backend)
    p = config.params
    out_c, out_n = [], []
    for lo in range(start, stop, BLOCK):
        hi = min(lo + BLOCK, stop)
        _, offsets, flat = _block_points(config, lo, hi)
        out_c.append(kern.degree_counts(offsets, *flat, *_pattern_args(config),
                                        p.power, p.noise, p.gamma, p.threshold))
        out_n.append(np.diff(offsets))
    return np.concatenate(out_c), np.concatenate(out_n)


def resolve_workers(requested: int | None = None) -> int:
    if requested is not None:
        return requested
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise DomainError(f"{WORKERS_ENV} must be a positive integer", "workers") from None
        if value < 1:
            raise DomainError(f"{WORKERS_ENV} must be a positive integer", "workers")
        return value
    return os.cpu_count() or 1


def _partitioned(fn, config, backend=None):
    workers = min(resolve_workers(config.workers), config.trials)
    if workers == 1:
        return fn(config, 0, config.trials, backend)
    bounds = np.linspace(0, config.trials, workers + 1).astype(int)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(fn, [config] * workers, bounds[:-1].tolist(),
                              bounds[1:].tolist(), [backend] * workers))
    return tuple(np.concatenate(arrs) for arrs in zip(*parts))


def sample_interference(config: SimulationConfig, backend: str | None = None) -> InterferenceSamples:
    """Draw every trial of ``config`` and reduce each to its aggregate interference."""
    interference, tagged = _partitioned(_interference_range, config, backend)
    return InterferenceSamples(interference, tagged)


def _tagged_sinr(samples: InterferenceSamples, config: SimulationConfig, link: LinkGeometry):
    if link.distance >= config.radius:
        raise DomainError("tagged link must lie inside the simulation disk", "distance")
    p = config.params
    c = max(link.gain_product(config.tx_pattern, config.receiver), 0.0)
    g = float(path_loss(p, link.distance))
    signal = p.power * samples.tagged_fading * g * c
    with np.errstate(divide="ignore"):
        return signal / (p.noise + p.gamma * p.power * samples.interference)


def _mean_with_error(values, bernoulli=False):
    n = len(values)
    mean = float(np.mean(values))
    if bernoulli:
        se = math.sqrt(max(mean * (1.0 - mean), 0.0) / n)
    else:
        se = float(np.std(values)) / math.sqrt(n)
    return EstimateWithError(mean, se, n)


def connection_from_samples(samples: InterferenceSamples, config: SimulationConfig,
                            links) -> list[EstimateWithError]:
    """Connection-probability estimates for several tagged links on shared draws."""
    q = config.params.threshold
    return [_mean_with_error(_tagged_sinr(samples, config, link) >= q, bernoulli=True)
            for link in links]


def rate_from_samples(samples: InterferenceSamples, config: SimulationConfig,
                      links) -> list[EstimateWithError]:
    """Ergodic-rate estimates (nats) for several tagged links on shared draws."""
    return [_mean_with_error(np.log1p(_tagged_sinr(samples, config, link))) for link in links]


def estimate_connection_probability(config: SimulationConfig, tagged: LinkGeometry,
                                    backend: str | None = None) -> EstimateWithError:
    """Fraction of trials whose tagged-link SINR reaches the threshold."""
    _tagged_sinr_check(config, tagged)
    return connection_from_samples(sample_interference(config, backend), config, [tagged])[0]


def estimate_data_rate(config: SimulationConfig, tagged: LinkGeometry,
                       backend: str | None = None) -> EstimateWithError:
    """Sample mean of ``ln(1 + SINR)`` over trials."""
    _tagged_sinr_check(config, tagged)
    return rate_from_samples(sample_interference(config, backend), config, [tagged])[0]


def _tagged_sinr_check(config, tagged):
    if tagged.distance >= config.radius:
        raise DomainError("tagged link must lie inside the simulation disk", "distance")
    if tagged.distance == 0 and config.params.epsilon == 0:
        raise SingularInputError("zero distance with epsilon = 0 is singular", "distance")


def degree_statistics(config: SimulationConfig, backend: str | None = None) -> DegreeStatistics:
    """Count decodable transmitters per realization; no tagged link is added.

    Each transmitter in the disk is a candidate; its interference is the sum
    over all other transmitters.
    """
    counts, totals = _partitioned(_degree_range, config, backend)
    count = _mean_with_error(counts.astype(float))
    occupied = totals > 0
    if np.any(occupied):
        fraction = _mean_with_error(counts[occupied] / totals[occupied])
    else:
        fraction = EstimateWithError(0.0, 0.0, 0)
    return DegreeStatistics(count, fraction)


def estimate_mean_degree(config: SimulationConfig, backend: str | None = None) -> EstimateWithError:
    """Mean number of transmitters per realization the origin receiver can decode."""
    return degree_statistics(config, backend).count
