"""Closed-form and quadrature expressions for link and network metrics.

All functions take the receiver at the origin and follow the angle
conventions of :mod:`dirnet.model`. Rates are in nats per channel use.
"""
from __future__ import annotations

import functools
import math

import numpy as np

from .errors import DomainError, SingularInputError
from .model import AntennaPattern, LinkGeometry, SystemParams, gain, path_loss
from .specfun import (DEFAULT_QUADRATURE, QuadratureSpec, erfcx, gamma_fn,
                      hyp2f1, integrate_1d)

TWO_PI = 2.0 * math.pi


def _check_eta(eta):
    if not eta > 2:
        raise DomainError("eta must exceed 2", "eta")


def _check_degenerate(params: SystemParams):
    if params.gamma == 0 and params.noise == 0:
        raise DomainError("gamma = 0 together with noise = 0 leaves no impairment", "gamma")


@functools.lru_cache(maxsize=4096)
def wp(eta: float, d: float) -> float:
    """Angular gain integral: the integral of ``(1 + d cos t)**(2/eta)`` over a period.

    Evaluated through the Gauss hypergeometric function; at ``d = 1`` the
    gamma-function form is used. The value does not depend on the lobe count.
    """
    _check_eta(eta)
    if not 0 <= d <= 1:
        raise DomainError("d must lie in [0, 1]", "d")
    p = 2.0 / eta
    if d == 0:
        return TWO_PI
    if d == 1:
        return 2.0 ** p * eta * math.sqrt(math.pi) * gamma_fn(0.5 + p) / gamma_fn(p)
    return math.pi * ((1 - d) ** p * hyp2f1(0.5, -p, 1.0, 2 * d / (d - 1))
                      + (1 + d) ** p * hyp2f1(0.5, -p, 1.0, 2 * d / (d + 1)))


def wp_taylor(eta: float, d: float) -> float:
    """Small-directivity expansion of :func:`wp`, accurate to fourth order in ``d``."""
    _check_eta(eta)
    return TWO_PI - math.pi * (eta - 2) * d * d / (eta * eta)


def wp_large_eta(eta: float) -> float:
    """Large path-loss-exponent expansion of ``wp(eta, 1)``."""
    _check_eta(eta)
    return TWO_PI - TWO_PI * math.log(4.0) / eta


def _radial_constant(eta):
    return math.pi / (eta * math.sin(TWO_PI / eta))


def _periodic_integral(fn, pattern: AntennaPattern, quad: QuadratureSpec, vectorized=True):
    """Integral of ``fn`` over one period of ``pattern``'s gain angle.

    When the pattern has nulls the period is split there and each piece is
    mapped through a quintic smoothstep, which turns the algebraic endpoint
    behaviour of gain powers into smooth polynomial decay.
    """
    nulls = pattern.nulls()
    if not nulls:
        value, _ = integrate_1d(fn, 0.0, TWO_PI, quad, vectorized=vectorized)
        return value
    if not vectorized:
        scalar = fn

        def fn(x):
            return np.stack([np.asarray(scalar(float(v)), dtype=float) for v in x], axis=-1)
    edges = nulls + [nulls[0] + TWO_PI]
    total = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        width = right - left

        def mapped(u, left=left, width=width):
            step = u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
            jac = 30.0 * u * u * (1.0 - u) ** 2 * width
            return fn(left + width * step) * jac

        value, _ = integrate_1d(mapped, 0.0, 1.0, quad)
        total = total + value
    return total


def laplace_exponent(params: SystemParams, s: float, tx_pattern: AntennaPattern,
                     rx_pattern: AntennaPattern | None = None,
                     quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Exponent ``I`` with ``L(s / P) = exp(-(density / 2 pi) * I)``.

    For ``epsilon = 0`` the closed form is returned; otherwise the double
    integral over interferer position angle and orientation is computed by
    iterated quadrature.
    """
    rx_pattern = tx_pattern if rx_pattern is None else rx_pattern
    eta = params.eta
    _check_eta(eta)
    if s < 0:
        raise DomainError("Laplace argument must be non-negative", "s")
    if s == 0:
        return 0.0
    k = _radial_constant(eta)
    if params.epsilon == 0:
        return k * s ** (2.0 / eta) * wp(eta, tx_pattern.d) * wp(eta, rx_pattern.d)
    return float(_offset_exponents(params, np.array([s]), tx_pattern, rx_pattern, quad)[0])


def _offset_exponents(params, s, tx, rx, quad):
    """Laplace exponents for an array of arguments ``s`` when ``epsilon > 0``."""
    eps, p = params.epsilon, 2.0 / params.eta
    values = _angular_double_integral(lambda sigma: sigma * (eps + sigma) ** (p - 1.0),
                                      s, tx, rx, quad)
    return _radial_constant(params.eta) * values


def _angular_double_integral(fn, s, tx, rx, quad):
    """Integral of ``fn(s G_tx(psi) G_rx(theta))`` over two full periods.

    ``s`` is a 1-D array; one integral per entry comes back, all computed on
    a shared adaptive partition. The orientation integral is taken over
    ``psi = theta + pi - phi``, which spans a full period for every fixed
    ``theta``.
    """
    s = np.asarray(s, dtype=float)[:, None]
    inner_quad = QuadratureSpec(quad.abs_tol * 1e-2, quad.rel_tol * 1e-2,
                                quad.max_refinements)

    def over_psi(theta):
        rx_gain = float(gain(rx, theta))
        if rx_gain <= 0.0:
            return np.zeros(len(s))
        return _periodic_integral(lambda psi: fn(s * rx_gain * np.maximum(gain(tx, psi), 0.0)),
                                  tx, inner_quad)

    return _periodic_integral(over_psi, rx, quad, vectorized=False)


def _link_gain(link: LinkGeometry, tx: AntennaPattern, rx: AntennaPattern) -> float:
    return max(link.gain_product(tx, rx), 0.0)


def connection_probability(params: SystemParams, link: LinkGeometry,
                           tx_pattern: AntennaPattern,
                           rx_pattern: AntennaPattern | None = None,
                           quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Probability that the tagged link's SINR reaches the threshold.

    Uses the closed form when ``epsilon = 0`` and composes the noise factor
    with the numerical Laplace transform otherwise. A link whose gain product
    vanishes has probability exactly zero.
    """
    rx_pattern = tx_pattern if rx_pattern is None else rx_pattern
    _check_eta(params.eta)
    _check_degenerate(params)
    c = _link_gain(link, tx_pattern, rx_pattern)
    if c == 0.0:
        return 0.0
    t = link.distance
    eta = params.eta
    q = params.threshold
    if params.epsilon == 0:
        if t == 0:
            return 1.0
        noise_term = q * params.noise * t ** eta / (params.power * c)
        interference_term = (params.density * t * t * wp(eta, tx_pattern.d) * wp(eta, rx_pattern.d)
                             / (2 * eta * math.sin(TWO_PI / eta))
                             * (q * params.gamma / c) ** (2.0 / eta))
        return math.exp(-noise_term - interference_term)
    g = float(path_loss(params, t))
    noise_term = q * params.noise / (params.power * g * c)
    s = q * params.gamma / (g * c)
    exponent = params.density / TWO_PI * laplace_exponent(params, s, tx_pattern, rx_pattern, quad)
    return math.exp(-noise_term - exponent)


def _decay_end(f, abs_tol):
    """Smallest power-of-two multiple of 1 where the decreasing ``f`` is below ``abs_tol``."""
    x = 1.0
    while f(np.array([x]))[0] > abs_tol:
        x *= 2.0
        if x > 1e4:
            break
    return x


def data_rate(params: SystemParams, link: LinkGeometry, tx_pattern: AntennaPattern,
              rx_pattern: AntennaPattern | None = None,
              quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Ergodic rate ``E[ln(1 + SINR)]`` of the tagged link in nats.

    Integrates the complementary distribution of the rate,
    ``P[ln(1 + SINR) > x]``, over ``x`` with the signal gains multiplying the
    received power.
    """
    rx_pattern = tx_pattern if rx_pattern is None else rx_pattern
    _check_eta(params.eta)
    _check_degenerate(params)
    c = _link_gain(link, tx_pattern, rx_pattern)
    if c == 0.0:
        return 0.0
    g = float(path_loss(params, link.distance))
    eta = params.eta
    noise_coef = params.noise / (params.power * g * c)
    interf_coef = params.gamma / (g * c)
    scale = params.density / TWO_PI

    if params.epsilon == 0:
        closed = (scale * _radial_constant(eta) * wp(eta, tx_pattern.d) * wp(eta, rx_pattern.d)
                  * interf_coef ** (2.0 / eta))

        def ccdf(x):
            qhat = np.expm1(x)
            return np.exp(-qhat * noise_coef - closed * qhat ** (2.0 / eta))
    else:
        def ccdf(x):
            qhat = np.expm1(np.atleast_1d(x))
            expo = _offset_exponents(params, interf_coef * qhat, tx_pattern, rx_pattern, quad)
            return np.exp(-qhat * noise_coef - scale * expo)

    upper = _decay_end(ccdf, quad.abs_tol)
    value, _ = integrate_1d(ccdf, 0.0, upper, quad)
    return value


def degree_z(params: SystemParams, d: float, d_rx: float | None = None) -> float:
    """Argument of the scaled error function in the closed-form mean degree."""
    d_rx = d if d_rx is None else d_rx
    if params.noise == 0:
        return math.inf
    return (math.sqrt(params.gamma * params.power / params.noise)
            * wp(4.0, d) * wp(4.0, d_rx) * params.density / 16.0)


def _check_degree_closed_form(params):
    if params.eta != 4:
        raise DomainError("the closed-form mean degree requires eta = 4", "eta")
    if params.epsilon != 0:
        raise DomainError("the closed-form mean degree requires epsilon = 0", "epsilon")
    if params.gamma == 0:
        raise DomainError("the closed-form mean degree requires gamma > 0", "gamma")


def mean_degree_limit(params: SystemParams) -> float:
    """High-density limit of the mean degree, independent of directivity."""
    return 2.0 / (math.pi * math.sqrt(params.threshold * params.gamma))


def mean_degree_closed_form(params: SystemParams, d: float, d_rx: float | None = None) -> float:
    """Mean number of decodable transmitters for ``eta = 4`` and ``epsilon = 0``.

    ``d`` is the transmitter directivity; the receiver uses ``d_rx`` and
    defaults to the same antenna. The lobe count does not enter.
    """
    _check_degree_closed_form(params)
    if params.density == 0:
        return 0.0
    z = degree_z(params, d, d_rx)
    if math.isinf(z):
        return mean_degree_limit(params)
    return 2.0 / math.sqrt(math.pi * params.threshold * params.gamma) * z * erfcx(z)


def mean_degree_large_density(params: SystemParams, d: float, d_rx: float | None = None) -> float:
    """Two-term large-density expansion of :func:`mean_degree_closed_form`."""
    _check_degree_closed_form(params)
    d_rx = d if d_rx is None else d_rx
    w2 = (wp(4.0, d) * wp(4.0, d_rx)) ** 2
    return mean_degree_limit(params) - 256.0 * params.noise / (
        math.pi * math.sqrt(params.threshold) * params.power * w2
        * params.gamma ** 1.5 * params.density ** 2)


def mean_degree_numeric(params: SystemParams, tx_pattern: AntennaPattern,
                        rx_pattern: AntennaPattern | None = None,
                        quad: QuadratureSpec = QuadratureSpec(1e-12, 1e-9, 4000)) -> float:
    """Mean degree by iterated quadrature over distance, position angle and orientation.

    Valid for any ``eta > 2`` with ``epsilon = 0``. The orientation integral
    is carried out over the transmitter gain angle, which sweeps a full period
    as the orientation does.
    """
    rx_pattern = tx_pattern if rx_pattern is None else rx_pattern
    eta = params.eta
    _check_eta(eta)
    if params.epsilon != 0:
        raise DomainError("mean_degree_numeric requires epsilon = 0", "epsilon")
    _check_degenerate(params)
    if params.density == 0:
        return 0.0
    q = params.threshold
    interf = (params.density * wp(eta, tx_pattern.d) * wp(eta, rx_pattern.d)
              / (2 * eta * math.sin(TWO_PI / eta)) * (q * params.gamma) ** (2.0 / eta))
    noise = q * params.noise / params.power
    radial_quad = QuadratureSpec(quad.abs_tol * 1e-3, quad.rel_tol * 1e-2, quad.max_refinements)
    angle_quad = QuadratureSpec(quad.abs_tol * 1e-1, quad.rel_tol * 1e-1, quad.max_refinements)

    def radial(c):
        # integral of t * H(t) dt with H = exp(-a t**eta - b t**2), one per gain product
        c = np.atleast_1d(np.asarray(c, dtype=float))
        out = np.zeros_like(c)
        live = c > 0.0
        if not np.any(live):
            return out
        cl = c[live]
        a = noise / cl
        b = interf * cl ** (-2.0 / eta)
        length = 1.0 / np.maximum(np.maximum(a ** (1.0 / eta), np.sqrt(b)), 1e-300)
        a_s = (a * length ** eta)[:, None]
        b_s = (b * length ** 2)[:, None]

        def integrand(u):
            return u * np.exp(-a_s * u ** eta - b_s * u * u)

        value, _ = integrate_1d(integrand, 0.0, math.inf, radial_quad)
        out[live] = value * length * length
        return out

    def over_psi(theta):
        rx_gain = float(gain(rx_pattern, theta))
        if rx_gain <= 0.0:
            return 0.0
        return _periodic_integral(
            lambda psi: radial(rx_gain * np.maximum(gain(tx_pattern, psi), 0.0)),
            tx_pattern, angle_quad)

    value = _periodic_integral(over_psi, rx_pattern, quad, vectorized=False)
    return params.density / TWO_PI * value
