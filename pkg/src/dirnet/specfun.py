"""Special functions and adaptive quadrature.

Everything here is deterministic and table-free. ``erfc`` and ``gamma_fn``
delegate to the C library through :mod:`math`; the Gauss hypergeometric
function, the scaled complementary error function and the digamma function
are evaluated from series, transformations and continued fractions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
import heapq

import numpy as np

from .errors import DomainError, QuadratureError

_EPS = 2.0 ** -52

# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------


def gamma_fn(x: float) -> float:
    """Gamma function for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x!r}", "x")
    return math.gamma(x)


def _rgamma(x: float) -> float:
    """Reciprocal gamma, zero at the poles."""
    if x <= 0 and x == math.floor(x):
        return 0.0
    return 1.0 / math.gamma(x)


def digamma(x: float) -> float:
    """Logarithmic derivative of the gamma function."""
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"digamma has a pole at {x!r}", "x")
    if x < 0.5:
        # reflection
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = inv2 * (1 / 12 - inv2 * (1 / 120 - inv2 * (1 / 252 - inv2 * (
        1 / 240 - inv2 * (1 / 132 - inv2 * (691 / 32760 - inv2 / 12))))))
    return acc + math.log(x) - 0.5 / x - tail


# ---------------------------------------------------------------------------
# Error functions
# ---------------------------------------------------------------------------


def erfc(x: float) -> float:
    """Complementary error function."""
    return math.erfc(x)


def erfcx(x: float) -> float:
    """Scaled complementary error function ``exp(x**2) * erfc(x)``.

    For large positive arguments a continued fraction avoids the overflow of
    ``exp(x**2)`` and the underflow of ``erfc``.
    """
    if x < 4.0:
        return math.exp(x * x) * math.erfc(x)
    # erfcx(x) = (1/sqrt(pi)) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    # evaluated with the modified Lentz algorithm
    tiny = 1e-300
    f = x
    c = x
    d = 0.0
    k = 1
    while True:
        a = 0.5 * k
        d = x + a * d
        d = tiny if d == 0 else d
        c = x + a / c
        c = tiny if c == 0 else c
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            break
        k += 1
        if k > 500:
            break
    return 1.0 / (math.sqrt(math.pi) * f)


# ---------------------------------------------------------------------------
# Gauss hypergeometric function
# ---------------------------------------------------------------------------

# Below this distance from z = 1 the power series is replaced by the 1 - z
# connection formulas.
_NEAR_ONE = 0.005
# Half-width of the parameter window around an integer c - a - b inside which
# the non-logarithmic connection formula is replaced by interpolation.
_LOG_WINDOW = 5e-4
_LOG_STEP = 1e-3
_MAX_TERMS = 200_000


def _is_nonpositive_int(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def _series(a, b, c, z):
    """Direct Maclaurin series, stopping once the geometric tail is negligible."""
    term = 1.0
    total = 1.0
    scale = 1.0 / max(1.0 - abs(z), _NEAR_ONE)
    k = 0
    while True:
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        k += 1
        total += term
        if term == 0.0:
            return total
        if abs(term) * scale <= 0.5 * _EPS * abs(total) and k > 2:
            return total
        if k > _MAX_TERMS:
            raise DomainError("hypergeometric series failed to converge", "z")


def _gauss_sum(a, b, c):
    m = c - a - b
    if m <= 0:
        raise DomainError("2F1 at z = 1 diverges unless c - a - b > 0", "z")
    return math.gamma(c) * math.gamma(m) * _rgamma(c - a) * _rgamma(c - b)


def _connection_generic(a, b, c, x):
    """``2F1(a,b;c;1-x)`` through the 1 - z formula, c - a - b not an integer."""
    m = c - a - b
    s1 = 1.0
    term = 1.0
    k = 0
    while True:
        term *= (a + k) * (b + k) / ((1 - m + k) * (k + 1)) * x
        k += 1
        s1 += term
        if abs(term) <= _EPS * abs(s1) * 0.25 or term == 0.0:
            break
    s2 = 1.0
    term = 1.0
    k = 0
    while True:
        term *= (c - a + k) * (c - b + k) / ((1 + m + k) * (k + 1)) * x
        k += 1
        s2 += term
        if abs(term) <= _EPS * abs(s2) * 0.25 or term == 0.0:
            break
    first = math.gamma(c) * math.gamma(m) * _rgamma(c - a) * _rgamma(c - b)
    second = math.gamma(c) * math.gamma(-m) * _rgamma(a) * _rgamma(b)
    return first * s1 + second * x ** m * s2


def _connection_log(a, b, c, x, m):
    """``2F1(a,b;c;1-x)`` for integer ``m = c - a - b`` (logarithmic case)."""
    lnx = math.log(x)
    if m >= 0:
        head = 0.0
        if m > 0:
            coef = math.gamma(m) * math.gamma(c) * _rgamma(a + m) * _rgamma(b + m)
            term = 1.0
            for n in range(m):
                head += term
                if n + 1 < m:
                    term *= (a + n) * (b + n) / ((n + 1) * (1 - m + n)) * x
            head *= coef
        pref = -math.gamma(c) * _rgamma(a) * _rgamma(b) * (-x) ** m
        poch = 1.0 / math.factorial(m)
        total = 0.0
        n = 0
        while True:
            bracket = (lnx - digamma(n + 1) - digamma(n + m + 1)
                       + digamma(a + n + m) + digamma(b + n + m))
            piece = poch * bracket
            total += piece
            poch *= (a + m + n) * (b + m + n) / ((n + 1) * (n + m + 1)) * x
            n += 1
            if abs(piece) <= _EPS * 0.25 * abs(total) and n > 1 or poch == 0.0:
                break
        return head + pref * total
    p = -m
    coef = math.gamma(p) * math.gamma(c) * _rgamma(a) * _rgamma(b) * x ** (-p)
    head = 0.0
    term = 1.0
    for n in range(p):
        head += term
        if n + 1 < p:
            term *= (a - p + n) * (b - p + n) / ((n + 1) * (1 - p + n)) * x
    head *= coef
    pref = -((-1) ** p) * math.gamma(c) * _rgamma(a - p) * _rgamma(b - p)
    poch = 1.0 / math.factorial(p)
    total = 0.0
    n = 0
    while True:
        bracket = (lnx - digamma(n + 1) - digamma(n + p + 1)
                   + digamma(a + n) + digamma(b + n))
        piece = poch * bracket
        total += piece
        poch *= (a + n) * (b + n) / ((n + 1) * (n + p + 1)) * x
        n += 1
        if abs(piece) <= _EPS * 0.25 * abs(total) and n > 1 or poch == 0.0:
            break
    return head + pref * total


def _near_one(a, b, c, x):
    m = c - a - b
    nearest = round(m)
    delta = m - nearest
    if abs(delta) > _LOG_WINDOW:
        return _connection_generic(a, b, c, x)
    # Quartic interpolation in b through the exact logarithmic case and four
    # nearby non-degenerate parameter values, where cancellation is harmless.
    b0 = c - a - nearest
    nodes = [b0 + k * _LOG_STEP for k in (-2, -1, 0, 1, 2)]
    values = [
        _connection_log(a, b0, c, x, int(nearest)) if k == 2
        else _connection_generic(a, bk, c, x)
        for k, bk in enumerate(nodes)
    ]
    result = 0.0
    for i, (bi, fi) in enumerate(zip(nodes, values)):
        weight = 1.0
        for j, bj in enumerate(nodes):
            if j != i:
                weight *= (b - bj) / (bi - bj)
        result += weight * fi
    return result


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function ``2F1(a, b; c; z)`` for real ``z <= 1``.

    Strategy: power series for ``|z| <= 1/2``; Pfaff transformation for
    ``z < -1/2``; power series on ``(1/2, 1)`` until within ``0.005`` of one,
    then the ``1 - z`` connection formula (with the logarithmic form when
    ``c - a - b`` is an integer); Gauss summation at ``z = 1``.
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    if not all(math.isfinite(v) for v in (a, b, c, z)):
        raise DomainError("hyp2f1 arguments must be finite", "z")
    if _is_nonpositive_int(c):
        raise DomainError("c must not be a non-positive integer", "c")
    if z > 1:
        raise DomainError(f"hyp2f1 supports z <= 1 only, got {z!r}", "z")
    if z == 0 or a == 0 or b == 0:
        return 1.0
    if _is_nonpositive_int(a) or _is_nonpositive_int(b):
        return _polynomial(a, b, c, z)
    if z == 1:
        return _gauss_sum(a, b, c)
    if abs(z) <= 0.5:
        return _series(a, b, c, z)
    if z < -0.5:
        w = z / (z - 1.0)
        # Pfaff: keep the variant whose transformed function is finite at w = 1
        if a - b >= 0:
            return (1.0 - z) ** (-b) * hyp2f1(c - a, b, c, w)
        return (1.0 - z) ** (-a) * hyp2f1(a, c - b, c, w)
    x = 1.0 - z
    if x >= _NEAR_ONE:
        return _series(a, b, c, z)
    return _near_one(a, b, c, x)


def _polynomial(a, b, c, z):
    degree = int(-a) if _is_nonpositive_int(a) else int(-b)
    total = term = 1.0
    for k in range(degree):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
    return total


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_refinements: int = 2000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive", "abs_tol")
        if self.max_refinements < 1:
            raise DomainError("max_refinements must be at least 1", "max_refinements")


DEFAULT_QUADRATURE = QuadratureSpec()

# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1]
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS = np.zeros(15)
_GAUSS[1:14:2] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk15(f, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    fx = np.asarray(f(mid + half * _NODES), dtype=float)
    kronrod = half * (fx @ _KRONROD)
    gauss = half * (fx @ _GAUSS)
    return kronrod, np.abs(kronrod - gauss)


def _vectorize(f):
    def wrapped(x):
        return np.stack([np.asarray(f(float(v)), dtype=float) for v in x], axis=-1)
    return wrapped


def integrate_1d(f, lo: float, hi: float, spec: QuadratureSpec = DEFAULT_QUADRATURE,
                 points=(), vectorized: bool = True):
    """Globally adaptive Gauss-Kronrod (7/15) quadrature.

    ``f`` receives a 1-D numpy array of abscissae unless ``vectorized`` is
    False. It may return an array of shape ``(..., len(x))`` to integrate
    several functions on a shared partition; value and error then come back
    as arrays and every component must meet the tolerance.

    ``hi`` may be ``math.inf``; the half-line is mapped onto ``[0, 1)`` by
    ``u = (x - lo) / (1 + x - lo)``. ``points`` are interior breakpoints
    (kinks, integrable singularities) that seed the subdivision.

    Returns ``(value, error_estimate)``; the estimate is the summed
    Kronrod-minus-Gauss difference over the final partition.
    """
    if not vectorized:
        f = _vectorize(f)
    if not (math.isfinite(lo) and (math.isfinite(hi) or hi == math.inf)):
        raise DomainError("integration limits must be finite or +inf", "hi")
    if hi < lo:
        value, err = integrate_1d(f, hi, lo, spec, points)
        return -value, err
    if hi == math.inf:
        g = f

        def f(u, _g=g, _lo=lo):
            one_minus = 1.0 - u
            x = _lo + u / one_minus
            vals = np.asarray(_g(x), dtype=float)
            with np.errstate(over="ignore", invalid="ignore"):
                out = vals / (one_minus * one_minus)
            return np.where(vals == 0.0, 0.0, out)

        points = [(p - lo) / (1.0 + p - lo) for p in points if p > lo]
        lo, hi = 0.0, 1.0
    if hi == lo:
        shape = np.shape(f(np.array([lo])))[:-1]
        zero = np.zeros(shape) if shape else 0.0
        return zero, zero
    edges = sorted({lo, hi, *[p for p in points if lo < p < hi]})
    heap = []
    total = 0.0
    error = 0.0
    for n, (left, right) in enumerate(zip(edges[:-1], edges[1:])):
        val, err = _gk15(f, left, right)
        total = total + val
        error = error + err
        heapq.heappush(heap, (-float(np.max(err)), n, left, right, val, err))
    counter = len(heap)
    refinements = 0
    while np.any(error > np.maximum(spec.abs_tol, spec.rel_tol * np.abs(total))):
        if refinements >= spec.max_refinements:
            raise QuadratureError(
                f"quadrature did not converge: estimate {total!r}, error {error!r}",
                total, error)
        _, _, left, right, val, err = heapq.heappop(heap)
        mid = 0.5 * (left + right)
        if not left < mid < right:
            raise QuadratureError("interval became too small to bisect", total, error)
        v1, e1 = _gk15(f, left, mid)
        v2, e2 = _gk15(f, mid, right)
        total = total + v1 + v2 - val
        error = error + e1 + e2 - err
        heapq.heappush(heap, (-float(np.max(e1)), counter, left, mid, v1, e1))
        heapq.heappush(heap, (-float(np.max(e2)), counter + 1, mid, right, v2, e2))
        counter += 2
        refinements += 1
    # resum in a fixed order to shed the drift of the running updates
    items = sorted(heap, key=lambda item: item[2])
    if np.ndim(total) == 0:
        return (math.fsum(float(item[4]) for item in items),
                math.fsum(float(item[5]) for item in items))
    return (np.sum([item[4] for item in items], axis=0),
            np.sum([item[5] for item in items], axis=0))
