import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dirnet import (AntennaPattern, DomainError, LinkGeometry, NetworkRealization,
                    SingularInputError, SystemParams, gain, path_loss, sinr)


@pytest.mark.parametrize("field,value,message", [
    ("eta", 2.0, "eta must exceed 2"),
    ("gamma", 1.5, "gamma"),
    ("gamma", -0.1, "gamma"),
    ("power", 0.0, "power"),
    ("noise", -1.0, "noise"),
    ("density", -1.0, "density"),
    ("epsilon", -1e-3, "epsilon"),
    ("threshold", 0.0, "threshold"),
    ("eta", math.nan, "eta"),
])
def test_params_validation_names_field(field, value, message):
    with pytest.raises(DomainError, match=message) as info:
        SystemParams(**{field: value})
    assert info.value.field == field


def test_params_replace():
    p = SystemParams().replace(eta=3.0)
    assert p.eta == 3.0 and p.gamma == 0.3


@pytest.mark.parametrize("d,n", [(-0.1, 1), (1.1, 1), (0.5, 0), (0.5, 1.5), (0.5, True)])
def test_pattern_validation(d, n):
    with pytest.raises(DomainError):
        AntennaPattern(d, n)


def test_gain_values():
    p = AntennaPattern(1.0, 2)
    assert gain(p, 0.0) == 2.0
    assert gain(p, math.pi / 2) == pytest.approx(0.0, abs=1e-15)
    assert np.allclose(gain(p, [0.0, math.pi]), [2.0, 2.0])


def test_nulls_only_for_full_directivity():
    assert AntennaPattern(0.9, 3).nulls() == []
    nulls = AntennaPattern(1.0, 3).nulls()
    assert len(nulls) == 3
    assert np.allclose(gain(AntennaPattern(1.0, 3), nulls), 0.0, atol=1e-15)


@given(d=st.floats(0, 1), n=st.integers(1, 8), angle=st.floats(-100, 100))
def test_gain_bounds_and_period(d, n, angle):
    p = AntennaPattern(d, n)
    g = float(gain(p, angle))
    assert -1e-12 <= g <= 2.0 + 1e-12
    assert float(gain(p, angle + 2 * math.pi / n)) == pytest.approx(g, abs=1e-9)


def test_path_loss():
    p = SystemParams(eta=4.0, epsilon=0.5)
    assert path_loss(p, 1.0) == pytest.approx(1 / 1.5)
    assert path_loss(p, 0.0) == pytest.approx(2.0)
    with pytest.raises(SingularInputError):
        path_loss(SystemParams(), 0.0)
    with pytest.raises(DomainError):
        path_loss(SystemParams(), -1.0)


def test_link_angles():
    link = LinkGeometry(0.4, angle=0.3, orientation=2.0)
    assert link.tx_angle == pytest.approx(0.3 + math.pi - 2.0)
    aligned = LinkGeometry(0.4)
    assert aligned.gain_product(AntennaPattern(1.0, 1), AntennaPattern(1.0, 1)) == 4.0


def test_sinr_by_hand():
    params = SystemParams(power=2.0, noise=0.5, gamma=0.25, eta=4.0)
    iso = AntennaPattern()
    real = NetworkRealization(
        distance=np.array([1.0, 2.0]), angle=np.array([0.0, 1.0]),
        orientation=np.array([0.0, 0.0]), fading=np.array([1.0, 3.0]),
        tagged=LinkGeometry(0.5), tagged_fading=2.0)
    signal = 2.0 * 2.0 * 0.5 ** -4
    interference = 2.0 * (1.0 + 3.0 / 16.0)
    assert sinr(real, params, iso) == pytest.approx(signal / (0.5 + 0.25 * interference))


def test_sinr_directional_by_hand():
    params = SystemParams(noise=1.0, gamma=1.0)
    pat = AntennaPattern(1.0, 1)
    real = NetworkRealization(
        distance=np.array([1.0]), angle=np.array([math.pi / 2]),
        orientation=np.array([math.pi]), fading=np.array([1.0]),
        tagged=LinkGeometry(1.0), tagged_fading=1.0)
    # interferer: rx gain 1 + cos(pi/2) = 1, tx gain 1 + cos(pi/2) = 1
    assert sinr(real, params, pat) == pytest.approx(4.0 / (1.0 + 1.0))


def test_realization_validation():
    with pytest.raises(DomainError):
        NetworkRealization(np.array([1.0]), np.array([]), np.array([]), np.array([]),
                           LinkGeometry(0.4), 1.0)
    with pytest.raises(DomainError):
        NetworkRealization(np.array([9.0]), np.zeros(1), np.zeros(1), np.ones(1),
                           LinkGeometry(0.4), 1.0, radius=8.0)


def test_gain_examples():
    assert gain(AntennaPattern(0.0, 3), 1.234) == 1.0
    assert gain(AntennaPattern(1.0, 1), 0.0) == 2.0
    assert gain(AntennaPattern(1.0, 1), math.pi) == 0.0


def test_path_loss_examples():
    assert path_loss(SystemParams(), 1.0) == 1.0
    assert path_loss(SystemParams(epsilon=1.0), 0.0) == 1.0
    assert path_loss(SystemParams(), 0.4) == pytest.approx(39.0625, rel=1e-15)


@pytest.mark.parametrize("d", [0.0, 0.3, 1.0])
@pytest.mark.parametrize("n", [1, 2, 5])
def test_gain_normalized(d, n):
    from dirnet.specfun import integrate_1d
    value, _ = integrate_1d(lambda x: gain(AntennaPattern(d, n), x), 0.0, 2 * math.pi)
    assert abs(value - 2 * math.pi) <= 1e-10


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_gain_has_n_maxima(n):
    theta = np.linspace(0, 2 * math.pi, 720, endpoint=False) + 1e-3
    g = gain(AntennaPattern(0.4, n), theta)
    assert np.sum((g > np.roll(g, 1)) & (g > np.roll(g, -1))) == n


def _single(h_tagged=1.0, h_k=1.0, k=True):
    arr = np.array([1.0]) if k else np.empty(0)
    return NetworkRealization(arr, np.zeros(len(arr)), np.full(len(arr), math.pi),
                              np.full(len(arr), h_k), LinkGeometry(1.0), h_tagged)


def test_sinr_examples():
    iso = AntennaPattern()
    assert sinr(_single(k=False), SystemParams(), iso) == 1.0
    assert sinr(_single(), SystemParams(gamma=0.0), iso) == 1.0
    assert sinr(_single(), SystemParams(gamma=1.0), iso) == 0.5


@given(g1=st.floats(0, 1), g2=st.floats(0, 1), h=st.floats(0.01, 10), hk=st.floats(0.01, 10))
def test_sinr_monotonicity(g1, g2, h, hk):
    iso = AntennaPattern(0.5, 2)
    lo, hi = sorted((g1, g2))
    assert sinr(_single(h, hk), SystemParams(gamma=hi), iso) <= sinr(_single(h, hk), SystemParams(gamma=lo), iso)
    assert sinr(_single(h, hk * 2), SystemParams(), iso) <= sinr(_single(h, hk), SystemParams(), iso)
    assert sinr(_single(h * 2, hk), SystemParams(), iso) >= sinr(_single(h, hk), SystemParams(), iso)
    assert sinr(_single(h, k=False), SystemParams(gamma=hi), iso) == sinr(_single(h, k=False), SystemParams(gamma=lo), iso)
