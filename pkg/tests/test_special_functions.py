import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given
from scipy.special import eval_genlaguerre

from freejacobi import special_functions as sf


def test_laguerre_low_degrees():
    assert sf.laguerre1(0, 7.3) == 1.0
    assert sf.laguerre1(1, 3.0) == -1.0  # 2 - x
    # L_2^1(x) = 3 - 3x + x^2/2, so L_2^1(2) = -1
    assert sf.laguerre1(2, 2.0) == pytest.approx(-1.0, abs=1e-14)
    # L_3^1(x) = 4 - 6x + 2x^2 - x^3/6
    for x in (0.0, 0.5, 1.7, 4.0):
        expected = 4 - 6 * x + 2 * x**2 - x**3 / 6
        assert sf.laguerre1(3, x) == pytest.approx(expected, rel=1e-13, abs=1e-13)


@given(st.integers(0, 40), st.floats(0.0, 120.0))
def test_laguerre_matches_scipy(n, x):
    ours = sf.laguerre1(n, x)
    ref = float(eval_genlaguerre(n, 1, x))
    assert ours == pytest.approx(ref, rel=1e-10, abs=1e-10 * max(1.0, abs(ref)))


def test_ubm_moment_basics():
    for t in (0.0, 0.3, 1.0, 2.5):
        assert sf.ubm_moment(1, t) == pytest.approx(math.exp(-t / 2), rel=1e-14)
    for n in range(1, 10):
        assert sf.ubm_moment(n, 0.0) == pytest.approx(1.0, rel=1e-13)
    # L_1^1(2) = 0
    assert sf.ubm_moment(2, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert sf.ubm_moment(0, 3.0) == 1.0
    assert sf.ubm_moment(-3, 2.0) == sf.ubm_moment(3, 2.0)


@given(st.integers(1, 12), st.floats(0.0, 4.0))
def test_ubm_moment_bounded_by_one(n, t):
    assert abs(sf.ubm_moment(n, t)) <= 1.0 + 1e-12


def test_s_closed_low_orders():
    # s_1 = 1, s_2 = 1 - 2t, s_3 = 1 - 6t + 6t^2
    for t in (0.0, 0.4, 1.0, 2.0):
        assert sf.s_closed_theta_half(1, t) == 1.0
        assert sf.s_closed_theta_half(2, t) == pytest.approx(1 - 2 * t, rel=1e-13, abs=1e-13)
        assert sf.s_closed_theta_half(3, t) == pytest.approx(
            1 - 6 * t + 6 * t**2, rel=1e-12, abs=1e-12
        )


def test_s_moments_closed_route():
    s = sf.s_moments(0.5, 1.0, 6)
    assert s[0] == 1.0
    assert s[1] == pytest.approx(-1.0)  # 1 - 2t at t=1


def test_s_moments_integration_matches_closed():
    s_int = sf.s_moments(0.5, 1.0, 12, h=2e-4, method="integrate")
    s_cl = sf.s_moments(0.5, 1.0, 12, method="closed")
    scale = np.maximum(1.0, np.abs(s_cl))
    assert np.max(np.abs(s_int - s_cl) / scale) < 1e-8


def test_scaled_traces_match_ubm_at_double_time():
    times, states = sf.s_trajectory(0.5, 2.0, 10, h=2e-4)
    for j in range(0, len(times), 1000):
        t = times[j]
        for n in range(1, 11):
            lhs = math.exp(-n * t) * states[j][n - 1]
            assert lhs == pytest.approx(sf.ubm_moment(n, 2 * t), abs=1e-10)


def test_unitarity_bound_on_scaled_traces():
    times, states = sf.s_trajectory(0.5, 4.0, 12, h=1e-3)
    for j in range(0, len(times), 200):
        for n in range(1, 13):
            assert abs(math.exp(-n * times[j]) * states[j][n - 1]) <= 1.0 + 1e-9


def test_s_system_general_weight_initial_value():
    # s_1(t) = 1 + (2 theta - 1)^2 (e^t - 1) is built into the rhs
    theta = 0.75
    times, states = sf.s_trajectory(theta, 1.0, 4, h=1e-3)
    c = (2 * theta - 1) ** 2
    assert states[-1][0] == pytest.approx(1 + c * (math.e - 1), rel=1e-10)
    assert np.all(states[0] == 1.0)


def test_s_system_degenerate_weight_inconsistency():
    """The stated inhomogeneous term is inconsistent as theta -> 1: it
    forces d/dt s_n -> 2 e^{nt} where the degenerate solution e^{nt}
    needs n e^{nt}.  Implemented as stated, so the deviation must show."""
    theta = 0.999
    t_end = 0.5
    _, states = sf.s_trajectory(theta, t_end, 4, h=1e-3)
    degenerate = math.exp(3 * t_end)  # s_3 would be e^{3t} if a -> identity
    assert abs(states[-1][2] - degenerate) > 0.1


def test_invalid_parameters():
    with pytest.raises(ValueError):
        sf.s_moments(0.0, 1.0, 4)
    with pytest.raises(ValueError):
        sf.s_moments(1.0, 1.0, 4)
    with pytest.raises(ValueError):
        sf.s_moments(0.75, 1.0, 4, method="closed")
    with pytest.raises(ValueError):
        sf.laguerre1(-1, 0.0)
