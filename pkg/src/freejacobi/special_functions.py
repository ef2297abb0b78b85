"""Laguerre polynomials of index 1, moments of the free unitary Brownian
motion, and the coupled trace system for Bernoulli-weighted conjugations.

The general-weight trace system (``theta != 1/2``) is integrated exactly as
its source states it, but its consistency is an open question: the
degenerate limit theta -> 1 of the stated inhomogeneous term is
inconsistent with the trivial solution it should produce.  Callers are
expected to treat those outputs as experimental and compare them against
the matrix Monte Carlo oracle; see ``oracle`` and the general-theta verify
suite.
"""

from __future__ import annotations

import math

import numpy as np

DEFAULT_STEP = 1e-3


def laguerre1(n: int, x: float) -> float:
    """L_n^1(x) by the forward three-term recurrence.

    (k+1) L_{k+1}^1 = (2k + 2 - x) L_k^1 - (k+1) L_{k-1}^1, seeded with
    L_0^1 = 1 and L_1^1 = 2 - x.  Forward recurrence is numerically
    adequate in double precision for the degree/argument ranges arising
    here (x up to a few hundred, n up to a few dozen).
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n == 0:
        return 1.0
    prev = 1.0
    cur = 2.0 - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 2 - x) * cur - (k + 1) * prev) / (k + 1)
    return cur


def ubm_moment(n: int, t: float) -> float:
    """n-th moment h_n(t) = e^{-nt/2} L_{n-1}^1(nt) / n of the free
    unitary Brownian motion; h_0 = 1 and h_{-n} = h_n by unitarity."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    n = abs(n)
    if n == 0:
        return 1.0
    return math.exp(-n * t / 2.0) * laguerre1(n - 1, n * t) / n


def ubm_moment_vector(t: float, order: int) -> np.ndarray:
    """(h_1(t), ..., h_order(t)); every entry lies in [-1, 1]."""
    return np.array([ubm_moment(n, t) for n in range(1, order + 1)])


def s_closed_theta_half(n: int, t: float) -> float:
    """Closed form of the symmetric-weight trace system: L_{n-1}^1(2nt)/n."""
    return laguerre1(n - 1, 2.0 * n * t) / n


def s_initial(order: int) -> np.ndarray:
    """s_n(0) = 1 for every n (the weight squares to the identity)."""
    return np.ones(order)


def s_system_rhs(t: float, s: np.ndarray, theta: float) -> np.ndarray:
    """Right-hand side of the trace system, component n stored at s[n-1].

    d/dt s_1 = (2 theta - 1)^2 e^t  (the stated closed form for s_1), and
    for n >= 2
    d/dt s_n = -n sum_{k=1}^{n-1} s_{n-k} s_k
               + e^{nt} [2n (2 theta - 1) + (n-1)(n-2)(2 theta - 1)^2].
    """
    order = s.size
    c = 2.0 * theta - 1.0
    out = np.empty(order)
    out[0] = c * c * math.exp(t)
    if order >= 2:
        conv = np.convolve(s, s)
        n = np.arange(2, order + 1)
        out[1:] = -n * conv[: order - 1]
        if c != 0.0:
            out[1:] += np.exp(n * t) * (2 * n * c + (n - 1) * (n - 2) * c * c)
    return out


def _rk4_time_dependent(rhs, y0: np.ndarray, t0: float, t_end: float, h: float):
    """Classical fixed-step RK4 for dy/dt = rhs(t, y); returns (times, states)."""
    if h <= 0:
        raise ValueError("step must be positive")
    n_steps = max(0, int(round((t_end - t0) / h)))
    times = [t0]
    states = [y0.copy()]
    t, y = t0, y0.copy()
    for _ in range(n_steps):
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + (h / 2) * k1)
        k3 = rhs(t + h / 2, y + (h / 2) * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
        times.append(t)
        states.append(y.copy())
    # final partial step when t_end is not an exact multiple of h
    rem = t_end - t
    if rem > 1e-12 * max(1.0, abs(t_end)):
        k1 = rhs(t, y)
        k2 = rhs(t + rem / 2, y + (rem / 2) * k1)
        k3 = rhs(t + rem / 2, y + (rem / 2) * k2)
        k4 = rhs(t + rem, y + rem * k3)
        y = y + (rem / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        times.append(t_end)
        states.append(y.copy())
    return np.array(times), np.array(states)


def s_trajectory(
    theta: float,
    t_end: float,
    order: int,
    h: float = DEFAULT_STEP,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate the trace system from t = 0; states[j, n-1] holds s_n."""
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    if order < 1:
        raise ValueError("order must be >= 1")
    rhs = lambda t, y: s_system_rhs(t, y, theta)
    return _rk4_time_dependent(rhs, s_initial(order), 0.0, t_end, h)


def s_moments(
    theta: float,
    t_end: float,
    order: int,
    h: float = DEFAULT_STEP,
    method: str = "auto",
) -> np.ndarray:
    """Vector (s_1, ..., s_order) at time t_end.

    ``method='auto'`` returns the Laguerre closed form at theta = 1/2 and
    integrates the stated system otherwise; ``'integrate'`` forces the RK4
    route (used to validate the closed form), ``'closed'`` forces the
    closed form and raises away from theta = 1/2.
    """
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    if method not in ("auto", "integrate", "closed"):
        raise ValueError(f"unknown method {method!r}")
    use_closed = method == "closed" or (method == "auto" and theta == 0.5)
    if use_closed:
        if theta != 0.5:
            raise ValueError("closed form is only available at theta = 1/2")
        return np.array([s_closed_theta_half(n, t_end) for n in range(1, order + 1)])
    _, states = s_trajectory(theta, t_end, order, h)
    return states[-1]
