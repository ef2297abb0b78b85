"""Spectral densities of the free Jacobi process and quadrature back-checks.

Two reconstructions are provided: the time-t density at the symmetric
parameter point, obtained by Fourier summation of the free unitary
Brownian motion moments transported to [0, 1], and the stationary density
for rank ratios in (0, 1], obtained by Stieltjes inversion of the closed
Cauchy transform.

Quadrature grids are built on the arc substitution x = mid + half * cos(phi)
over the support interval (for the full interval this is x = cos^2(phi/2)),
which cancels the inverse square-root edge factors exactly: the integrands
seen by the uniform midpoint rule are trigonometric polynomials, so moments
of the reconstructed measures are recovered to machine accuracy.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .special_functions import ubm_moment_vector
from .transforms import (
    cauchy_stationary_eval,
    stationary_support,
    stationary_transform_params,
)

ATOM_THRESHOLD = 1e-10
FEJER_TIME_CUTOFF = 0.5


@dataclass
class DensityGrid:
    """Sampled density on (0, 1) with quadrature weights and atom list.

    ``values`` are clipped at zero for presentation and export; the signed
    reconstruction is kept in ``raw_values`` (quadrature integrates the
    signed values: truncated Fourier oscillation cancels exactly under the
    arc rule, whereas integrating the clipped values would bias the mass
    by the clipped amount).  The most negative pre-clip value is recorded
    in ``preclip_min`` so Gibbs artifacts stay visible.
    """

    xs: np.ndarray
    values: np.ndarray
    weights: np.ndarray
    atoms: list[tuple[float, float]]
    rule: str
    params: dict = field(default_factory=dict)
    preclip_min: float = 0.0
    raw_values: np.ndarray | None = None

    def signed_values(self) -> np.ndarray:
        return self.values if self.raw_values is None else self.raw_values

    def total_mass(self) -> float:
        cont = float(np.dot(self.weights, self.signed_values()))
        return cont + sum(m for _, m in self.atoms)


def arc_grid(num_points: int, lo: float = 0.0, hi: float = 1.0):
    """Midpoint grid in the arc variable over [lo, hi].

    Returns (xs increasing, weights) where weights already include the
    |dx/dphi| jacobian, i.e. sum w_j g(x_j) approximates the dx-integral
    of g over [lo, hi].
    """
    if num_points < 1:
        raise ValueError("need at least one grid point")
    if not 0.0 <= lo < hi <= 1.0:
        raise ValueError("arc must satisfy 0 <= lo < hi <= 1")
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    phi = math.pi * (np.arange(num_points) + 0.5) / num_points
    xs = mid + half * np.cos(phi)
    jac = half * np.sin(phi) * (math.pi / num_points)
    order = np.argsort(xs)
    return xs[order], jac[order]


def density_lambda1(
    t: float,
    num_points: int = 999,
    fourier_terms: int = 256,
    fejer: str = "auto",
    xs: np.ndarray | None = None,
) -> DensityGrid:
    """Density of the process law at the symmetric point and time t > 0:

    f_t(x) = [1 + 2 sum_{k<=K} w_k h_k(2t) cos(2k arccos sqrt(x))]
             / (pi sqrt(x (1 - x))).

    The constant term is fixed so the reconstruction integrates to one;
    Fejer weights w_k = 1 - k/(K+1) are applied for t below 0.5 (mode
    'auto') to damp Gibbs oscillation where the Fourier tail is slow.
    At t = 0 the law is a point mass at 1, not a density.
    """
    if t <= 0:
        raise ValueError("density requires t > 0 (the t = 0 law is an atom at 1)")
    if fejer not in ("auto", "on", "off"):
        raise ValueError("fejer must be one of auto|on|off")
    use_fejer = fejer == "on" or (fejer == "auto" and t < FEJER_TIME_CUTOFF)

    if xs is None:
        xs, weights = arc_grid(num_points)
        rule = "arc-midpoint[0,1]"
    else:
        xs = np.asarray(xs, dtype=float)
        if np.any(xs <= 0.0) or np.any(xs >= 1.0) or np.any(np.diff(xs) <= 0):
            raise ValueError("xs must be strictly increasing inside (0, 1)")
        weights = _trapezoid_arc_weights(xs)
        rule = "arc-trapezoid(user)"

    k = np.arange(1, fourier_terms + 1)
    coeffs = ubm_moment_vector(2.0 * t, fourier_terms)
    if use_fejer:
        coeffs = coeffs * (1.0 - k / (fourier_terms + 1.0))

    phi = 2.0 * np.arccos(np.sqrt(xs))
    series = 1.0 + 2.0 * (np.cos(np.outer(phi, k)) @ coeffs)
    raw = series / (math.pi * np.sqrt(xs * (1.0 - xs)))
    preclip_min = float(raw.min())
    values = np.clip(raw, 0.0, None)
    return DensityGrid(
        xs=xs,
        values=values,
        weights=weights,
        atoms=[],
        rule=rule,
        params={
            "lambda": 1.0,
            "theta": 0.5,
            "t": t,
            "fourier_terms": fourier_terms,
            "fejer": use_fejer,
            "support": (0.0, 1.0),
        },
        preclip_min=preclip_min,
        raw_values=raw,
    )


def atom_masses(lam: float, theta: float = 0.5) -> list[tuple[float, float]]:
    """Masses of the stationary law at 0 and 1 from Cauchy residues.

    Each residue is the limit of (z - pole) G(z) along real points
    approaching the pole from outside the support, accelerated by one
    Richardson step; magnitudes below 1e-10 are reported as exact zeros.
    """
    lo, hi = stationary_support(lam, theta)

    def limit(pole: float, direction: float, gap: float) -> float:
        def probe(eps: float) -> float:
            z = pole + direction * eps
            return ((z - pole) * cauchy_stationary_eval(lam, theta, z)).real

        # probe scale well inside the gap to the support, so the expansion
        # (z - pole) G = mass + c1 eps + c2 eps^2 + ... is in its radius;
        # the 3-point Richardson combination cancels both eps and eps^2
        eps = min(1e-7, 1e-3 * gap)
        rich = (8.0 * probe(eps) - 6.0 * probe(2.0 * eps) + probe(4.0 * eps)) / 3.0
        return rich if abs(rich) > ATOM_THRESHOLD else 0.0

    mass0 = limit(0.0, -1.0, lo) if lo > 0 else 0.0
    mass1 = limit(1.0, +1.0, 1.0 - hi) if hi < 1 else 0.0
    return [(0.0, mass0), (1.0, mass1)]


def stationary_density(
    lam: float,
    num_points: int = 999,
    xs: np.ndarray | None = None,
) -> DensityGrid:
    """Stationary density at theta = 1/2 for rank ratio lam in (0, 1].

    The continuous part is the Stieltjes inversion of the closed Cauchy
    transform, f(x) = sqrt(B x - r^2 x^2 - C^2) / (2 pi x (1 - x)) on the
    interval where the radicand is positive, zero outside; atoms at 0 and
    1 come from residues and are reported even when zero.
    """
    if not 0.0 < lam <= 1.0:
        raise ValueError("lambda must lie in (0, 1]")
    theta = 0.5
    r, b, c = stationary_transform_params(lam, theta)
    lo, hi = stationary_support(lam, theta)

    if xs is None:
        xs, weights = arc_grid(num_points, lo, hi)
        rule = f"arc-midpoint[{lo:.6g},{hi:.6g}]"
    else:
        xs = np.asarray(xs, dtype=float)
        if np.any(xs <= 0.0) or np.any(xs >= 1.0) or np.any(np.diff(xs) <= 0):
            raise ValueError("xs must be strictly increasing inside (0, 1)")
        weights = _trapezoid_arc_weights(xs, lo, hi)
        rule = "arc-trapezoid(user)"

    radicand = b * xs - (r * xs) ** 2 - c * c
    values = np.where(
        radicand > 0.0,
        np.sqrt(np.clip(radicand, 0.0, None)) / (2.0 * math.pi * xs * (1.0 - xs)),
        0.0,
    )
    return DensityGrid(
        xs=xs,
        values=values,
        weights=weights,
        atoms=atom_masses(lam, theta),
        rule=rule,
        params={"lambda": lam, "theta": theta, "t": math.inf, "support": (lo, hi)},
        preclip_min=float(values.min()),
    )


def _trapezoid_arc_weights(xs: np.ndarray, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """Trapezoid weights in the arc angle for a user-supplied grid."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    u = np.clip((xs - mid) / half, -1.0, 1.0)
    phi = np.arccos(u)  # decreasing in x
    w = np.zeros_like(xs)
    dphi = -np.diff(phi)
    w[:-1] += 0.5 * dphi
    w[1:] += 0.5 * dphi
    return w * half * np.sin(phi)


def quadrature_moments(grid: DensityGrid, n_max: int) -> np.ndarray:
    """Moments integral x^n dmu for n = 0..n_max from a density grid.

    Continuous part by the grid's arc-substitution weights applied to the
    signed reconstruction, plus the atom contributions.  Warns when a user
    grid leaves part of the support uncovered.
    """
    support = grid.params.get("support")
    if grid.rule.endswith("(user)") and support is not None:
        lo, hi = support
        margin = 0.02 * (hi - lo)
        if grid.xs[0] > lo + margin or grid.xs[-1] < hi - margin:
            warnings.warn("user grid may not cover the support; moments may be biased")
    powers = np.vander(grid.xs, n_max + 1, increasing=True).T  # row n = xs**n
    cont = powers @ (grid.weights * grid.signed_values())
    atoms = np.zeros(n_max + 1)
    for loc, mass in grid.atoms:
        atoms += mass * np.array([loc**n for n in range(n_max + 1)])
    return cont + atoms
