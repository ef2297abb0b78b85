"""Verification suites: every acceptance check, runnable standalone.

Each suite returns a list of CheckResult records; the CLI ``verify``
command and the acceptance test module both dispatch through
``run_suite`` so there is exactly one implementation of every criterion
and every tolerance.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import combinatorics as comb
from . import decomposition as dec
from . import oracle as orc
from . import spectral
from . import transforms
from .moments import (
    ProcessParams,
    closed_form_moments,
    complement_moments,
    expansion_moments,
    integrate_moments,
    lambda_scaling_residual,
    symmetric_binomial_moment,
)
from .special_functions import s_closed_theta_half, s_trajectory, ubm_moment



@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    value: float | None = None
    tolerance: float | None = None
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"{status}  {self.suite}/{self.name}"]
        if self.value is not None and self.tolerance is not None:
            parts.append(f"value={self.value:.3g} tol={self.tolerance:.3g}")
        elif self.value is not None:
            parts.append(f"value={self.value:.3g}")
        if self.detail:
            parts.append(self.detail)
        return "  ".join(parts)


def _check(suite, name, value, tol, detail="") -> CheckResult:
    return CheckResult(
        suite=suite, name=name, passed=bool(value < tol), value=float(value),
        tolerance=float(tol), detail=detail,
    )


# ---------------------------------------------------------------------------
# combinatorics / catalan
# ---------------------------------------------------------------------------

def suite_combinatorics() -> list[CheckResult]:
    out = []
    mismatches = 0
    for n in range(1, 9):
        table = comb.word_counts_bruteforce(n)
        mismatches += table.total() != 4**n
        for k in range(0, n + 1):
            c_cl, d_cl, e_cl = comb.word_counts_closed(n, k)
            mismatches += table.c(k) != c_cl
            if k <= n - 1:
                mismatches += table.d(k) != d_cl
            if 1 <= k <= n - 1:
                mismatches += table.e(k) != e_cl
        mismatches += table.odd_total() != 2 ** (2 * n - 1)
    out.append(
        CheckResult(
            suite="combinatorics",
            name="bruteforce-vs-closed-n<=8",
            passed=mismatches == 0,
            value=float(mismatches),
            detail="exact integer comparison incl. odd-word totals 2^(2n-1)",
        )
    )
    out.append(
        CheckResult(
            suite="combinatorics",
            name="pascal-combination-n<=20",
            passed=comb.pascal_combination_holds(20),
            detail="exact",
        )
    )
    out.append(
        CheckResult(
            suite="combinatorics",
            name="closed-recurrences-n<=20",
            passed=comb.closed_recurrences_hold(20),
            detail="exact",
        )
    )
    out.append(
        CheckResult(
            suite="combinatorics",
            name="empty-word-generating-function-n<=20",
            passed=comb.empty_word_generating_check(20),
            detail="exact rational comparison with (1/sqrt(1-4z) - 1)/2",
        )
    )
    return out


def suite_catalan() -> list[CheckResult]:
    ok, failing = comb.verify_catalan_identity(30)
    detail = "30/30 exact" if ok else f"first failure at n={failing}"
    return [
        CheckResult(
            suite="catalan", name="stationary-recurrence-n<=30", passed=ok, detail=detail
        )
    ]


# ---------------------------------------------------------------------------
# laguerre (trace system at the symmetric weight)
# ---------------------------------------------------------------------------

def suite_laguerre() -> list[CheckResult]:
    # step 2e-4 keeps the RK4 error well below the stated tolerances
    # (the default 1e-3 step sits right at the 1e-8 boundary at t = 4)
    times, states = s_trajectory(0.5, 4.0, 12, h=2e-4)
    idx = range(0, len(times), max(1, len(times) // 80))
    worst_closed = 0.0
    worst_h = 0.0
    for j in idx:
        t = times[j]
        for n in range(1, 13):
            closed = s_closed_theta_half(n, t)
            # scaled comparison: the raw values reach 1e13 at n=12, t=4,
            # where an absolute 1e-8 would be below float64 resolution
            worst_closed = max(
                worst_closed, abs(states[j][n - 1] - closed) / max(1.0, abs(closed))
            )
            worst_h = max(
                worst_h,
                abs(math.exp(-n * t) * states[j][n - 1] - ubm_moment(n, 2.0 * t)),
            )
    return [
        _check("laguerre", "integrated-vs-closed-form", worst_closed, 1e-8,
               "n<=12, t<=4, scaled by max(1, |closed|)"),
        _check("laguerre", "scaled-traces-vs-ubm-moments", worst_h, 1e-10,
               "e^{-nt} s_n(t) vs h_n(2t)"),
    ]


# ---------------------------------------------------------------------------
# routes
# ---------------------------------------------------------------------------

def suite_routes() -> list[CheckResult]:
    order = 16
    params = ProcessParams(lam=1.0, theta=0.5)
    traj = integrate_moments(params, 4.0, order=order, h=1e-3)
    worst_ode_closed = 0.0
    worst_exp_closed = 0.0
    worst_ode_exp = 0.0
    for t in (0.25, 0.5, 1.0, 2.0, 4.0):
        m_ode = traj.at(t)
        m_closed = closed_form_moments(t, order)
        m_exp = expansion_moments(0.5, t, order)
        worst_ode_closed = max(worst_ode_closed, float(np.max(np.abs(m_ode - m_closed))))
        worst_exp_closed = max(worst_exp_closed, float(np.max(np.abs(m_exp - m_closed))))
        worst_ode_exp = max(worst_ode_exp, float(np.max(np.abs(m_ode - m_exp))))
    out = [
        _check("routes", "ode-vs-closed-form", worst_ode_closed, 1e-8, "n<=16, t in {0.25,...,4}"),
        _check("routes", "expansion-vs-closed-form", worst_exp_closed, 1e-8),
        _check("routes", "ode-vs-expansion", worst_ode_exp, 1e-8),
    ]
    worst_sym = 0.0
    for t in (0.5, 1.0, 2.0):
        closed = closed_form_moments(t, order)
        sym = np.array([symmetric_binomial_moment(n, t) for n in range(order + 1)])
        worst_sym = max(worst_sym, float(np.max(np.abs(closed - sym))))
    out.append(
        _check("routes", "symmetric-binomial-identity", worst_sym, 1e-12,
               "closed form vs 4^{-n} sum_k C(2n,n-k) h_{|k|}(2t)")
    )
    out.append(
        _check("routes", "mgf-coefficients-vs-ode", _mgf_vs_ode(traj, order), 1e-8,
               "generating-function coefficients, t<=4")
    )
    out.append(
        _check("routes", "lambda-scaling", max(
            lambda_scaling_residual(0.5, 0.5, 2.0, order=12),
            lambda_scaling_residual(0.8, 0.5, 2.0, order=12),
        ), 1e-10, "v_n = lam m_n transform, lam in {0.5, 0.8}")
    )
    return out


def _mgf_vs_ode(traj, order) -> float:
    worst = 0.0
    for t in (0.25, 0.5, 1.0, 2.0, 4.0):
        coeffs = transforms.mgf_closed_lambda1(t, order).coeffs
        worst = max(worst, float(np.max(np.abs(coeffs - traj.at(t)))))
    return worst


# ---------------------------------------------------------------------------
# series / PDE suite
# ---------------------------------------------------------------------------

def suite_series() -> list[CheckResult]:
    out = []
    order = 32
    a = transforms.alpha_series(order)
    ai = transforms.alpha_inv_series(order)
    ident = np.zeros(order + 1)
    ident[1] = 1.0
    # the inverse-pair check composes inverse(alpha): that direction has
    # bounded intermediate coefficients; alpha(inverse) overflows the
    # float64 cancellation budget by ~1e19 at this order
    pair = float(np.max(np.abs(ai.compose(a).coeffs - ident)))
    out.append(_check("series", "alpha-inverse-pair-order-32", pair, 1e-13))
    from .series import one_minus_z

    deriv = (one_minus_z(order).sqrt() * a.differentiate()).shift(1)
    deriv_err = float(np.max(np.abs(deriv.coeffs[:order] - a.coeffs[:order])))
    out.append(_check("series", "alpha-derivative-identity", deriv_err, 1e-13,
                      "z sqrt(1-z) alpha' = alpha"))
    out.append(_check("series", "rho-pde-residual", transforms.pde_residual_rho(1.0, 24), 1e-6,
                      "order 24, t=1"))
    out.append(_check("series", "mgf-pde-residual", transforms.pde_residual_mgf_lambda1(1.0, 16),
                      1e-6, "order 16, t=1"))
    for lam, order_s in ((0.5, 12), (1.0, 16)):
        params = ProcessParams(lam=lam, theta=0.5)
        traj = integrate_moments(params, 1.0 + 4e-4, order=order_s, h=1e-4)
        res = dec.pde_residual_S(traj, 1.0, order_s)
        out.append(_check("series", f"s-pde-residual-lam-{lam:g}", res, 1e-6))
    return out


# ---------------------------------------------------------------------------
# decomposition suite
# ---------------------------------------------------------------------------

def suite_decomposition() -> list[CheckResult]:
    out = []
    worst_c1 = worst_c2 = worst_c3 = 0.0
    for lam in (0.3, 0.6, 0.9):
        params = ProcessParams(lam=lam, theta=0.5)
        traj = integrate_moments(params, 1.0, order=10)
        for t in (0.5, 1.0):
            d = dec.decomposition_u(lam, t, 10, traj)
            worst_c1 = max(worst_c1, abs(d.c[1]))
            worst_c2 = max(worst_c2, abs(d.c[2]))
            c3_pred = -((1 - lam) / 32.0) * (
                2 * lam * math.exp(-3 * t) + 3 * (1 - lam) * math.exp(-t)
            )
            worst_c3 = max(worst_c3, abs(d.c[3] - c3_pred))
    out.append(_check("decomposition", "c1-vanishes", worst_c1, 1e-7,
                      "lam in {0.3,0.6,0.9}, t in {0.5,1}"))
    out.append(_check("decomposition", "c2-vanishes", worst_c2, 1e-7))
    out.append(_check("decomposition", "c3-closed-form", worst_c3, 1e-6))

    maxima = {}
    for lam in (0.9, 0.99, 0.999):
        params = ProcessParams(lam=lam, theta=0.5)
        traj = integrate_moments(params, 1.0, order=10)
        d = dec.decomposition_u(lam, 1.0, 10, traj)
        maxima[lam] = float(np.max(np.abs(d.c)))
    out.append(
        CheckResult(
            suite="decomposition",
            name="remainder-small-near-lam-1",
            passed=maxima[0.99] < 0.02
            and maxima[0.9] > maxima[0.99] > maxima[0.999],
            value=maxima[0.99],
            tolerance=0.02,
            detail=f"max|c_n| decreasing: {maxima}",
        )
    )

    params = ProcessParams(lam=0.6, theta=0.5)
    traj = integrate_moments(params, 1.0 + 1e-3, order=10)
    res = dec.general_evolution_residual(0.6, 1.0, (4, 8), traj, order=10)
    out.append(_check("decomposition", "evolution-equation-n-4-to-8",
                      float(np.max(res)), 1e-5, "lam=0.6, t=1"))

    # gap sequence k_n(lam) -> 0 monotonically in lam, for each n <= 10;
    # k_2 is identically zero, so entries at float-noise level are treated
    # as the zero plateau they represent
    floor = 1e-12
    gaps = {lam: np.abs(dec.k_gap_vector(lam, 10)) for lam in (0.9, 0.99, 0.999)}
    monotone = bool(
        np.all((gaps[0.9] >= gaps[0.99]) | (gaps[0.9] < floor))
        and np.all((gaps[0.99] >= gaps[0.999]) | (gaps[0.99] < floor))
    )
    out.append(
        CheckResult(
            suite="decomposition",
            name="stationary-gap-vanishes",
            passed=monotone,
            value=float(np.max(gaps[0.999])),
            detail="|k_n| decreasing across lam in {0.9, 0.99, 0.999}",
        )
    )
    return out


# ---------------------------------------------------------------------------
# complement suite
# ---------------------------------------------------------------------------

def suite_complement() -> list[CheckResult]:
    out = []
    order = 10
    src = integrate_moments(
        ProcessParams(lam=0.5, theta=0.5, init_mode="orthogonal"), 2.0, order=order
    )
    transformed = complement_moments(src, 1.5)
    direct = integrate_moments(
        ProcessParams(lam=1.5, theta=0.5, init_mode="nested_P_ge_Q"), 2.0, order=order
    )
    worst = 0.0
    for t in (0.5, 1.0, 2.0):
        worst = max(worst, float(np.max(np.abs(transformed.at(t) - direct.at(t)))))
    out.append(_check("complement", "transform-vs-direct-lam-1.5", worst, 1e-8,
                      "n<=10, t in {0.5,1,2}"))

    src1 = integrate_moments(
        ProcessParams(lam=1.0, theta=0.5, init_mode="orthogonal"), 2.0, order=order
    )
    lim = complement_moments(src1, 1.0)
    base = integrate_moments(ProcessParams(lam=1.0, theta=0.5), 2.0, order=order)
    worst1 = 0.0
    for t in (0.5, 1.0, 2.0):
        worst1 = max(worst1, float(np.max(np.abs(lim.at(t) - base.at(t)))))
    out.append(_check("complement", "limit-lam-1-symmetry", worst1, 1e-8,
                      "transform of orthogonal lam''=1 run equals direct lam=1 moments"))
    return out


# ---------------------------------------------------------------------------
# density suite
# ---------------------------------------------------------------------------

def suite_density() -> list[CheckResult]:
    out = []
    worst_m = 0.0
    worst_mass = 0.0
    for t in (0.5, 1.0, 2.0):
        grid = spectral.density_lambda1(t, num_points=999, fourier_terms=256)
        mom = spectral.quadrature_moments(grid, 8)
        ref = closed_form_moments(t, 8)
        worst_m = max(worst_m, float(np.max(np.abs(mom - ref))))
        worst_mass = max(worst_mass, abs(grid.total_mass() - 1.0))
    out.append(_check("density", "moment-back-check", worst_m, 1e-6,
                      "n<=8, t in {0.5,1,2}, 256 terms"))
    out.append(_check("density", "total-mass", worst_mass, 1e-8))

    grid2 = spectral.density_lambda1(2.0, num_points=999, fourier_terms=256)
    out.append(
        CheckResult(
            suite="density",
            name="support-fills-at-t-2",
            passed=bool(np.all(grid2.values > 0.0)),
            value=float(grid2.values.min()),
            detail="strictly positive on 999 interior points",
        )
    )

    worst_stat = 0.0
    for lam in (0.4, 0.6, 0.8):
        sgrid = spectral.stationary_density(lam, num_points=999)
        mom = spectral.quadrature_moments(sgrid, 8)
        traj = integrate_moments(ProcessParams(lam=lam, theta=0.5), 30.0, order=8)
        worst_stat = max(worst_stat, float(np.max(np.abs(mom - traj.at(30.0)))))
    out.append(_check("density", "stationary-vs-t-30-moments", worst_stat, 1e-4,
                      "lam in {0.4,0.6,0.8}, n<=8"))
    return out


# ---------------------------------------------------------------------------
# oracle suite
# ---------------------------------------------------------------------------

def suite_oracle(dim: int = 256, steps: int = 200, trials: int = 8,
                 seed: int = 20240601) -> list[CheckResult]:
    out = []
    nested = orc.empirical_jacobi_moments(
        orc.OracleConfig(dim=dim, t_end=1.0, steps=steps, trials=trials, seed=seed,
                         lam=1.0, theta=0.5, mode="nested", orders=(1, 2))
    )
    m1_ref = 0.683940
    m2_ref = closed_form_moments(1.0, 2)[2]
    out.append(_check("oracle", "nested-m1", abs(nested.estimates[1] - m1_ref), 0.02,
                      f"estimate {nested.estimates[1]:.5f} vs {m1_ref}"))
    out.append(_check("oracle", "nested-m2", abs(nested.estimates[2] - m2_ref), 0.03,
                      f"estimate {nested.estimates[2]:.5f} vs {m2_ref:.5f}"))
    out.append(_check("oracle", "unitarity-drift", nested.unitarity_drift, 1e-10))

    unitary = orc.empirical_jacobi_moments(
        orc.OracleConfig(dim=dim, t_end=1.0, steps=steps, trials=trials, seed=seed + 1,
                         mode="unitary", orders=(1, 2))
    )
    for n in (1, 2):
        err = abs(unitary.estimates[n] - ubm_moment(n, 1.0))
        bound = 3.0 * unitary.stderrs[n]
        out.append(
            CheckResult(
                suite="oracle",
                name=f"unitary-trace-h{n}-within-3-sigma",
                passed=err < bound,
                value=err,
                tolerance=bound,
                detail=f"estimate {unitary.estimates[n]:.5f} vs {ubm_moment(n, 1.0):.5f}",
            )
        )
    return out


# ---------------------------------------------------------------------------
# general-theta diagnostic
# ---------------------------------------------------------------------------

def suite_general_theta(outdir: str | Path | None = None,
                        oracle_dim: int = 128, oracle_steps: int = 100,
                        oracle_trials: int = 6, seed: int = 11) -> list[CheckResult]:
    """Diagnostic, not a hard gate: compares the expansion route at
    theta = 0.75 against the ODE hierarchy and the Bernoulli oracle,
    writes a report, and requires only that the theta = 1/2 row agrees
    and that discrepancies elsewhere are quantified and flagged (the
    asymmetric-weight trace system is an open question; see the module
    notes in special_functions).
    """
    out = []
    rows = []
    t_grid = [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0]

    worst_half = 0.0
    base = integrate_moments(ProcessParams(lam=1.0, theta=0.5), 2.0, order=6)
    for t in t_grid:
        exp_half = expansion_moments(0.5, t, 6)
        worst_half = max(worst_half, float(np.max(np.abs(exp_half - base.at(t)))))
    out.append(_check("general-theta", "theta-half-sanity", worst_half, 1e-8,
                      "expansion vs ODE at theta=1/2, n<=6, t<=2"))

    theta = 0.75
    traj = integrate_moments(ProcessParams(lam=1.0, theta=theta), 2.0, order=6)
    max_disc = 0.0
    for t in t_grid:
        exp_m = expansion_moments(theta, t, 6, h=2e-4)
        ode_m = traj.at(t)
        for n in range(1, 7):
            diff = abs(exp_m[n] - ode_m[n])
            max_disc = max(max_disc, diff)
            rows.append({
                "kind": "moments",
                "theta": theta,
                "t": t,
                "n": n,
                "expansion": f"{exp_m[n]:.12g}",
                "reference": f"{ode_m[n]:.12g}",
                "abs_diff": f"{diff:.6g}",
                "flagged": diff > 1e-6,
            })

    bern = orc.empirical_jacobi_moments(
        orc.OracleConfig(dim=oracle_dim, t_end=1.0, steps=oracle_steps,
                         trials=oracle_trials, seed=seed, theta=theta,
                         mode="bernoulli_weight", orders=(1, 2, 3, 4))
    )
    _, s_states = s_trajectory(theta, 1.0, 4, h=2e-4)
    s_end = s_states[-1]
    oracle_flags = 0
    for k in (1, 2, 3, 4):
        predicted = math.exp(-k * 1.0) * s_end[k - 1]
        diff = abs(bern.estimates[k] - predicted)
        bound = 3.0 * bern.stderrs[k] + 4.0 / oracle_dim
        flagged = diff > bound
        oracle_flags += flagged
        rows.append({
            "kind": "bernoulli-oracle",
            "theta": theta,
            "t": 1.0,
            "n": k,
            "expansion": f"{predicted:.12g}",
            "reference": f"{bern.estimates[k]:.12g} (se {bern.stderrs[k]:.3g})",
            "abs_diff": f"{diff:.6g}",
            "flagged": flagged,
        })

    report_path = None
    if outdir is not None:
        Path(outdir).mkdir(parents=True, exist_ok=True)
        report_path = Path(outdir) / "general_theta_report.csv"
        with open(report_path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)

    flagged_rows = sum(1 for r in rows if r["flagged"])
    out.append(
        CheckResult(
            suite="general-theta",
            name="report-produced",
            passed=len(rows) > 0,
            value=float(len(rows)),
            detail=(
                f"{flagged_rows} of {len(rows)} rows flagged"
                f" (max ODE-vs-expansion discrepancy {max_disc:.3g};"
                f" {oracle_flags} oracle rows outside budget)"
                + (f"; written to {report_path}" if report_path else "")
            ),
        )
    )
    return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

_SUITES = {
    "combinatorics": suite_combinatorics,
    "catalan": suite_catalan,
    "laguerre": suite_laguerre,
    "routes": suite_routes,
    "series": suite_series,
    "decomposition": suite_decomposition,
    "complement": suite_complement,
    "density": suite_density,
    "oracle": suite_oracle,
    "general-theta": suite_general_theta,
}


def run_suite(name: str, outdir: str | Path | None = None, **kwargs) -> list[CheckResult]:
    """Dispatch one suite (or 'all').  Keyword arguments are routed only to
    the suites that take them: the oracle sizing knobs (dim/steps/trials/
    seed) go to the oracle suite, the output directory to the report
    writers."""
    if name == "all":
        results = []
        for key in _SUITES:
            results.extend(run_suite(key, outdir=outdir, **kwargs))
        return results
    if name not in _SUITES:
        raise KeyError(f"unknown suite {name!r}")
    func = _SUITES[name]
    if name == "general-theta":
        return func(outdir=outdir)
    if name == "oracle":
        allowed = {k: v for k, v in kwargs.items() if k in ("dim", "steps", "trials", "seed")}
        return func(**allowed)
    return func()


def suite_names() -> tuple[str, ...]:
    return tuple(_SUITES) + ("all",)
