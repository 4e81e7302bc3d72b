"""Self-verification suite: every module invariant as a runnable check.

Each check computes a worst-case measured error and compares it against a
tolerance.  Tolerances can only be loosened by the caller, never
tightened, so a passing default run keeps passing under any override.
Checks call into the library through module attributes on purpose: the
suite must notice if an implementation is swapped out underneath it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import energy, equilibria, model, quadrature
from .quadrature import ThetaIntegralSpec

REFERENCE_PAIRS = ((2, 0.5), (3, 0.25), (5, 0.3))
MONOTONE_PAIRS = ((2, 0.5), (3, 0.25), (3, 0.9), (5, 0.3), (5, 0.65))
SINGULAR_PAIRS = ((3, 0.25), (4, 0.45), (4, 0.2), (5, 0.3), (6, 0.35))
# Published reference figure for kappa2 at (3, 0.25); both internal oracles
# disagree with it, so it is reported but never asserted against.
REPORTED_KAPPA2_D3_M025 = 12.4453


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""
    lines: list[str] = field(default_factory=list)


def _result(name, measured, tolerance, detail="", lines=None):
    return CheckResult(
        name=name,
        passed=bool(measured <= tolerance),
        measured=float(measured),
        tolerance=float(tolerance),
        detail=detail,
        lines=lines or [],
    )


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _worst_nonmonotone(values, increasing: bool) -> float:
    worst = 0.0
    for prev, cur in zip(values, values[1:]):
        step = cur - prev if increasing else prev - cur
        if step <= 0.0:
            worst = max(worst, -step, 1e-300)
    return worst


def check_geometry_consistency(tol: float) -> CheckResult:
    worst = 0.0
    for d in range(1, 11):
        geo = model.sphere_geometry(d)
        # independent route to |S^{d-1}|: the surface-area formula one
        # dimension down (2 pi^{d/2} / Gamma(d/2), valid down to d = 1)
        direct = 2.0 * math.pi ** (0.5 * d) / math.gamma(0.5 * d)
        worst = max(worst, _rel(geo.area_sdm1, direct))
        worst = max(worst, _rel(geo.area_sdm1, d * geo.ball_volume_wd))
    return _result("geometry_consistency", worst, tol)


def check_regime_partition(tol: float) -> CheckResult:
    bad = 0
    total = 0
    for d in range(1, 7):
        for m in np.linspace(0.005, 0.995, 199):
            m = float(m)
            thr_high = 1.0 - 2.0 / d
            thr_low = 1.0 - 2.0 / (d - 1) if d >= 2 else None
            if abs(m - thr_high) < 2e-9 or (thr_low is not None and abs(m - thr_low) < 2e-9):
                continue
            total += 1
            tag = model.classify_regime(d, m).tag
            in_i = thr_high < m < 1.0
            in_ii = thr_low is not None and thr_low < m < thr_high
            in_iii = thr_low is not None and 0.0 < m < thr_low
            expected = (
                model.RegimeCase.CASE_I
                if in_i
                else model.RegimeCase.CASE_II
                if in_ii
                else model.RegimeCase.CASE_III
            )
            if [in_i, in_ii, in_iii].count(True) != 1 or tag is not expected:
                bad += 1
    return _result("regime_partition", bad, tol, detail=f"{total} (d, m) samples")


def check_quadrature_self_consistency(tol: float, rel_tol: float) -> CheckResult:
    rng = np.random.default_rng(20240817)
    worst = 0.0
    for _ in range(50):
        eta = float(np.exp(rng.uniform(np.log(1.001), np.log(50.0))))
        m = float(rng.uniform(0.05, 0.95))
        q1 = 1.0 / (m - 1.0)
        q = float(rng.choice([q1, q1 - 1.0, q1 + 1.0]))
        p = int(rng.integers(0, 2))
        d = int(rng.integers(1, 7))
        spec = ThetaIntegralSpec(eta, q, p, d)
        tight = quadrature.theta_integral(spec, min(rel_tol, 1e-10))
        loose = quadrature.theta_integral(spec, 1e-6)
        worst = max(worst, _rel(tight, loose))
    return _result("quadrature_self_consistency", worst, tol)


def check_eta1_quadrature_vs_closed_form(tol: float, rel_tol: float) -> CheckResult:
    worst = 0.0
    for d, m in SINGULAR_PAIRS:
        q = 1.0 / (m - 1.0)
        for p in (0, 1):
            quad = quadrature.theta_integral(ThetaIntegralSpec(1.0, q, p, d), rel_tol)
            closed = quadrature.eta1_closed_form(q, p, d)
            worst = max(worst, _rel(quad, closed))
    return _result("eta1_quadrature_vs_closed_form", worst, tol)


def check_theta_integral_eta_monotone(tol: float, rel_tol: float) -> CheckResult:
    worst = 0.0
    for q, d in ((-2.0, 2), (-4.0 / 3.0, 3), (-0.5, 5)):
        vals = [
            quadrature.theta_integral(ThetaIntegralSpec(float(e), q, 0, d), rel_tol)
            for e in 1.0 + np.geomspace(1e-3, 100.0, 12)
        ]
        worst = max(worst, _worst_nonmonotone(vals, increasing=False))
    return _result("theta_integral_eta_monotone", worst, tol)


def check_moment_bounded_by_mass(tol: float, rel_tol: float) -> CheckResult:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(25):
        eta = float(np.exp(rng.uniform(np.log(1.0 + 1e-9), np.log(30.0))))
        m = float(rng.uniform(0.05, 0.95))
        q = 1.0 / (m - 1.0)
        d = int(rng.integers(1, 7))
        i0 = quadrature.theta_integral(ThetaIntegralSpec(eta, q, 0, d), rel_tol)
        i1 = quadrature.theta_integral(ThetaIntegralSpec(eta, q, 1, d), rel_tol)
        worst = max(worst, max(abs(i1) / i0 - 1.0, 0.0))
    return _result("moment_bounded_by_mass", worst, tol)


def check_branch_monotone_direction(tol: float, rel_tol: float) -> CheckResult:
    worst = 0.0
    lines = []
    for d, m in MONOTONE_PAIRS:
        increasing = m > 1.0 - 2.0 / (d - 1) if d >= 2 else True
        vals = [
            equilibria.inverse_kappa(float(e), d, m, rel_tol)
            for e in 1.0 + np.geomspace(1e-3, 1e4 - 1.0, 20)
        ]
        bad = _worst_nonmonotone(vals, increasing)
        worst = max(worst, bad)
        lines.append(
            f"(d={d}, m={m}): {'increasing' if increasing else 'decreasing'}, "
            f"worst violation {bad:.3e}"
        )
    return _result("branch_monotone_direction", worst, tol, lines=lines)


def check_branch_limit_matches_kappa1(tol: float, rel_tol: float) -> CheckResult:
    worst = 0.0
    for d, m in MONOTONE_PAIRS:
        prod = equilibria.inverse_kappa(1e6, d, m, rel_tol) * equilibria.kappa1(d, m)
        worst = max(worst, abs(prod - 1.0))
    return _result("branch_limit_matches_kappa1", worst, tol)


def check_branch_continuity(tol: float, rel_tol: float, root_tol: float) -> CheckResult:
    worst = 0.0
    lines = []
    for d, m in REFERENCE_PAIRS:
        k1 = equilibria.kappa1(d, m)
        tag = model.classify_regime(d, m).tag
        kappa = k1 * (1.0 - 1e-6) if tag is model.RegimeCase.CASE_III else k1 * (1.0 + 1e-6)
        s_birth = equilibria.fully_supported_state(kappa, d, m, rel_tol, root_tol).s
        worst = max(worst, s_birth)
        lines.append(f"(d={d}, m={m}): s at branch birth {s_birth:.3e}")
        if tag is not model.RegimeCase.CASE_I:
            k2 = equilibria.kappa2(d, m)
            sb = equilibria.s_bar(d, m)
            s_at_k2 = equilibria.com_norm_of_eta(
                equilibria.solve_eta(k2, d, m, rel_tol, root_tol), d, m, rel_tol
            )
            worst = max(worst, abs(s_at_k2 - sb))
            lines.append(f"(d={d}, m={m}): |s(kappa2) - s_bar| = {abs(s_at_k2 - sb):.3e}")
    return _result("branch_continuity", worst, tol, lines=lines)


def check_case_iii_com_decreasing(tol: float, rel_tol: float) -> CheckResult:
    vals = [
        equilibria.com_norm_of_eta(float(e), 5, 0.3, rel_tol)
        for e in 1.0 + np.geomspace(1e-4, 99.0, 15)
    ]
    worst = _worst_nonmonotone(vals, increasing=False)
    return _result("case_iii_com_decreasing", worst, tol)


def check_singular_multiplier_relation(tol: float, rel_tol: float, root_tol: float) -> CheckResult:
    worst = 0.0
    samples = []
    k2_ii = equilibria.kappa2(3, 0.25)
    for factor in (1.2, 2.0, 5.0):
        samples.append((3, 0.25, factor * k2_ii, "upper"))
    k2_iii = equilibria.kappa2(5, 0.3)
    samples.append((5, 0.3, 0.97 * k2_iii, "upper"))
    samples.append((5, 0.3, 0.97 * k2_iii, "lower"))
    samples.append((5, 0.3, 1.05 * k2_iii, "upper"))
    for d, m, kappa, branch in samples:
        state = equilibria.singular_state(kappa, d, m, root_tol, branch)
        lam = equilibria.singular_lambda(state.alpha, d, m, rel_tol)
        lhs = -lam / (1.0 - state.alpha)
        rhs = kappa * (state.alpha + (1.0 - state.alpha) * state.s_bar)
        worst = max(worst, _rel(lhs, rhs))
    return _result("singular_multiplier_relation", worst, tol)


def check_singular_alpha_saturates(tol: float, root_tol: float) -> CheckResult:
    alpha = equilibria.alpha_roots(100.0 * equilibria.kappa2(3, 0.25), 3, 0.25, root_tol)[-1]
    return _result("singular_alpha_saturates", 1.0 - alpha, tol, detail=f"alpha = {alpha:.6f}")


def check_kappa2_dual_oracle(tol: float, rel_tol: float) -> CheckResult:
    worst = 0.0
    lines = []
    for d, m in ((3, 0.25), (4, 0.2), (5, 0.3)):
        closed = equilibria.kappa2(d, m)
        quad = equilibria.kappa2_quadrature(d, m, rel_tol)
        worst = max(worst, _rel(closed, quad))
        note = ""
        if (d, m) == (3, 0.25):
            off = _rel(closed, REPORTED_KAPPA2_D3_M025)
            note = (
                f"; reported reference value {REPORTED_KAPPA2_D3_M025} differs from both "
                f"oracles by {off:.1%} - mutual oracle agreement is the binding check"
            )
        lines.append(
            f"(d={d}, m={m}): closed form {closed:.10f}, quadrature {quad:.10f}{note}"
        )
    return _result("kappa2_dual_oracle", worst, tol, lines=lines)


def check_com_norm_closed_form(tol: float, rel_tol: float) -> CheckResult:
    worst = 0.0
    for d, m in SINGULAR_PAIRS:
        closed = equilibria.s_bar(d, m)
        ratio = equilibria.com_norm_of_eta(1.0, d, m, rel_tol)
        worst = max(worst, _rel(closed, ratio))
    return _result("com_norm_closed_form", worst, tol)


def _fs_energy_samples(rel_tol: float, root_tol: float):
    for d, m, kappas in (
        (2, 0.5, (6.0, 8.0, 12.0)),
        (3, 0.25, (10.0, 11.0, 13.0)),
        (5, 0.3, (17.9, 18.6, 19.5)),
    ):
        for kappa in kappas:
            yield d, m, equilibria.fully_supported_state(kappa, d, m, rel_tol, root_tol)


def check_energy_two_route_agreement(tol: float, rel_tol: float, root_tol: float) -> CheckResult:
    worst = 0.0
    for d, m, state in _fs_energy_samples(rel_tol, root_tol):
        direct = energy.energy_fully_supported(state, d, m, rel_tol)
        identity = 0.5 * state.kappa - energy.branch_energy_gain(state.eta, d, m, rel_tol).value
        worst = max(worst, abs(direct - identity) / max(1.0, abs(direct)))
    for d, m, kappa in ((3, 0.25, 2.0 * equilibria.kappa2(3, 0.25)), (5, 0.3, 18.5)):
        alpha = equilibria.alpha_roots(kappa, d, m, root_tol)[-1]
        direct = energy.energy_singular(alpha, kappa, d, m, rel_tol)
        sb = equilibria.s_bar(d, m)
        com = alpha + (1.0 - alpha) * sb
        identity = (
            -kappa * (1.0 - sb) * com * (1.0 - alpha) / m - 0.5 * kappa * com**2 + 0.5 * kappa
        )
        worst = max(worst, abs(direct - identity) / max(1.0, abs(direct)))
    return _result("energy_two_route_agreement", worst, tol)


def check_energy_slope_identities(tol: float, rel_tol: float, root_tol: float) -> CheckResult:
    worst = 0.0
    d, m = 3, 0.25
    k2 = equilibria.kappa2(d, m)
    sb = equilibria.s_bar(d, m)
    for factor in (1.2, 1.6, 2.0, 3.0, 5.0):
        kappa = factor * k2
        h = 1e-5 * kappa

        def gap(k):
            alpha = equilibria.alpha_roots(k, d, m, root_tol)[-1]
            return energy.energy_uniform(k, d, m) - energy.energy_singular(
                alpha, k, d, m, rel_tol
            )

        fd = (gap(kappa + h) - gap(kappa - h)) / (2.0 * h)
        alpha = equilibria.alpha_roots(kappa, d, m, root_tol)[-1]
        analytic = 0.5 * (alpha + (1.0 - alpha) * sb) ** 2
        worst = max(worst, _rel(fd, analytic))
    for kappa in (6.0, 7.0, 8.0, 10.0, 12.0):
        h = 1e-5 * kappa

        def gain(k):
            eta = equilibria.solve_eta(k, 2, 0.5, rel_tol, root_tol)
            return energy.branch_energy_gain(eta, 2, 0.5, rel_tol).value

        fd = (gain(kappa + h) - gain(kappa - h)) / (2.0 * h)
        s = equilibria.fully_supported_state(kappa, 2, 0.5, rel_tol, root_tol).s
        worst = max(worst, _rel(fd, 0.5 * s * s))
    return _result("energy_slope_identities", worst, tol)


def check_energy_comparison_steps(tol: float, rel_tol: float, root_tol: float) -> CheckResult:
    worst = 0.0
    lines = []

    def fs_gap(kappa, d, m):
        state = equilibria.fully_supported_state(kappa, d, m, rel_tol, root_tol)
        return energy.energy_uniform(kappa, d, m) - energy.energy_fully_supported(
            state, d, m, rel_tol
        )

    for d, m, grid in (
        (2, 0.5, (6.0, 8.0, 10.0, 12.0)),
        (3, 0.25, (9.6, 10.5, 11.5, 12.5)),
        (5, 0.3, (17.9, 18.4, 19.0, 19.6)),
    ):
        vals = [fs_gap(k, d, m) for k in grid]
        bad = _worst_nonmonotone(vals, increasing=True)
        worst = max(worst, bad)
        lines.append(f"supported-branch gap increasing for (d={d}, m={m}): worst {bad:.2e}")

    d, m = 5, 0.3
    for kappa in (15.9, 16.4, 16.9, 17.4):
        lower, upper = equilibria.alpha_roots(kappa, d, m, root_tol)
        margin = energy.energy_singular(lower, kappa, d, m, rel_tol) - energy.energy_singular(
            upper, kappa, d, m, rel_tol
        )
        if margin <= 0.0:
            worst = max(worst, -margin, 1e-300)
    lines.append("lower measure-valued branch never beats the upper one on the fold")

    vals = []
    for kappa in (17.9, 18.4, 19.0, 19.6):
        state = equilibria.fully_supported_state(kappa, d, m, rel_tol, root_tol)
        upper = equilibria.alpha_roots(kappa, d, m, root_tol)[-1]
        vals.append(
            energy.energy_fully_supported(state, d, m, rel_tol)
            - energy.energy_singular(upper, kappa, d, m, rel_tol)
        )
    bad = _worst_nonmonotone(vals, increasing=True)
    worst = max(worst, bad)
    lines.append(f"supported-vs-singular gap increasing on (kappa2, kappa1): worst {bad:.2e}")
    return _result("energy_comparison_steps", worst, tol, lines=lines)


def check_minimizer_consistency(tol: float, rel_tol: float, root_tol: float) -> CheckResult:
    mismatches = 0
    total = 0
    for d, m, lo, hi in ((2, 0.5, 4.0, 12.0), (3, 0.25, 8.0, 16.0), (5, 0.3, 15.0, 21.0)):
        crit = energy.critical_set(d, m, rel_tol, root_tol)
        for kappa in np.linspace(lo, hi, 9):
            kappa = float(kappa)
            report = energy.classify_minimizer(kappa, d, m, rel_tol, root_tol)
            if crit.kappa_c is not None:
                expected = energy.UNIFORM if kappa < crit.kappa_c else energy.SINGULAR_UPPER
            elif crit.kappa2 is not None:
                expected = (
                    energy.UNIFORM
                    if kappa <= crit.kappa1
                    else energy.FULLY_SUPPORTED
                    if kappa <= crit.kappa2
                    else energy.SINGULAR_UPPER
                )
            else:
                expected = energy.UNIFORM if kappa <= crit.kappa1 else energy.FULLY_SUPPORTED
            total += 1
            if report.minimizer != expected:
                mismatches += 1
    return _result("minimizer_consistency", mismatches, tol, detail=f"{total} grid points")


def check_reference_energies(tol: float) -> CheckResult:
    worst = 0.0
    for kappa in (1.0, 5.0, 100.0):
        worst = max(worst, abs(energy.delta_mixture_energy(0.0, kappa, 2, 0.5)))
        worst = max(
            worst,
            abs(
                energy.energy_uniform(kappa, 3, 0.25)
                - energy.energy_uniform(0.0, 3, 0.25)
                - 0.5 * kappa
            ),
        )
    return _result("reference_energies", worst, tol)


def check_uniform_stability_threshold(tol: float) -> CheckResult:
    worst = 0.0
    for d, m in REFERENCE_PAIRS:
        k1 = equilibria.kappa1(d, m)
        if not energy.second_variation_gap(0.95 * k1, d, m) > 0.0:
            worst = 1.0
        if not energy.second_variation_gap(1.05 * k1, d, m) < 0.0:
            worst = 1.0
        trial = energy.linear_trial_rayleigh(d)
        worst = max(worst, _rel(trial, (d + 1) / model.sphere_geometry(d).area_sd))
    return _result("uniform_stability_threshold", worst, tol)


def run_verification(
    rel_tol: float = quadrature.DEFAULT_REL_TOL,
    root_tol: float = 1e-12,
    loosen: float | None = None,
) -> list[CheckResult]:
    """Run every check; rel_tol/root_tol feed the solvers, loosen relaxes
    the pass thresholds (they can only grow)."""

    def tol(default: float) -> float:
        return max(default, loosen) if loosen is not None else default

    quad_tol = min(rel_tol, 1e-6)
    checks = (
        ("geometry_consistency", lambda: check_geometry_consistency(tol(1e-14))),
        ("regime_partition", lambda: check_regime_partition(tol(0.0))),
        ("quadrature_self_consistency",
         lambda: check_quadrature_self_consistency(tol(1e-6), quad_tol)),
        ("eta1_quadrature_vs_closed_form",
         lambda: check_eta1_quadrature_vs_closed_form(tol(1e-8), quad_tol)),
        ("theta_integral_eta_monotone",
         lambda: check_theta_integral_eta_monotone(tol(0.0), quad_tol)),
        ("moment_bounded_by_mass", lambda: check_moment_bounded_by_mass(tol(0.0), quad_tol)),
        ("branch_monotone_direction",
         lambda: check_branch_monotone_direction(tol(0.0), quad_tol)),
        ("branch_limit_matches_kappa1",
         lambda: check_branch_limit_matches_kappa1(tol(1e-4), quad_tol)),
        ("branch_continuity", lambda: check_branch_continuity(tol(1e-2), quad_tol, root_tol)),
        ("case_iii_com_decreasing",
         lambda: check_case_iii_com_decreasing(tol(0.0), quad_tol)),
        ("singular_multiplier_relation",
         lambda: check_singular_multiplier_relation(tol(1e-10), quad_tol, root_tol)),
        ("singular_alpha_saturates",
         lambda: check_singular_alpha_saturates(tol(1e-2), root_tol)),
        ("kappa2_dual_oracle", lambda: check_kappa2_dual_oracle(tol(1e-8), quad_tol)),
        ("com_norm_closed_form", lambda: check_com_norm_closed_form(tol(1e-8), quad_tol)),
        ("energy_two_route_agreement",
         lambda: check_energy_two_route_agreement(tol(1e-8), quad_tol, root_tol)),
        ("energy_slope_identities",
         lambda: check_energy_slope_identities(tol(1e-4), quad_tol, root_tol)),
        ("energy_comparison_steps",
         lambda: check_energy_comparison_steps(tol(0.0), quad_tol, root_tol)),
        ("minimizer_consistency",
         lambda: check_minimizer_consistency(tol(0.0), quad_tol, root_tol)),
        ("reference_energies", lambda: check_reference_energies(tol(0.0))),
        ("uniform_stability_threshold",
         lambda: check_uniform_stability_threshold(tol(1e-12))),
    )
    results = []
    for name, runner in checks:
        try:
            results.append(runner())
        except Exception as exc:  # a crashed check is a failed check
            results.append(
                CheckResult(
                    name=name,
                    passed=False,
                    measured=math.inf,
                    tolerance=0.0,
                    detail=f"{type(exc).__name__}: {exc}",
                )
            )
    return results


def format_report(results: list[CheckResult]) -> str:
    out = []
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        line = f"{status} {res.name}: measured {res.measured:.3e} (tolerance {res.tolerance:.3e})"
        if res.detail:
            line += f" - {res.detail}"
        out.append(line)
        out.extend(f"    {extra}" for extra in res.lines)
    failed = sum(not r.passed for r in results)
    out.append(
        f"{len(results) - failed}/{len(results)} checks passed"
        + (f", {failed} FAILED" if failed else "")
    )
    return "\n".join(out)
