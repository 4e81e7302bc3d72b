"""Command-line front end.

Four subcommands: ``critical`` (JSON table of critical strengths),
``sweep`` (CSV/JSON branch samples for bifurcation diagrams), ``profile``
(CSV/JSON density profiles) and ``verify`` (the self-check suite).
Output is plain data for external plotting tools; repeated runs with
identical flags produce byte-identical files.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import energy, equilibria, verification
from .errors import FastSphereError
from .model import classify_regime

_BRANCH_ORDER = ("fully_supported", "singular_lower", "singular_upper", "uniform")


def _fmt(value) -> str:
    """Shortest round-trip float formatting; None becomes the empty field."""
    if value is None:
        return ""
    return repr(float(value))


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as handle:
            handle.write(text)


def _tolerances(args) -> tuple[float, float]:
    rel_tol = float(args.rel_tol)
    root_tol = float(args.root_tol)
    if not rel_tol > 0.0 or not root_tol > 0.0:
        raise FastSphereError("--rel-tol and --root-tol must be positive")
    # quadrature accepts at most 1e-6; looser requests only loosen checks
    return min(rel_tol, 1e-6), root_tol


def cmd_critical(args) -> int:
    quad_tol, root_tol = _tolerances(args)
    regime = classify_regime(args.d, args.m)
    crit = energy.critical_set(args.d, args.m, quad_tol, root_tol)
    payload = {
        "d": args.d,
        "m": args.m,
        "regime": regime.tag.value,
        "kappa1": crit.kappa1,
        "kappa2": crit.kappa2,
        "kappa3": crit.kappa3,
        "alpha_bar": crit.alpha_bar,
        "kappa_c": crit.kappa_c,
    }
    _write(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _branch_rows(kappa: float, d: int, m: float, crit, quad_tol: float, root_tol: float):
    """Rows (branch, alpha, eta, com_norm, energy) existing at kappa."""
    rows = [("uniform", None, None, 0.0, energy.energy_uniform(kappa, d, m))]
    regime = classify_regime(d, m).tag.value
    if regime == "case_i":
        supported = kappa > crit.kappa1
    elif regime == "case_ii":
        supported = crit.kappa1 < kappa < crit.kappa2
    else:
        supported = crit.kappa2 < kappa < crit.kappa1
    if supported:
        state = equilibria.fully_supported_state(kappa, d, m, quad_tol, root_tol)
        rows.append(
            (
                "fully_supported",
                None,
                state.eta,
                state.s,
                energy.energy_fully_supported(state, d, m, quad_tol),
            )
        )
    if crit.kappa2 is not None:
        roots = equilibria.alpha_roots(kappa, d, m, root_tol)
        sb = equilibria.s_bar(d, m)
        if roots:
            alpha = roots[-1]
            rows.append(
                (
                    "singular_upper",
                    alpha,
                    None,
                    alpha + (1.0 - alpha) * sb,
                    energy.energy_singular(alpha, kappa, d, m, quad_tol),
                )
            )
        if len(roots) == 2 and roots[0] < roots[1]:
            alpha = roots[0]
            rows.append(
                (
                    "singular_lower",
                    alpha,
                    None,
                    alpha + (1.0 - alpha) * sb,
                    energy.energy_singular(alpha, kappa, d, m, quad_tol),
                )
            )
    return rows


def cmd_sweep(args) -> int:
    quad_tol, root_tol = _tolerances(args)
    if not (0.0 < args.kappa_min < args.kappa_max) or args.steps < 2:
        raise FastSphereError(
            "sweep needs 0 < --kappa-min < --kappa-max and --steps >= 2"
        )
    crit = energy.critical_set(args.d, args.m, quad_tol, root_tol)
    if args.log_grid:
        grid = np.geomspace(args.kappa_min, args.kappa_max, args.steps)
    else:
        grid = np.linspace(args.kappa_min, args.kappa_max, args.steps)

    records = []
    failures = 0
    for kappa in grid:
        kappa = float(kappa)
        try:
            rows = _branch_rows(kappa, args.d, args.m, crit, quad_tol, root_tol)
        except FastSphereError:
            failures += 1
            rows = [("uniform", math.nan, math.nan, math.nan, math.nan)]
        for branch, alpha, eta, com, e in rows:
            records.append((kappa, branch, alpha, eta, com, e))
    records.sort(key=lambda r: (r[0], r[1]))

    if args.format == "json":
        payload = [
            {
                "kappa": k,
                "branch": branch,
                "alpha": alpha,
                "eta": eta,
                "com_norm": com,
                "energy": e,
            }
            for k, branch, alpha, eta, com, e in records
        ]
        _write(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = ["kappa,branch,alpha,eta,com_norm,energy"]
        for k, branch, alpha, eta, com, e in records:
            lines.append(
                f"{_fmt(k)},{branch},{_fmt(alpha)},{_fmt(eta)},{_fmt(com)},{_fmt(e)}"
            )
        _write("\n".join(lines) + "\n", args.out)
    if failures:
        sys.stderr.write(f"warning: {failures} kappa samples failed to solve\n")
    return 0


def cmd_profile(args) -> int:
    quad_tol, root_tol = _tolerances(args)
    if args.points < 2:
        raise FastSphereError("--points must be >= 2")
    thetas = np.linspace(0.0, math.pi, args.points)
    if args.branch == "fully_supported":
        if args.kappa is None:
            raise FastSphereError("--kappa is required for the fully_supported branch")
        state = equilibria.fully_supported_state(args.kappa, args.d, args.m, quad_tol, root_tol)
        values = [
            equilibria.fully_supported_density(state, float(t), args.d, args.m)
            for t in thetas
        ]
    else:  # rho_bar, the kappa-independent regular density
        values = [
            equilibria.rho_bar_density(float(t), args.d, args.m, quad_tol) for t in thetas
        ]
    if args.format == "json":
        payload = [{"theta": float(t), "density": v} for t, v in zip(thetas, values)]
        _write(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = ["theta,density"]
        lines.extend(f"{_fmt(float(t))},{_fmt(v)}" for t, v in zip(thetas, values))
        _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    quad_tol, root_tol = _tolerances(args)
    loosen = float(args.rel_tol) if float(args.rel_tol) > 1e-10 else None
    results = verification.run_verification(quad_tol, root_tol, loosen)
    _write(verification.format_report(results) + "\n", args.out)
    return 0 if all(r.passed for r in results) else 1


def _add_common(parser: argparse.ArgumentParser, model_params: bool = True) -> None:
    if model_params:
        parser.add_argument("--d", type=int, required=True, help="sphere dimension, >= 1")
        parser.add_argument(
            "--m", type=float, required=True, help="diffusion exponent in (0, 1)"
        )
    parser.add_argument(
        "--rel-tol", type=float, default=1e-10, help="quadrature relative tolerance"
    )
    parser.add_argument(
        "--root-tol", type=float, default=1e-12, help="root-finding residual tolerance"
    )
    parser.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fastsphere",
        description="Equilibria and phase transitions of the fast-diffusion "
        "free energy on the unit sphere.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_crit = sub.add_parser("critical", help="critical interaction strengths as JSON")
    _add_common(p_crit)
    p_crit.set_defaults(func=cmd_critical)

    p_sweep = sub.add_parser("sweep", help="branch samples over a kappa grid")
    _add_common(p_sweep)
    p_sweep.add_argument("--kappa-min", type=float, required=True)
    p_sweep.add_argument("--kappa-max", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, default=100, help="grid points, >= 2")
    p_sweep.add_argument(
        "--log-grid", action="store_true", help="geometric kappa grid instead of linear"
    )
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.set_defaults(func=cmd_sweep)

    p_prof = sub.add_parser("profile", help="density profile over theta in [0, pi]")
    _add_common(p_prof)
    p_prof.add_argument("--kappa", type=float, default=None)
    p_prof.add_argument("--points", type=int, default=200, help="theta samples, >= 2")
    p_prof.add_argument(
        "--branch", choices=("fully_supported", "rho_bar"), default="fully_supported"
    )
    p_prof.add_argument("--format", choices=("csv", "json"), default="csv")
    p_prof.set_defaults(func=cmd_profile)

    p_verify = sub.add_parser("verify", help="run the self-verification suite")
    _add_common(p_verify, model_params=False)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FastSphereError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
