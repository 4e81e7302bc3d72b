"""Bracketed scalar root finding: bisection with secant acceleration.

Every root solved in this package comes with a proven sign change and a
monotone or concave residual, so a safeguarded bracket is all that is
needed.  Secant steps give the fast local convergence; any step that
leaves the bracket, or fails to shrink it fast enough, falls back to a
bisection step.
"""

from __future__ import annotations

import math

from .errors import BracketFailureError

DEFAULT_ROOT_TOL = 1e-12  # on the residual
DEFAULT_WIDTH_TOL = 1e-13  # on the bracket width

_MAX_ITER = 200


def bracketed_root(
    f,
    lo: float,
    hi: float,
    *,
    residual_tol: float = DEFAULT_ROOT_TOL,
    width_tol: float = DEFAULT_WIDTH_TOL,
    f_lo: float | None = None,
    f_hi: float | None = None,
) -> float:
    """Root of f in [lo, hi], to |f| <= residual_tol or width <= width_tol.

    f(lo) and f(hi) must have opposite signs (an endpoint already within
    residual_tol counts as the root).  Raises BracketFailureError when no
    sign change exists.
    """
    if not lo < hi:
        raise BracketFailureError(f"empty bracket [{lo!r}, {hi!r}]")
    f_lo = f(lo) if f_lo is None else f_lo
    if abs(f_lo) <= residual_tol:
        return lo
    f_hi = f(hi) if f_hi is None else f_hi
    if abs(f_hi) <= residual_tol:
        return hi
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise BracketFailureError(
            f"no sign change on [{lo!r}, {hi!r}]: f(lo)={f_lo!r}, f(hi)={f_hi!r}"
        )
    last_updated = 0
    force_bisect = False
    for _ in range(_MAX_ITER):
        width = hi - lo
        if width <= width_tol:
            break
        # secant through the bracket endpoints, safeguarded towards bisection;
        # two consecutive one-sided updates force a bisection step next, so
        # the bracket width halves at least every third iteration and the
        # one-sided creep of plain regula falsi cannot happen
        x = math.nan
        if not force_bisect:
            denom = f_hi - f_lo
            if denom != 0.0:
                x = hi - f_hi * width / denom
        margin = 0.01 * width
        if not lo + margin <= x <= hi - margin:
            x = lo + 0.5 * width
        fx = f(x)
        if abs(fx) <= residual_tol:
            return x
        if math.copysign(1.0, fx) == math.copysign(1.0, f_lo):
            side = -1
            lo, f_lo = x, fx
        else:
            side = 1
            hi, f_hi = x, fx
        force_bisect = side == last_updated
        last_updated = side
    # bracket exhausted; return the endpoint with the smaller residual
    return lo if abs(f_lo) <= abs(f_hi) else hi
