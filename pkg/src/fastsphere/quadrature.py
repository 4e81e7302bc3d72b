"""Quadrature for the polar integrals behind every equilibrium condition.

Everything downstream reduces to the one-parameter family

    I(eta, q, p, d) = int_0^pi (eta - cos t)^q  sin^{d-1} t  cos^p t  dt,

with eta >= 1, p in {0, 1}, and q a (typically negative) exponent derived
from the diffusion exponent.  At eta = 1 the integrand has an algebraic
singularity at t = 0 which is integrable exactly when 2q + d - 1 > -1.

Folding the upper half of the domain through t -> pi - t gives

    I = int_0^{pi/2} [ (eta - cos t)^q + (-1)^p (eta + cos t)^q ]
                     sin^{d-1} t cos^p t  dt,

which confines the possible singularity to a single endpoint, guarantees
no panel straddles the sign change of cos t, and lets the p = 1 moment be
computed without cancellation: the bracketed difference is taken through
expm1, so the moment integrand stays strictly positive even for eta of
order 1e6 where the two halves agree to ten digits.  The combination
eta - cos t is always formed as (eta - 1) + 2 sin^2(t/2), never by direct
subtraction, and each term is assembled in log space so that steep panels
near the endpoint cannot overflow halfway through a product.

All panels are integrated by a Gauss-Kronrod 7/15 rule with |K15 - G7|
error estimates; the worst panel is bisected until the summed estimate
meets the requested relative tolerance.  Away from the endpoint
(eta - 1 >= SINGULAR_SWITCH) a single seed panel suffices.  Near it the
algebraic behaviour is self-similar under halving, so the seed panels are
laid out dyadically from a cutoff theta_c up to pi/2; the piece below the
cutoff is added in closed form at eta = 1 (exact to a relative O(theta_c^2)
correction that joins the error budget) and bounded into the budget for
eta > 1, where the cutoff sits far below the spike scale sqrt(eta - 1).
At eta = 1 the full integrals also have exact Gamma-function values
(eta1_closed_form), kept strictly separate from the quadrature path so
the two can serve as independent oracles for each other.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidParamError, NotIntegrableError, ToleranceNotMetError
from .model import check_dimension

DEFAULT_REL_TOL = 1e-10
# Below this eta - 1 the spike at t = 0 is treated like a singularity and
# integrated on the graded dyadic mesh.
SINGULAR_SWITCH = 1e-6

_MAX_PANELS = 4000
_HALF_PI = 0.5 * math.pi
# Smallest admissible dyadic cutoff; keeps every log-space exponent on the
# graded mesh comfortably inside double range.
_MIN_CUT = 1e-140

# Gauss-Kronrod 7/15 nodes and weights (positive abscissae, centre last).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])


@dataclass(frozen=True)
class ThetaIntegralSpec:
    """One member of the polar integral family."""

    eta: float
    q: float
    p: int
    d: int


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise InvalidParamError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def _check_spec(eta: float, q: float, p: int, d) -> tuple[float, float, int, int]:
    d = check_dimension(d)
    eta = float(eta)
    q = float(q)
    if p not in (0, 1):
        raise InvalidParamError(f"cosine power p must be 0 or 1, got {p!r}")
    if not math.isfinite(eta) or eta < 1.0:
        raise InvalidParamError(f"eta must be finite and >= 1, got {eta!r}")
    if not math.isfinite(q):
        raise InvalidParamError(f"exponent q must be finite, got {q!r}")
    if eta == 1.0 and 2.0 * q + d <= 0.0:
        raise NotIntegrableError(
            f"(1 - cos t)^q sin^(d-1) t diverges at t = 0 for q={q!r}, d={d}: "
            f"need 2q + d - 1 > -1"
        )
    return eta, q, int(p), d


def _folded_integrand(theta: np.ndarray, zeta: float, q: float, p: int, d: int) -> np.ndarray:
    """Folded integrand on (0, pi/2] at eta = 1 + zeta.

    Parametrized by zeta = eta - 1 so callers tracking the branch close to
    eta = 1 keep full relative precision; theta must not contain 0 when
    zeta = 0.
    """
    half = np.sin(0.5 * theta)
    v = 2.0 * half * half  # 1 - cos(theta), no cancellation
    cos_t = 1.0 - v
    a1 = zeta + v
    a2 = (2.0 + zeta) - v
    log_weight = (d - 1) * np.log(np.sin(theta)) if d > 1 else 0.0
    t1 = q * np.log(a1) + log_weight
    t2 = q * np.log(a2) + log_weight
    if p == 0:
        return np.exp(t1) + np.exp(t2)
    # log(a1/a2) two ways: 1 + z with z = -2 cos(t)/a2 is exact algebra but
    # loses v once cos(t) rounds to 1, so it is only used where the ratio is
    # close to 1 (and the plain log difference would cancel).
    z = -2.0 * cos_t / a2
    near_one = z > -0.5
    y = q * np.where(
        near_one,
        np.log1p(np.maximum(z, -0.75)),
        np.log(a1) - np.log(a2),
    )
    direct = y > 700.0  # a1^q dwarfs a2^q; expm1 would overflow
    out = np.where(
        direct,
        np.exp(t1) - np.exp(t2),
        np.exp(t2) * np.expm1(np.minimum(y, 700.0)),
    )
    return out * cos_t


def _kronrod_batch(f, bounds: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Kronrod values and |K15 - G7| estimates for consecutive panels.

    bounds is an increasing array of n + 1 panel edges; one call to f
    covers all 15 n nodes.
    """
    a = bounds[:-1]
    b = bounds[1:]
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    lo = c[:, None] - h[:, None] * _XGK[None, :7]
    hi = c[:, None] + h[:, None] * _XGK[None, :7]
    nodes = np.concatenate([lo, hi, c[:, None]], axis=1)
    fv = f(nodes.ravel()).reshape(nodes.shape)
    pairs = fv[:, :7] + fv[:, 7:14]
    f_c = fv[:, 14]
    kron = h * (_WGK[7] * f_c + pairs @ _WGK[:7])
    gauss = h * (_WG[3] * f_c + pairs[:, 1::2] @ _WG[:3])
    return kron, np.abs(kron - gauss)


def _choose_cut(zeta: float, q: float, d: int) -> float:
    """Dyadic cutoff near t = 0 for the graded seed panels."""
    power = 2.0 * q + d
    if zeta > 0.0:
        # far below the spike scale sqrt(zeta) the integrand is flat, so a
        # (cut/sqrt(zeta))^d ~ 1e-18 slice of the spike is negligible; the
        # power-law cut is kept as well when it is cheaper
        r = power if q < 0.0 else float(d)
        cut = math.sqrt(zeta) * 10.0 ** (-18.0 / d)
        if r > 0.0:
            cut = min(cut, _HALF_PI * math.exp(-18.0 * math.log(10.0) / r))
        return min(max(cut, 1e-300), _HALF_PI / 16.0)
    cut = _HALF_PI * math.exp(-18.0 * math.log(10.0) / power) if power > 0.0 else _MIN_CUT
    # the floor keeps 2 sin^2(t/2) fully precise where it IS the integrand
    return min(max(cut, _MIN_CUT), _HALF_PI / 16.0)


def _tail_below(zeta: float, q: float, p: int, d: int, cut: float) -> tuple[float, float]:
    """Analytic value and error budget for the omitted piece on (0, cut).

    For zeta > 0 the piece is only bounded (value 0, bound in the budget).
    For zeta = 0 it is evaluated: to leading order the folded integrand
    below the cutoff is 2^(-q) t^(2q+d-1) + (-1)^p 2^q t^(d-1), whose
    integral is exact up to a relative O(cut^2) correction absorbed by the
    budget.  That keeps the quadrature usable arbitrarily close to the
    integrability threshold 2q + d = 0, where the true mass concentrates
    at angles far below anything floating point panels can reach.
    """
    power = 2.0 * q + d
    log_cut = math.log(cut)
    if zeta > 0.0:
        log_bounds = []
        if q >= 0.0:
            log_bounds.append(q * math.log(zeta + 0.5 * cut * cut) + d * log_cut - math.log(d))
        else:
            if power > 0.0:
                # (zeta + v)^q <= v^q; the factor covers v <= 1 - cos t there
                log_bounds.append(
                    abs(q) * cut * cut / 6.0
                    - q * math.log(2.0)
                    + power * log_cut
                    - math.log(power)
                )
            log_bounds.append(q * math.log(zeta) + d * log_cut - math.log(d))
        # second fold term: (eta + cos t)^q <= max(1, (eta + 1)^q)
        log_second = d * log_cut - math.log(d) + max(0.0, q * math.log(2.0 + zeta))
        try:
            bound = math.exp(min(log_bounds)) + math.exp(log_second)
        except OverflowError:
            bound = math.inf
        return 0.0, bound
    try:
        t1 = math.exp(-q * math.log(2.0) + power * log_cut) / power
        t2 = 2.0**q * cut**d / d * (1.0 if p == 0 else -1.0)
    except OverflowError:
        return 0.0, math.inf
    return t1 + t2, (abs(t1) + abs(t2)) * cut * cut * (abs(q) + d + 1.0)


def _adaptive_panels(
    f, seeds: np.ndarray, rel_tol: float, err_floor: float, offset: float = 0.0
) -> float:
    """Globally adaptive Gauss-Kronrod refinement over the seed panels.

    offset is a closed-form contribution (the analytic endpoint tail) that
    joins the total; err_floor is the irreducible part of the error budget.
    """
    values, errors = _kronrod_batch(f, seeds)
    total = offset + float(values.sum())
    total_err = float(errors.sum()) + err_floor
    heap = [(-e, i, seeds[i], seeds[i + 1], v) for i, (v, e) in enumerate(zip(values, errors))]
    heapq.heapify(heap)
    counter = len(heap)
    while not total_err <= rel_tol * abs(total):
        if len(heap) >= _MAX_PANELS:
            raise ToleranceNotMetError(
                f"adaptive quadrature stalled at estimated relative error "
                f"{total_err / max(abs(total), 1e-300):.3e} after {len(heap)} panels "
                f"(target {rel_tol:.1e})"
            )
        neg_err, _, pa, pb, pval = heapq.heappop(heap)
        mid = 0.5 * (pa + pb)
        if not pa < mid < pb or -neg_err <= err_floor:
            # The worst panel can no longer reduce the budget: either it sits
            # at floating point resolution or the analytic tail dominates.
            raise ToleranceNotMetError(
                f"adaptive quadrature hit its resolution floor at estimated "
                f"relative error {total_err / max(abs(total), 1e-300):.3e} "
                f"(target {rel_tol:.1e})"
            )
        sub = np.array([pa, mid, pb])
        vals, errs = _kronrod_batch(f, sub)
        total += float(vals.sum()) - pval
        total_err += float(errs.sum()) + neg_err
        heapq.heappush(heap, (-errs[0], counter, pa, mid, vals[0]))
        heapq.heappush(heap, (-errs[1], counter + 1, mid, pb, vals[1]))
        counter += 2
    return total


@lru_cache(maxsize=65536)
def _integral(zeta: float, q: float, p: int, d: int, rel_tol: float) -> float:
    """The family integral at eta = 1 + zeta, keyed by zeta exactly."""
    if zeta == 0.0 and 2.0 * q + d <= 0.0:
        raise NotIntegrableError(
            f"(1 - cos t)^q sin^(d-1) t diverges at t = 0 for q={q!r}, d={d}: "
            f"need 2q + d - 1 > -1"
        )
    f = lambda t: _folded_integrand(t, zeta, q, p, d)
    if zeta >= SINGULAR_SWITCH:
        return _adaptive_panels(f, np.array([0.0, _HALF_PI]), rel_tol, 0.0)
    cut = _choose_cut(zeta, q, d)
    n_dyadic = max(int(math.ceil(math.log2(_HALF_PI / cut))), 1)
    seeds = _HALF_PI * 2.0 ** -np.arange(n_dyadic, -1, -1, dtype=float)
    # the tail joins at the actual lowest panel edge, not the nominal cut
    tail_value, tail_err = _tail_below(zeta, q, p, d, float(seeds[0]))
    return _adaptive_panels(f, seeds, rel_tol, tail_err, offset=tail_value)


def theta_integral(spec: ThetaIntegralSpec, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Evaluate int_0^pi (eta - cos t)^q sin^{d-1} t cos^p t dt.

    Parameters
    ----------
    spec : ThetaIntegralSpec
        eta >= 1, exponent q, cosine power p in {0, 1}, dimension d >= 1.
    rel_tol : float
        Requested relative error, 0 < rel_tol <= 1e-6.

    Raises NotIntegrableError when eta = 1 and 2q + d - 1 <= -1, and
    ToleranceNotMetError when the error estimate cannot reach rel_tol.
    """
    rel_tol = float(rel_tol)
    if not 0.0 < rel_tol <= 1e-6:
        raise InvalidParamError(f"rel_tol must lie in (0, 1e-6], got {rel_tol!r}")
    eta, q, p, d = _check_spec(spec.eta, spec.q, spec.p, spec.d)
    return _integral(eta - 1.0, q, p, d, rel_tol)


def eta1_closed_form(q: float, p: int, d) -> float:
    """Exact Gamma-function value of the eta = 1 integral.

    Substituting 1 - cos t = 2 sin^2(t/2) turns the p = 0 integral into a
    Beta function,

        I0 = 2^(q+d-1) Gamma(q + d/2) Gamma(d/2) / Gamma(q + d),

    and writing cos t = 2 cos^2(t/2) - 1 expresses the p = 1 integral as a
    difference of two such terms, which telescopes to I0 * (-q) / (q + d).
    The Gamma arithmetic is done in log space and exponentiated once.
    """
    _, q, p, d = _check_spec(1.0, q, p, d)
    log_i0 = (
        (q + d - 1.0) * math.log(2.0)
        + math.lgamma(q + 0.5 * d)
        + math.lgamma(0.5 * d)
        - math.lgamma(q + d)
    )
    i0 = math.exp(log_i0)
    if p == 0:
        return i0
    return i0 * (-q) / (q + d)
