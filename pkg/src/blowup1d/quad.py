"""Quadrature for integrands with inverse-square-root endpoint
singularities and algebraically decaying tails, plus the Beta function.

The integrals handled here all look like

    int_1^w  t^q / sqrt(t^{p+1} - 1) dt          (p > 1, w <= +oo)

whose integrand behaves like (t-1)^{-1/2} at the lower endpoint and like
t^{q-(p+1)/2} at infinity.  The endpoint singularity is removed exactly
by the substitution t = 1 + u^2; the infinite tail is truncated at a
point T where the analytic bound

    int_T^oo t^{q-(p+1)/2} dt / sqrt(1 - T^{-(p+1)})

drops below a tenth of the requested tolerance, and that bound is added
to the reported error estimate.  The underlying panel rule is a plain
adaptive Gauss-Kronrod 7-15 scheme with deterministic node placement.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Collection

from .errors import AccuracyError, DomainError

DEFAULT_TOL = 1e-12
DEFAULT_BUDGET = 10**6

# Gauss-Kronrod 7-15 abscissae (nonnegative half) and weights.
_XGK = (
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
)
_WGK = (
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
)
# 7-point Gauss weights, matching _XGK[1], _XGK[3], _XGK[5], _XGK[7].
_WG = (
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
)


@dataclass(frozen=True)
class QuadResult:
    """Value of an integral together with an absolute error estimate and
    the number of integrand evaluations spent."""

    value: float
    error_estimate: float
    evaluations: int


def _gk15(f, a, b):
    """One Gauss-Kronrod 7-15 panel on [a, b].

    Returns (kronrod_value, |kronrod - gauss|); the difference is a
    conservative proxy for the error of the Kronrod value.
    """
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    resk = _WGK[7] * fc
    resg = _WG[3] * fc
    for j in range(7):
        dx = h * _XGK[j]
        f1 = f(c - dx)
        f2 = f(c + dx)
        resk += _WGK[j] * (f1 + f2)
        if j % 2 == 1:
            resg += _WG[j // 2] * (f1 + f2)
    value = resk * h
    return value, abs((resk - resg) * h)


def _adaptive(f, a, b, tol, budget):
    """Adaptive bisection with GK15 panels on the finite interval [a, b].

    Returns (value, error_estimate, evaluations).  Panels are refined
    worst-first until the summed error proxy falls below tol, the
    evaluation budget is exhausted (AccuracyError), or no panel can be
    meaningfully split further.
    """
    if a == b:
        return 0.0, 0.0, 1
    v, e = _gk15(f, a, b)
    evals = 15
    # heap of (-error, insertion_index, a, b, value); index breaks ties
    # deterministically
    heap = [(-e, 0, a, b, v)]
    counter = 1
    total_v, total_e = v, e
    while total_e > tol:
        if evals + 30 > budget:
            raise AccuracyError(
                "quadrature did not converge within the evaluation budget",
                value=total_v,
                error_estimate=total_e,
                evaluations=evals,
            )
        neg_e, _, pa, pb, pv = heapq.heappop(heap)
        pm = 0.5 * (pa + pb)
        if pm <= pa or pm >= pb:
            # interval at floating-point resolution; keep its error
            heapq.heappush(heap, (0.0, counter, pa, pb, pv))
            counter += 1
            if all(item[0] == 0.0 for item in heap):
                break
            continue
        v1, e1 = _gk15(f, pa, pm)
        v2, e2 = _gk15(f, pm, pb)
        evals += 30
        total_v += v1 + v2 - pv
        total_e += e1 + e2 - (-neg_e)
        heapq.heappush(heap, (-e1, counter, pa, pm, v1))
        heapq.heappush(heap, (-e2, counter + 1, pm, pb, v2))
        counter += 2
    # guard against error cancellation in the running sums
    total_v = math.fsum(item[4] for item in heap)
    total_e = math.fsum(-item[0] for item in heap)
    return total_v, total_e, evals


def log_gamma(x: float) -> float:
    """Natural log of the Gamma function for x > 0."""
    if not x > 0:
        raise DomainError("log_gamma requires a positive argument")
    return math.lgamma(x)


def beta(x: float, y: float) -> float:
    """Euler Beta function B(x, y) = Gamma(x)Gamma(y)/Gamma(x+y).

    Evaluated through log-Gamma so that small arguments (which make B
    large) do not overflow intermediate Gamma values.
    """
    if not (x > 0 and y > 0):
        raise DomainError("beta requires positive arguments, got "
                          f"x={x!r}, y={y!r}")
    return math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))


def _tail_cutoff_and_bound(p, q, tol):
    """Truncation point T >= 2 and the analytic bound on the discarded
    tail of int t^q / sqrt(t^{p+1}-1) dt.

    For t >= T the integrand is at most t^{q-(p+1)/2}/sqrt(1-T^{-(p+1)}),
    so the tail is bounded by T^{-gamma}/(gamma*sqrt(1-T^{-(p+1)})) with
    gamma = (p-1)/2 - q > 0.
    """
    gamma = 0.5 * (p - 1) - q
    target = 0.1 * tol

    def bound(T):
        return T ** -gamma / (gamma * math.sqrt(1.0 - T ** -(p + 1)))

    # first guess ignores the sqrt factor, then enlarge until the exact
    # bound is below target
    T = max(2.0, (gamma * target) ** (-1.0 / gamma))
    for _ in range(200):
        if bound(T) <= target:
            break
        T *= 2.0
    return T, bound(T)


def _front_piece(p, q, w_hi, tol, budget, w_lo=1.0):
    """int_{w_lo}^{w_hi} t^q/sqrt(t^{p+1}-1) dt for 1 <= w_lo < w_hi <= 2,
    with the substitution t = 1 + u^2 removing the singularity at t=1."""
    pp1 = p + 1.0

    def g(u):
        u2 = u * u
        den = math.expm1(pp1 * math.log1p(u2))
        return 2.0 * u * (1.0 + u2) ** q / math.sqrt(den)

    return _adaptive(g, math.sqrt(w_lo - 1.0), math.sqrt(w_hi - 1.0), tol, budget)


def _log_piece(p, q, w_lo, w_hi, tol, budget):
    """int_{w_lo}^{w_hi} t^q/sqrt(t^{p+1}-1) dt for 2 <= w_lo < w_hi,
    via t = e^y; the transformed integrand decays like e^{-gamma*y}."""
    pp1 = p + 1.0
    alpha = q + 1.0 - 0.5 * pp1

    def g(y):
        return math.exp(alpha * y) / math.sqrt(-math.expm1(-pp1 * y))

    return _adaptive(g, math.log(w_lo), math.log(w_hi), tol, budget)


def power_tail_integral(p: float, q: float, w: float,
                        tol: float = DEFAULT_TOL,
                        budget: int = DEFAULT_BUDGET) -> QuadResult:
    """int_w^oo t^q / sqrt(t^{p+1} - 1) dt for w > 1.

    Requires p > 1 and q < (p-1)/2 for convergence.  The reported error
    estimate includes the analytic bound on the truncated tail.
    """
    if not p > 1:
        raise DomainError("tail integral requires p > 1")
    if not q < 0.5 * (p - 1):
        raise DomainError("tail integral diverges unless q < (p-1)/2")
    if not w > 1.0:
        raise DomainError("lower limit must exceed 1")
    T, bound = _tail_cutoff_and_bound(p, q, tol)
    value = 0.0
    err = bound
    evals = 0
    if w < 2.0:
        v, e, n = _front_piece(p, q, 2.0, 0.5 * tol, budget, w_lo=w)
        value += v
        err += e
        evals += n
        w_mid = 2.0
    else:
        w_mid = w
    if T > w_mid:
        v, e, n = _log_piece(p, q, w_mid, T, 0.4 * tol, budget - evals)
        value += v
        err += e
        evals += n
    return QuadResult(value, err, max(evals, 1))


def power_front_integral(p: float, q: float, w: float,
                         tol: float = DEFAULT_TOL,
                         budget: int = DEFAULT_BUDGET) -> QuadResult:
    """int_1^w t^q / sqrt(t^{p+1} - 1) dt for finite w > 1."""
    if not p > 1:
        raise DomainError("front integral requires p > 1")
    if not (w > 1.0 and math.isfinite(w)):
        raise DomainError("upper limit must be finite and exceed 1")
    value, err, evals = _front_piece(p, q, min(w, 2.0), 0.5 * tol, budget)
    if w > 2.0:
        v, e, n = _log_piece(p, q, 2.0, w, 0.5 * tol, budget - evals)
        value += v
        err += e
        evals += n
    return QuadResult(value, err, evals)


def tail_moment(p: float, q: float,
                tol: float = DEFAULT_TOL,
                budget: int = DEFAULT_BUDGET) -> QuadResult:
    """int_1^oo t^q / sqrt(t^{p+1} - 1) dt, by adaptive quadrature.

    Converges exactly for q < (p-1)/2; equals
    B((p-2q-1)/(2(p+1)), 1/2)/(p+1) which the test-suite uses as an
    independent cross-check.
    """
    if not p > 1:
        raise DomainError("tail_moment requires p > 1")
    if not q < 0.5 * (p - 1):
        raise DomainError(
            f"tail_moment diverges: q must satisfy q < (p-1)/2 = {0.5 * (p - 1)!r}")
    T, bound = _tail_cutoff_and_bound(p, q, tol)
    v1, e1, n1 = _front_piece(p, q, 2.0, 0.4 * tol, budget)
    value, err, evals = v1, e1 + bound, n1
    if T > 2.0:
        v2, e2, n2 = _log_piece(p, q, 2.0, T, 0.4 * tol, budget - evals)
        value += v2
        err += e2
        evals += n2
    return QuadResult(value, err, evals)


def lp_constant(p: float,
                tol: float = DEFAULT_TOL,
                budget: int = DEFAULT_BUDGET) -> QuadResult:
    """The normalizing constant int_1^oo dt/sqrt(t^{p+1}-1) of the
    blow-up profile's time map, by adaptive quadrature.

    Satisfies (p+1) * L_p = B((p-1)/(2(p+1)), 1/2).
    """
    if not p > 1:
        raise DomainError("lp_constant diverges for p <= 1")
    return tail_moment(p, 0.0, tol, budget)


def lp_constant_beta(p: float) -> float:
    """Closed Beta form of the same constant, B((p-1)/(2(p+1)), 1/2)/(p+1)."""
    if not p > 1:
        raise DomainError("lp_constant diverges for p <= 1")
    return beta(0.5 * (p - 1) / (p + 1), 0.5) / (p + 1)


def integrate_singular(f: Callable[[float], float], a: float, b: float,
                       singular_at: Collection[str] = (),
                       tol: float = DEFAULT_TOL,
                       budget: int = DEFAULT_BUDGET) -> QuadResult:
    """Integrate f over (a, b) with optional inverse-square-root endpoint
    singularities and an optional infinite upper limit.

    singular_at is a subset of {"lower", "upper"}; a declared endpoint is
    handled by the exact substitution x = a + u^2 (resp. b - u^2), which
    turns an (x-a)^{-1/2} blow-up into a bounded integrand.  An infinite
    upper limit (b = math.inf) is mapped onto [0, 1) by x = c + s/(1-s)
    and requires f to decay faster than x^{-1-eps}.  Node placement is
    deterministic, so identical inputs give identical results.
    """
    singular = frozenset(singular_at)
    if not singular <= {"lower", "upper"}:
        raise DomainError("singular_at must be a subset of {'lower', 'upper'}")
    if not math.isfinite(a):
        raise DomainError("lower limit must be finite")
    if not a < b:
        raise DomainError("integration range is empty")

    pieces = []  # (g, lo, hi) on finite intervals
    if math.isinf(b):
        if "upper" in singular:
            raise DomainError("cannot declare a singularity at an infinite endpoint")
        c = a + max(1.0, abs(a))
        if "lower" in singular:
            pieces.append(_sub_lower(f, a, c))
        else:
            pieces.append((f, a, c))

        def g_inf(s):
            om = 1.0 - s
            return f(c + s / om) / (om * om)

        pieces.append((g_inf, 0.0, 1.0))
    else:
        if singular == {"lower", "upper"}:
            m = 0.5 * (a + b)
            pieces.append(_sub_lower(f, a, m))
            pieces.append(_sub_upper(f, m, b))
        elif singular == {"lower"}:
            pieces.append(_sub_lower(f, a, b))
        elif singular == {"upper"}:
            pieces.append(_sub_upper(f, a, b))
        else:
            pieces.append((f, a, b))

    value = 0.0
    err = 0.0
    evals = 0
    per_piece_tol = tol / len(pieces)
    for g, lo, hi in pieces:
        try:
            v, e, n = _adaptive(g, lo, hi, per_piece_tol, budget - evals)
        except AccuracyError as exc:
            raise AccuracyError(
                str(exc),
                value=value + (exc.value or 0.0),
                error_estimate=err + (exc.error_estimate or math.inf),
                evaluations=evals + (exc.evaluations or 0),
            ) from None
        value += v
        err += e
        evals += n
    return QuadResult(value, err, max(evals, 1))


def _sub_lower(f, a, hi):
    """Transform int_a^hi f dx with an (x-a)^{-1/2} singularity at a."""

    def g(u):
        return 2.0 * u * f(a + u * u)

    return g, 0.0, math.sqrt(hi - a)


def _sub_upper(f, lo, b):
    """Transform int_lo^b f dx with a (b-x)^{-1/2} singularity at b."""

    def g(u):
        return 2.0 * u * f(b - u * u)

    return g, 0.0, math.sqrt(b - lo)
