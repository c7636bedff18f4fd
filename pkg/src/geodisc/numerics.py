"""Shared numeric kernels.

Three primitives used everywhere else in the package: composite quadrature
with divergence detection near an endpoint singularity, bisection for
monotone root problems, and minimization of a periodic objective over the
circle parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

_GAUSS_ORDER = 16
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GAUSS_ORDER)

# A limit is accepted once this many consecutive halvings look Cauchy;
# anything that never manages that within the level budget is reported as
# not converged (the divergence verdict).
_CONVERGENCE_RUN = 3

# No quantity in this package legitimately integrates to anything near this;
# refining past it only risks overflow, so the verdict is settled already.
_VALUE_CAP = 1e50


@dataclass(frozen=True)
class QuadratureResult:
    """Outcome of an endpoint-refined quadrature.

    When ``converged`` is false, ``value`` is the last partial sum and must
    not be used as a limit.
    """

    value: float
    converged: bool
    refinement_levels: int
    estimated_error: float


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    bracket_width: float


def _panel(f: Callable[[float], float], lo: float, hi: float) -> float:
    """Fixed-order Gauss-Legendre on one panel; nodes are strictly interior."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    total = 0.0
    for node, weight in zip(_GL_NODES, _GL_WEIGHTS):
        y = f(mid + half * node)
        if not math.isfinite(y):
            raise ValueError("integrand not finite")
        total += weight * y
    return half * total


def integrate_endpoint(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    max_levels: int = 80,
) -> QuadratureResult:
    """Integrate f over (a, b] where f may blow up as x -> a+.

    Panels shrink geometrically toward ``a``; each new panel halves the lower
    cutoff.  The result converges once the last few halvings each changed the
    running value by less than ``tol`` (relative to max(1, |value|)).  An
    integrand whose halvings keep growing the value past the whole level
    budget is reported with ``converged=False``: the divergence verdict.
    """
    if not (b > a):
        raise ValueError("empty interval")
    if a < 0:
        raise ValueError("lower endpoint must be nonnegative")

    span = b - a
    total = 0.0
    hi = b
    small_run = 0
    last_inc = math.inf
    levels = 0
    for level in range(max_levels):
        lo = a + span * 0.5 ** (level + 1)
        inc = _panel(f, lo, hi)
        total += inc
        hi = lo
        levels = level + 1

        scale = max(1.0, abs(total))
        if abs(inc) < tol * scale:
            small_run += 1
            if small_run >= _CONVERGENCE_RUN:
                return QuadratureResult(total, True, levels, _tail_estimate(inc, last_inc))
        else:
            small_run = 0
        last_inc = inc
        if abs(total) > _VALUE_CAP:
            break  # divergence settled; stop before overflow

    return QuadratureResult(total, False, levels, abs(last_inc))


def _tail_estimate(inc: float, prev_inc: float) -> float:
    """Geometric model of the dropped tail from the last two increments."""
    inc = abs(inc)
    prev = abs(prev_inc)
    if prev > 0 and inc < prev:
        ratio = min(inc / prev, 0.9)
        return inc * ratio / (1.0 - ratio) + inc
    return 2.0 * inc


def integrate_semiinfinite(
    g: Callable[[float], float],
    lower: float,
    tol: float,
    max_levels: int = 400,
) -> QuadratureResult:
    """Integrate g >= 0 over (lower, infinity).

    The head piece handles a possible blow-up at ``lower``; the tail is
    mapped onto a lower-endpoint singularity by u -> 1/u, so each cutoff
    halving doubles the reach toward infinity.  Verdicts combine as in
    :func:`integrate_endpoint`.  The larger default budget lets barely
    integrable power tails (exponents just below -1) reach their limits.
    """
    if lower < 0:
        raise ValueError("lower endpoint must be nonnegative")
    split = max(2.0 * lower, lower + 1.0)
    head = integrate_endpoint(g, lower, split, tol, max_levels)
    tail = integrate_endpoint(
        lambda t: g(1.0 / t) / (t * t), 0.0, 1.0 / split, tol, max_levels
    )
    return QuadratureResult(
        head.value + tail.value,
        head.converged and tail.converged,
        max(head.refinement_levels, tail.refinement_levels),
        head.estimated_error + tail.estimated_error,
    )


def solve_monotone(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    target: float,
    tol: float,
    max_iter: int = 200,
) -> RootResult:
    """Bisect a monotone g on [lo, hi] for g(x) = target.

    Requires a sign change of g - target across the bracket.  Iterates until
    the bracket width is <= tol, then keeps halving (up to ``max_iter``)
    while the residual exceeds tol.
    """
    if not (hi > lo):
        raise ValueError("empty interval")
    flo = g(lo) - target
    fhi = g(hi) - target
    if flo == 0.0:
        return RootResult(lo, 0.0, 0.0)
    if fhi == 0.0:
        return RootResult(hi, 0.0, 0.0)
    if flo * fhi > 0.0:
        raise ValueError("target not bracketed")

    fmid = math.inf
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # bracket at floating-point resolution
        fmid = g(mid) - target
        if fmid == 0.0:
            return RootResult(mid, 0.0, hi - lo)
        if flo * fmid < 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
        if hi - lo <= tol and abs(fmid) <= tol:
            break

    root = 0.5 * (lo + hi)
    return RootResult(root, g(root) - target, hi - lo)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def minimize_on_circle(
    h: Callable[[float], float],
    coarse_n: int = 64,
    refine_tol: float = 1e-10,
) -> tuple[float, float]:
    """Minimize a 2*pi-periodic h: coarse grid scan, then golden-section.

    Deterministic for fixed ``coarse_n``; grid ties break toward the
    smallest theta, and the refined point only wins on a strict improvement.
    """
    if coarse_n < 8:
        raise ValueError("coarse_n must be at least 8")
    step = 2.0 * math.pi / coarse_n
    thetas = step * np.arange(coarse_n)
    values = np.empty(coarse_n)
    for i, theta in enumerate(thetas):
        values[i] = _finite_objective(h, theta)
    best = int(np.argmin(values))  # first occurrence: smallest theta wins
    theta_best = float(thetas[best])
    value_best = float(values[best])

    lo = theta_best - step
    hi = theta_best + step
    wrapped = lambda t: _finite_objective(h, t % (2.0 * math.pi))
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = wrapped(c), wrapped(d)
    for _ in range(200):
        if hi - lo <= refine_tol:
            break
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = wrapped(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = wrapped(d)
    theta_ref = 0.5 * (lo + hi)
    candidates = [(fc, c), (fd, d), (wrapped(theta_ref), theta_ref)]
    value_ref, theta_ref = min(candidates, key=lambda p: p[0])

    if value_ref < value_best:
        return theta_ref % (2.0 * math.pi), value_ref
    return theta_best, value_best


def _finite_objective(h: Callable[[float], float], theta: float) -> float:
    y = h(theta)
    if not math.isfinite(y):
        raise ValueError("objective not finite")
    return y
