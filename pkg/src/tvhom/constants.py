"""Explicit constants for the convolution and homogenization inequalities.

``C(eps)`` is the larger of two regime bounds: a linearization bound that
grows with ``eps`` and a mass-control bound that shrinks with it. The
optimal ``eps`` sits where they cross, and :func:`optimize_c0` finds it by a
grid scan followed by golden-section refinement.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .errors import DeltaTooLarge, NoFeasiblePoint

SQRT2 = math.sqrt(2.0)
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0

REFERENCE_EPS = 0.04439
SERIES_CUTOFF = 1e-2
SERIES_TERMS = 6
GOLDEN_MAX_ITER = 200


def sinh_excess_ratio(t: float) -> float:
    """``(sinh t - t) / t**2`` with a short series near zero."""
    if t < SERIES_CUTOFF:
        # sum_{j>=1} t^(2j-1) / (2j+1)!
        total = 0.0
        term = t / 6.0
        for j in range(1, SERIES_TERMS + 1):
            total += term
            term *= t * t / ((2 * j + 2) * (2 * j + 3))
        return total
    return (math.sinh(t) - t) / (t * t)


def d_rho(rho: float) -> float:
    """Relative size of the nonlinear remainder at quadratic signal ``rho``."""
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    if rho == 0:
        return 0.0
    return math.sqrt((1.0 + 3.0 * rho) * sinh_excess_ratio(rho))


def delta_eps(eps: float) -> float:
    if eps <= 0:
        raise ValueError("eps must be positive")
    t = 2.0 * eps
    return math.sqrt((1.0 + 6.0 * eps) * sinh_excess_ratio(t))


def linearization_branch(eps: float) -> float:
    d = delta_eps(eps)
    if d >= 1.0:
        raise DeltaTooLarge(f"delta({eps!r}) = {d!r} >= 1")
    return (4.0 * SQRT2 + d) / (1.0 - d)


def mass_branch(eps: float) -> float:
    # (1 + e^-eps) / (1 - e^-eps) without cancellation for small eps
    return math.sqrt((2.0 + math.expm1(-eps)) / -math.expm1(-eps))


def c_eps(eps: float) -> float:
    return max(linearization_branch(eps), mass_branch(eps))


@dataclass(frozen=True)
class ConstantsReport:
    eps_star: float
    delta_eps: float
    c_eps: float
    c0_upper: float
    c_lower: float

    def to_json(self) -> dict:
        return asdict(self)


def golden_section_min(f, a: float, b: float, tol: float = 1e-10, max_iter: int = GOLDEN_MAX_ITER):
    """Minimize a unimodal ``f`` on ``[a, b]``.

    Returns ``(x, f(x))`` for the best point evaluated. Ties keep the
    smaller abscissa.
    """
    c = a + INV_PHI2 * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    best = min((fc, c), (fd, d))
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = a + INV_PHI2 * (b - a)
            fc = f(c)
            best = min(best, (fc, c))
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
            best = min(best, (fd, d))
    return best[1], best[0]


def optimize_c0(
    grid_lo: float = 1e-4,
    grid_hi: float = 0.5,
    grid_steps: int = 1000,
    refine_tol: float = 1e-10,
) -> ConstantsReport:
    """Smallest ``C(eps)`` over feasible ``eps`` (those with ``delta(eps) < 1``)."""
    if not (0 < grid_lo <= grid_hi):
        raise ValueError("need 0 < grid_lo <= grid_hi")
    if grid_steps < 10:
        raise ValueError("grid_steps must be at least 10")
    grid = np.linspace(grid_lo, grid_hi, grid_steps)
    values = np.full(grid.size, np.inf)
    for k, eps in enumerate(grid):
        if delta_eps(eps) < 1.0:
            values[k] = c_eps(eps)
    if not np.any(np.isfinite(values)):
        raise NoFeasiblePoint(f"delta(eps) >= 1 on the whole grid [{grid_lo}, {grid_hi}]")
    k = int(np.argmin(values))  # first minimum, i.e. smallest eps on ties
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid.size - 1)]
    # stay inside the feasible set while refining
    while hi > lo and delta_eps(hi) >= 1.0:
        hi = lo + 0.5 * (hi - lo)
    eps_star, c_star = float(grid[k]), float(values[k])
    if hi > lo:
        e, v = golden_section_min(c_eps, lo, hi, refine_tol)
        if v < c_star:
            eps_star, c_star = e, v
    return ConstantsReport(
        eps_star=float(eps_star),
        delta_eps=delta_eps(eps_star),
        c_eps=float(c_star),
        c0_upper=float(c_star),
        c_lower=1.0 / float(c_star),
    )


@lru_cache(maxsize=1)
def default_constants() -> ConstantsReport:
    return optimize_c0()
