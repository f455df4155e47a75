"""Small deterministic 1-D optimizers used by the rate calculations.

Every optimization in this package is one-dimensional and smooth, so a
coarse grid scan followed by golden-section refinement is enough and keeps
results bit-for-bit reproducible across runs.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from .errors import MonotonicityError

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    tol: float = 1e-6,
    coarse: int = 64,
    grid: Sequence[float] | None = None,
) -> tuple[float, float]:
    """Maximize ``func`` on [lo, hi].

    A coarse scan (uniform unless an explicit ``grid`` is given) locates the
    best cell, then golden-section search refines within the neighboring
    cells until the bracket is shorter than ``tol``. The best point ever
    evaluated is returned, so boundary maxima are handled exactly.
    """
    if hi < lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if hi == lo:
        return lo, func(lo)
    if grid is None:
        step = (hi - lo) / (coarse - 1)
        xs = [lo + i * step for i in range(coarse)]
        xs[-1] = hi
    else:
        xs = list(grid)
    vals = [func(x) for x in xs]
    best = max(range(len(xs)), key=vals.__getitem__)
    best_x, best_v = xs[best], vals[best]

    a = xs[max(best - 1, 0)]
    b = xs[min(best + 1, len(xs) - 1)]
    if b <= a:
        return best_x, best_v

    # Standard golden-section with two interior probes.
    x1 = b - INVPHI * (b - a)
    x2 = a + INVPHI * (b - a)
    f1, f2 = func(x1), func(x2)
    while b - a > tol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INVPHI * (b - a)
            f1 = func(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INVPHI * (b - a)
            f2 = func(x2)
    for x, v in ((x1, f1), (x2, f2)):
        if v > best_v:
            best_x, best_v = x, v
    return best_x, best_v


def bisect_decreasing(
    func: Callable[[float], float],
    target: float,
    lo: float,
    hi: float,
    *,
    f_lo: float | None = None,
    f_hi: float | None = None,
    residual_rtol: float = 1e-4,
    max_iter: int = 200,
) -> float:
    """Find x in [lo, hi] with func(x) = target for a decreasing ``func``.

    The endpoint values must straddle the target (func(lo) > target >=
    func(hi)); a violated ordering raises MonotonicityError since the caller
    asserted a decreasing function. Iteration stops once the residual
    |func(x) - target| drops below ``residual_rtol * target`` (or the
    bracket collapses).
    """
    f_lo = func(lo) if f_lo is None else f_lo
    f_hi = func(hi) if f_hi is None else f_hi
    if f_lo < f_hi:
        raise MonotonicityError(
            f"bracket endpoints not decreasing: f({lo}) = {f_lo} < f({hi}) = {f_hi}"
        )
    if not (f_lo > target >= f_hi):
        raise MonotonicityError(
            f"target {target} not bracketed by f({lo}) = {f_lo}, f({hi}) = {f_hi}"
        )
    tol = abs(target) * residual_rtol
    x = hi
    for _ in range(max_iter):
        x = 0.5 * (lo + hi)
        fx = func(x)
        if abs(fx - target) <= tol:
            return x
        if fx > target:
            lo = x
        else:
            hi = x
        if hi - lo <= 1e-15 * max(1.0, abs(hi)):
            return x
    return x
