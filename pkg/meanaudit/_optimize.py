"""Golden-section search on a bracket."""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

PHI_RATIO = 2.0 / (1.0 + math.sqrt(5.0))


class GoldenResult(NamedTuple):
    x: float
    value: float
    iterations: int
    converged: bool


def golden_minimize(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    tol: float = 1e-10,
    max_iterations: int = 200,
) -> GoldenResult:
    """Minimize ``f`` on ``[lo, hi]`` assuming unimodality inside the bracket.

    The best point seen (interior probes and both ends) is returned, so the
    result is never worse than the bracket ends.
    """
    x1 = hi - PHI_RATIO * (hi - lo)
    x2 = lo + PHI_RATIO * (hi - lo)
    f1, f2 = f(x1), f(x2)
    best_x, best_f = min(((lo, f(lo)), (hi, f(hi)), (x1, f1), (x2, f2)), key=lambda p: p[1])
    iterations = 0
    while iterations < max_iterations and hi - lo > tol:
        iterations += 1
        if f2 > f1:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - PHI_RATIO * (hi - lo)
            f1 = f(x1)
            probe = (x1, f1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + PHI_RATIO * (hi - lo)
            f2 = f(x2)
            probe = (x2, f2)
        if probe[1] < best_f:
            best_x, best_f = probe
    converged = hi - lo <= tol and not (math.isnan(f1) or math.isnan(f2))
    return GoldenResult(best_x, best_f, iterations, converged)


def golden_maximize(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    tol: float = 1e-10,
    max_iterations: int = 200,
) -> GoldenResult:
    """Maximize ``f`` on ``[lo, hi]``; ``value`` is the maximum."""
    res = golden_minimize(lambda x: -f(x), lo, hi, tol=tol, max_iterations=max_iterations)
    return res._replace(value=-res.value)
