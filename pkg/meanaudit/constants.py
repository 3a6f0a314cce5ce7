"""Best constants between difference measures.

For two measures ``M1`` and ``M2`` with generating functions ``f1`` and ``f2``, the
ratio ``g = f1'' / f2''`` bounds ``M1 / M2``: whenever ``alpha <= g <= beta`` on
``(0, inf)`` and ``f2'' > 0``, ``alpha * M2 <= M1 <= beta * M2`` on every pair.
``g`` extends continuously to ``x = 1`` with a rational value given by the table
of ``m''(1)`` below.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np

from ._optimize import golden_maximize, golden_minimize
from .convexity import EPSILON, log_grid
from .exceptions import ConvergenceWarning, RatioDomainError
from .genfn import AG, AL, N1L, N2L, N3L, SH, SL, SN1, MeasurePair, second_derivative
from .means import A, G, H, L, MeanKind, N1, N2, N3, S
from .sampling import SampleLike, as_sample
from .types import FloatArray, Real

SECOND_DERIVATIVE_AT_ONE: Dict[MeanKind, Fraction] = {
    A: Fraction(0),
    H: Fraction(-1, 2),
    G: Fraction(-1, 4),
    N1: Fraction(-1, 8),
    N3: Fraction(-1, 12),
    N2: Fraction(-1, 16),
    S: Fraction(1, 4),
    L: Fraction(-1, 6),
}

SUP_TOLERANCE = 1e-9
FLAT_TOLERANCE = 1e-13


def curvature_at_one(pair: MeasurePair) -> Fraction:
    """Exact ``f''(1)`` of ``pair``."""
    return SECOND_DERIVATIVE_AT_ONE[pair.upper] - SECOND_DERIVATIVE_AT_ONE[pair.lower]


@dataclass(frozen=True)
class ConstantClaim:
    """A claimed best constant ``M_num <= claimed * M_den``."""

    key: str
    numerator: MeasurePair
    denominator: MeasurePair
    claimed: Fraction
    monotone_pattern: bool
    """Whether ``g`` is claimed to rise on ``(0, 1)`` and fall on ``(1, inf)``."""


CONSTANT_CLAIMS: Tuple[ConstantClaim, ...] = (
    ConstantClaim("SL/AL", SL, AL, Fraction(5, 2), True),
    ConstantClaim("AL/N3L", AL, N3L, Fraction(2), True),
    ConstantClaim("N3L/N1L", N3L, N1L, Fraction(2), True),
    ConstantClaim("SL/N2L", SL, N2L, Fraction(4), True),
    ConstantClaim("N2L/N1L", N2L, N1L, Fraction(5, 2), True),
    ConstantClaim("SH/SL", SH, SL, Fraction(9, 5), False),
    ConstantClaim("AG/AL", AG, AL, Fraction(3, 2), False),
    ConstantClaim("SN1/SL", SN1, SL, Fraction(9, 10), False),
)


def ratio_at_one(num: MeasurePair, den: MeasurePair) -> Fraction:
    """``g(1)`` as an exact rational.

    :raises RatioDomainError: If ``den`` has ``f''(1) = 0``.

    Example::

        >>> ratio_at_one(SL, AL)
        Fraction(5, 2)
    """
    bottom = curvature_at_one(den)
    if bottom == 0:
        raise RatioDomainError(f"{den.label} has zero curvature at x=1", x=1.0)
    return curvature_at_one(num) / bottom


def ratio_curve(num: MeasurePair, den: MeasurePair, xs: Real) -> FloatArray:
    """``f1''(x) / f2''(x)`` over an array of abscissae.

    :raises RatioDomainError: At the first ``x`` where ``f2''(x) <= 0``.
    """
    arr = np.atleast_1d(np.asarray(xs, dtype=float))
    bottom = np.asarray(second_derivative(den, arr))
    bad = ~(bottom > 0.0)
    if bad.any():
        x_bad = float(arr[np.flatnonzero(bad)[0]])
        raise RatioDomainError(f"{den.label} has f''(x) <= 0 at x={x_bad!r}", x=x_bad)
    return np.asarray(second_derivative(num, arr)) / bottom


def ratio_g(num: MeasurePair, den: MeasurePair, x: float) -> float:
    """``g(x) = f1''(x) / f2''(x)``; continuous through ``x = 1``.

    :raises RatioDomainError: If ``f2''(x) <= 0``.
    """
    return float(ratio_curve(num, den, x)[0])


@dataclass(frozen=True)
class RatioProfile:
    """Scan of ``g`` for a numerator/denominator pair.

    ``alpha`` and ``beta`` are the bounds used when transferring to the measures;
    by default ``alpha = 0`` and ``beta = sup``. ``tail_low`` and ``tail_high`` are
    ``g`` at the grid ends and are informational only.
    """

    numerator: MeasurePair
    denominator: MeasurePair
    value_at_one: Fraction
    sup: float
    argmax: float
    inf: float
    arginf: float
    alpha: float
    beta: float
    sign_pattern_ok: bool
    sign_violations: int
    tail_low: float
    tail_high: float
    grid_points: int

    @property
    def bounds_valid(self) -> bool:
        """``alpha <= inf`` and ``beta >= sup`` up to :data:`SUP_TOLERANCE`."""
        return self.alpha <= self.inf + SUP_TOLERANCE and self.beta >= self.sup - SUP_TOLERANCE

    def with_bounds(
        self, alpha: Optional[float] = None, beta: Optional[float] = None
    ) -> "RatioProfile":
        return replace(
            self,
            alpha=self.alpha if alpha is None else float(alpha),
            beta=self.beta if beta is None else float(beta),
        )


def _wrong_slopes(xs: FloatArray, g: FloatArray) -> int:
    slope = np.gradient(g, xs)
    flat = np.abs(slope) * np.gradient(xs) <= FLAT_TOLERANCE * np.abs(g)
    wrong = ((xs < 1.0) & (slope < 0.0)) | ((xs > 1.0) & (slope > 0.0))
    return int(np.count_nonzero(wrong & ~flat))


def _bracket(xs: FloatArray, i: int) -> Tuple[float, float]:
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, xs.size - 1)]
    return math.log(lo), math.log(hi)


def extremum_scan(
    num: MeasurePair,
    den: MeasurePair,
    *,
    x_min: float = 1e-6,
    x_max: float = 1e6,
    points: int = 10_000,
    tol: float = 1e-10,
) -> RatioProfile:
    """Locate the supremum and infimum of ``g`` and check its slope pattern.

    ``g`` is sampled on a log grid, the best grid bracket is refined by golden
    section in ``ln x`` to relative tolerance ``tol``, and the exact value at
    ``x = 1`` joins the candidates.

    :raises RatioDomainError: If the denominator curvature is not positive on the grid.
    """
    xs = log_grid(x_min, x_max, points)
    g = ratio_curve(num, den, xs)
    at_one = ratio_at_one(num, den)
    one = float(at_one)

    def g_of_log(s: float) -> float:
        return ratio_g(num, den, math.exp(s))

    i_max, i_min = int(np.argmax(g)), int(np.argmin(g))
    high = golden_maximize(g_of_log, *_bracket(xs, i_max), tol=tol)
    low = golden_minimize(g_of_log, *_bracket(xs, i_min), tol=tol)
    for res in (high, low):
        if not res.converged:
            warnings.warn(
                f"golden section for {num.label}/{den.label} stopped after {res.iterations} steps",
                ConvergenceWarning,
                stacklevel=2,
            )

    sup, argmax = max(
        ((float(g[i_max]), float(xs[i_max])), (high.value, math.exp(high.x)), (one, 1.0)),
        key=lambda c: c[0],
    )
    inf, arginf = min(
        ((float(g[i_min]), float(xs[i_min])), (low.value, math.exp(low.x)), (one, 1.0)),
        key=lambda c: c[0],
    )
    violations = _wrong_slopes(xs, g)
    return RatioProfile(
        numerator=num,
        denominator=den,
        value_at_one=at_one,
        sup=sup,
        argmax=argmax,
        inf=inf,
        arginf=arginf,
        alpha=0.0,
        beta=sup,
        sign_pattern_ok=violations == 0,
        sign_violations=violations,
        tail_low=float(g[0]),
        tail_high=float(g[-1]),
        grid_points=points,
    )


def apply_ratio_bound(profile: RatioProfile, samples: SampleLike) -> int:
    """Count pairs violating ``alpha * M2 <= M1 <= beta * M2`` beyond tolerance.

    Margins are normalized by ``max(|M1|, |beta * M2|, a)`` and compared with
    ``EPSILON``. The check runs whether or not :attr:`RatioProfile.bounds_valid`
    holds, so it can demonstrate that a too-small ``beta`` fails.
    """
    sample = as_sample(samples)
    m1 = profile.numerator.evaluate(sample.a, sample.b)
    m2 = profile.denominator.evaluate(sample.a, sample.b)
    upper = profile.beta * m2
    lower = profile.alpha * m2
    scale = np.maximum(np.maximum(np.abs(m1), np.abs(upper)), sample.a)
    bad = (upper - m1 < -EPSILON * scale) | (m1 - lower < -EPSILON * scale)
    return int(np.count_nonzero(bad))
