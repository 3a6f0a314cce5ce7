"""Executable convexity contract for generating functions.

For a measure with generating function ``f`` the contract is: ``f(1) = f'(1) = 0``,
``f'' >= 0``, and therefore ``0 <= a f(b/a) <= (b - a) f'(b/a)`` for ``b > a > 0``
with ``phi(a, b) = a f(b/a)`` jointly convex on the positive quadrant.
:func:`verify_convexity` checks each part numerically and never raises for a
failed check; it records a witness instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .genfn import (
    MeasurePair,
    first_derivative,
    gen_derivatives,
    generating_function,
    second_derivative,
)
from .types import FloatArray, Real

EPSILON = 1e-12
DEFAULT_FD_STEP = 2e-2
"""Relative step ``h / x`` of the five-point second-difference stencil."""

GRID_BOUNDS = (1e-8, 1e8)
FD_BOUNDS = (1e-3, 1e3)
FD_EXCLUSION = 1e-2


def log_grid(x_min: float, x_max: float, points: int) -> FloatArray:
    """``points`` log-spaced abscissae from ``x_min`` to ``x_max`` inclusive."""
    if not (0.0 < x_min < x_max):
        raise ValueError(f"need 0 < x_min < x_max, got {x_min!r}, {x_max!r}")
    if points < 2:
        raise ValueError("a grid needs at least two points")
    return np.logspace(np.log10(x_min), np.log10(x_max), points)


def _five_point(pair: MeasurePair, x: FloatArray, h: FloatArray) -> FloatArray:
    def f(y: FloatArray) -> FloatArray:
        return np.asarray(generating_function(pair, y))

    return (
        -f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)
    ) / (12 * h * h)


def fd_second_derivative(pair: MeasurePair, x: Real, rel_step: float = DEFAULT_FD_STEP) -> Real:
    """Richardson-extrapolated five-point second difference of ``f`` at ``x``.

    Combines stencils with ``h = x * rel_step`` and ``2h`` so the truncation error
    is sixth order, which allows a step large enough to keep rounding noise from
    ``f`` (a difference of two means of size ``~x``) below the signal.
    """
    arr = np.asarray(x, dtype=float)
    h = arr * rel_step
    values = (16.0 * _five_point(pair, arr, h) - _five_point(pair, arr, 2.0 * h)) / 15.0
    return float(values) if arr.ndim == 0 else values


def _relative_errors(pair: MeasurePair, xs: FloatArray, rel_step: float) -> FloatArray:
    analytic = np.asarray(second_derivative(pair, xs))
    numeric = np.asarray(fd_second_derivative(pair, xs, rel_step))
    scale = np.abs(analytic)
    return np.abs(analytic - numeric) / np.where(scale > 0.0, scale, 1.0)


def fd_cross_check(pair: MeasurePair, x: float, rel_step: float = DEFAULT_FD_STEP) -> float:
    """Relative gap between the closed-form ``f''(x)`` and a finite difference.

    :param x: Must lie in ``[1e-3, 1e3]`` with ``|x - 1| >= 1e-2``.
    :raises ValueError: Outside that range.
    """
    lo, hi = FD_BOUNDS
    if not (lo <= x <= hi) or abs(x - 1.0) < FD_EXCLUSION:
        raise ValueError(f"x={x!r} is outside the cross-check range")
    return float(_relative_errors(pair, np.asarray([x]), rel_step)[0])


@dataclass(frozen=True)
class ConvexityVerdict:
    """Outcome of :func:`verify_convexity` for one measure.

    Witness fields are ``None`` when the matching check passed.
    """

    pair: MeasurePair
    normalization_ok: bool
    f0_at_one: float
    f1_at_one: float
    second_derivative_min: float
    second_derivative_argmin: float
    fd_max_rel_err: float
    fd_worst_x: Optional[float]
    midpoint_violations: int
    midpoint_witness: Optional[Tuple[Tuple[float, float], Tuple[float, float]]]
    eq13_violations: int
    eq13_witness: Optional[Tuple[float, float]]
    fd_tolerance: float = 1e-6

    @property
    def passed(self) -> bool:
        return not self.failures()

    def failures(self) -> List[str]:
        """Human-readable list of failed checks with their witnesses."""
        out: List[str] = []
        if not self.normalization_ok:
            out.append(f"f(1)={self.f0_at_one!r}, f'(1)={self.f1_at_one!r}")
        if self.second_derivative_min < -EPSILON:
            out.append(
                f"f''={self.second_derivative_min!r} at x={self.second_derivative_argmin!r}"
            )
        if self.fd_max_rel_err >= self.fd_tolerance:
            out.append(f"finite difference off by {self.fd_max_rel_err:.3g} at x={self.fd_worst_x!r}")
        if self.eq13_violations:
            out.append(f"{self.eq13_violations} tangent-bound violations, e.g. {self.eq13_witness}")
        if self.midpoint_violations:
            out.append(
                f"{self.midpoint_violations} midpoint violations, e.g. {self.midpoint_witness}"
            )
        return out


def _tangent_bound(pair: MeasurePair, rng: np.random.Generator, n: int) -> Tuple[int, Optional[Tuple[float, float]]]:
    far = n - n // 4
    a = 10.0 ** rng.uniform(-3.0, 3.0, n)
    x = np.concatenate(
        [10.0 ** rng.uniform(0.0, 6.0, far), 1.0 + 10.0 ** rng.uniform(-8.0, -2.0, n - far)]
    )
    lhs = a * np.asarray(generating_function(pair, x))
    rhs = a * (x - 1.0) * np.asarray(first_derivative(pair, x))
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), a)
    bad = (lhs < -EPSILON * scale) | (rhs - lhs < -EPSILON * scale)
    if not bad.any():
        return 0, None
    i = int(np.flatnonzero(bad)[0])
    return int(bad.sum()), (float(a[i]), float(a[i] * x[i]))


def _midpoint(pair: MeasurePair, rng: np.random.Generator, n: int):
    a1, b1, a2, b2 = (10.0 ** rng.uniform(-6.0, 6.0, n) for _ in range(4))
    phi_p = pair.evaluate(a1, b1)
    phi_q = pair.evaluate(a2, b2)
    phi_mid = pair.evaluate(0.5 * (a1 + a2), 0.5 * (b1 + b2))
    scale = np.maximum(np.maximum(a1, b1), np.maximum(a2, b2))
    bad = phi_mid - 0.5 * (phi_p + phi_q) > EPSILON * scale
    if not bad.any():
        return 0, None
    i = int(np.flatnonzero(bad)[0])
    return int(bad.sum()), ((float(a1[i]), float(b1[i])), (float(a2[i]), float(b2[i])))


def verify_convexity(
    pair: MeasurePair,
    grid: Optional[FloatArray] = None,
    *,
    samples: int = 10_000,
    seed: int = 42,
    fd_step: float = DEFAULT_FD_STEP,
) -> ConvexityVerdict:
    """Check the convexity contract of ``pair`` on ``grid`` and random samples.

    :param pair: The measure under test.
    :param grid: Abscissae within ``[1e-8, 1e8]``; defaults to 10⁴ log-spaced
        points over ``[1e-6, 1e6]``.
    :param samples: Number of ordered pairs for the tangent bound and of point
        pairs for midpoint convexity.
    :param seed: Seed for both sample sets.
    :param fd_step: Relative step of the finite-difference cross-check, which runs
        on the grid points inside ``[1e-3, 1e3]`` away from ``x = 1``.
    :raises ValueError: If the grid leaves ``[1e-8, 1e8]``.

    Example::

        >>> from meanaudit.genfn import AL
        >>> verify_convexity(AL).passed
        True
    """
    xs = log_grid(1e-6, 1e6, 10_000) if grid is None else np.asarray(grid, dtype=float)
    lo, hi = GRID_BOUNDS
    if xs.size == 0 or xs.min() < lo or xs.max() > hi:
        raise ValueError("grid must lie within [1e-8, 1e8]")

    at_one = gen_derivatives(pair, 1.0)
    f0_1, f1_1 = float(at_one.f0), float(at_one.f1)

    f2 = np.asarray(second_derivative(pair, xs))
    i_min = int(np.argmin(f2))

    fd_lo, fd_hi = FD_BOUNDS
    fd_xs = xs[(xs >= fd_lo) & (xs <= fd_hi) & (np.abs(xs - 1.0) >= FD_EXCLUSION)]
    if fd_xs.size:
        errors = _relative_errors(pair, fd_xs, fd_step)
        j = int(np.argmax(errors))
        fd_err, fd_x = float(errors[j]), float(fd_xs[j])
    else:
        fd_err, fd_x = 0.0, None

    rng = np.random.default_rng(seed)
    eq13_count, eq13_witness = _tangent_bound(pair, rng, samples)
    mid_count, mid_witness = _midpoint(pair, rng, samples)

    return ConvexityVerdict(
        pair=pair,
        normalization_ok=abs(f0_1) < EPSILON and abs(f1_1) < EPSILON,
        f0_at_one=f0_1,
        f1_at_one=f1_1,
        second_derivative_min=float(f2[i_min]),
        second_derivative_argmin=float(xs[i_min]),
        fd_max_rel_err=fd_err,
        fd_worst_x=fd_x,
        midpoint_violations=mid_count,
        midpoint_witness=mid_witness,
        eq13_violations=eq13_count,
        eq13_witness=eq13_witness,
    )
