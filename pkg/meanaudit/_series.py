"""Truncated power series for the removable points of the logarithmic family.

Coefficients are exact rationals converted once to binary64. Evaluation is by
Horner's rule and accepts scalars or numpy arrays.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Sequence, Tuple

import numpy as np

from .types import Real

# u/ln(1+u) = sum G_n u^n (Gregory coefficients), valid for |u| < 1.
_GREGORY = (
    Fraction(1),
    Fraction(1, 2),
    Fraction(-1, 12),
    Fraction(1, 24),
    Fraction(-19, 720),
    Fraction(3, 160),
    Fraction(-863, 60480),
    Fraction(275, 24192),
)

LOG_MEAN_WINDOW = 1e-3
"""Relative gap ``u = max/min - 1`` below which :func:`log_mean_ratio` uses the series."""

KERNEL_WINDOW = 0.25
"""``|ln x|`` below which ``k`` and ``L'`` use their series."""

_KERNEL_TERMS = 16


def _floats(coeffs: Sequence[Fraction]) -> Tuple[float, ...]:
    return tuple(float(c) for c in coeffs)


GREGORY_COEFFS = _floats(_GREGORY)

# (x+1)t - 2(x-1) = t^3 * sum (m+1) t^m / (m+3)!  with x = e^t
KERNEL_COEFFS = _floats(
    [Fraction(m + 1, factorial(m + 3)) for m in range(_KERNEL_TERMS)]
)

# x t - x + 1 = t^2 * sum (m+1) t^m / (m+2)!  with x = e^t
SLOPE_COEFFS = _floats(
    [Fraction(m + 1, factorial(m + 2)) for m in range(_KERNEL_TERMS)]
)


def horner(coeffs: Sequence[float], t: Real) -> Real:
    """Evaluate ``sum coeffs[i] * t**i``."""
    acc = np.zeros_like(t, dtype=float) if isinstance(t, np.ndarray) else 0.0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def log_mean_ratio(u: Real) -> Real:
    """Series for ``u / ln(1 + u)``; accurate to ~1e-24 absolute for ``|u| < 1e-3``."""
    return horner(GREGORY_COEFFS, u)


def kernel_series(t: Real) -> Real:
    """``k(e^t) * e^{2t}``, the entire part of the log-mean kernel."""
    return horner(KERNEL_COEFFS, t)


def slope_series(t: Real) -> Real:
    """``L'(e^t) * e^t`` where ``L(x) = (x - 1) / ln x``."""
    return horner(SLOPE_COEFFS, t)
