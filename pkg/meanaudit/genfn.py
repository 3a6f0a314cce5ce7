"""Generating functions of difference measures and their derivatives.

A difference measure ``M_XY(a, b) = X(a, b) - Y(a, b)`` of two chain-ordered
means is homogeneous of degree one, so ``M_XY(a, b) = a * f(b / a)`` with
``f(x) = m_X(x) - m_Y(x)`` and ``m(x) = mean(1, x)``. Derivatives of ``f`` are
built from closed-form derivatives of each mean rather than per pair.

Every function here accepts a float or a numpy array for ``x`` and returns the
same shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import numpy as np

from ._series import KERNEL_WINDOW, kernel_series, slope_series
from .exceptions import MeanParameterError
from .means import (
    CHAIN_ORDER,
    A,
    G,
    H,
    L,
    MeanKind,
    MeanTag,
    N1,
    N2,
    N3,
    PositivePair,
    S,
    evaluate_mean,
)
from .types import FloatArray, Real


def _as_array(x: Real) -> Tuple[FloatArray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _unwrap(values: FloatArray, scalar: bool) -> Real:
    return float(values) if scalar else values


def _kernel(x: FloatArray) -> FloatArray:
    t = np.log(x)
    inv = 1.0 / x
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = ((1.0 + inv) * t - 2.0 * (1.0 - inv)) / (x * t**3)
    return np.where(np.abs(t) < KERNEL_WINDOW, kernel_series(t) * inv * inv, direct)


def k_fn(x: Real) -> Real:
    """``k(x) = [(x+1) ln x - 2(x-1)] / (x² (ln x)³)`` with ``k(1) = 1/6``.

    Near ``x = 1`` (``|ln x| < 1/4``) the exact Taylor series in ``ln x`` is used.

    Example::

        >>> k_fn(1.0)
        0.16666666666666666
    """
    arr, scalar = _as_array(x)
    return _unwrap(_kernel(arr), scalar)


def _log_slope(x: FloatArray) -> FloatArray:
    t = np.log(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = (x * t - x + 1.0) / (x * t * t)
    return np.where(np.abs(t) < KERNEL_WINDOW, slope_series(t) / x, direct)


def _n2_first(x: FloatArray) -> FloatArray:
    r = np.sqrt(x)
    v = np.sqrt(0.5 + 0.5 * x)
    return v / (4.0 * r) + (1.0 + r) / (8.0 * v)


def _s_first(x: FloatArray) -> FloatArray:
    return x / (2.0 * np.sqrt(0.5 + 0.5 * x * x))


_FIRST: Dict[MeanTag, Callable[[FloatArray], FloatArray]] = {
    MeanTag.A: lambda x: np.full_like(x, 0.5),
    MeanTag.H: lambda x: 2.0 / (1.0 + x) ** 2,
    MeanTag.G: lambda x: 0.5 / np.sqrt(x),
    MeanTag.N1: lambda x: 0.25 + 0.25 / np.sqrt(x),
    MeanTag.N3: lambda x: (1.0 + 0.5 / np.sqrt(x)) / 3.0,
    MeanTag.N2: _n2_first,
    MeanTag.S: _s_first,
    MeanTag.L: _log_slope,
}

_SECOND: Dict[MeanTag, Callable[[FloatArray], FloatArray]] = {
    MeanTag.A: lambda x: np.zeros_like(x),
    MeanTag.H: lambda x: -4.0 / (1.0 + x) ** 3,
    MeanTag.G: lambda x: -1.0 / (4.0 * x**1.5),
    MeanTag.N1: lambda x: -1.0 / (8.0 * x**1.5),
    MeanTag.N3: lambda x: -1.0 / (12.0 * x**1.5),
    MeanTag.N2: lambda x: -(x**1.5 + 1.0) / (4.0 * x**1.5 * (2.0 * x + 2.0) ** 1.5),
    MeanTag.S: lambda x: 2.0 / (2.0 * x * x + 2.0) ** 1.5,
    MeanTag.L: lambda x: -_kernel(x),
}


def _derivative_table(
    table: Dict[MeanTag, Callable[[FloatArray], FloatArray]], kind: MeanKind
) -> Callable[[FloatArray], FloatArray]:
    if not kind.is_named:
        raise MeanParameterError(
            f"derivatives are defined for named means only, not {kind.symbol}",
            parameter=kind.parameter,
        )
    return table[kind.tag]


def mean_first_derivative(kind: MeanKind, x: Real) -> Real:
    """``m'(x)`` for ``m(x) = mean(1, x)``; every named mean has ``m'(1) = 1/2``."""
    arr, scalar = _as_array(x)
    return _unwrap(_derivative_table(_FIRST, kind)(arr), scalar)


def mean_second_derivative(kind: MeanKind, x: Real) -> Real:
    """``m''(x)`` in closed form.

    ``A'' = 0``, ``H'' = -4/(1+x)³``, ``G'' = -1/(4x^{3/2})``, ``N1'' = -1/(8x^{3/2})``,
    ``N3'' = -1/(12x^{3/2})``, ``N2'' = -(x^{3/2}+1)/(4x^{3/2}(2x+2)^{3/2})``,
    ``S'' = 2/(2x²+2)^{3/2}`` and ``L'' = -k(x)``.

    :raises MeanParameterError: For ``B[t]`` and ``DP[r]``.
    """
    arr, scalar = _as_array(x)
    return _unwrap(_derivative_table(_SECOND, kind)(arr), scalar)


@dataclass(frozen=True)
class MeasurePair:
    """Difference measure ``M = upper - lower`` between two named means.

    ``upper == lower`` is allowed and gives the zero measure; only
    :func:`register_pair` insists on strict chain order.
    """

    upper: MeanKind
    lower: MeanKind

    def __post_init__(self) -> None:
        for kind in (self.upper, self.lower):
            if kind not in CHAIN_ORDER:
                raise MeanParameterError(
                    f"difference measures use named means, not {kind.symbol}",
                    parameter=kind.parameter,
                )

    @property
    def label(self) -> str:
        return f"{self.upper.symbol}{self.lower.symbol}"

    @property
    def degenerate(self) -> bool:
        return self.upper == self.lower

    @property
    def chain_ordered(self) -> bool:
        return CHAIN_ORDER.index(self.upper) > CHAIN_ORDER.index(self.lower)

    def evaluate(self, a: Real, b: Real) -> FloatArray:
        """``upper(a, b) - lower(a, b)`` over arrays."""
        return evaluate_mean(self.upper, a, b) - evaluate_mean(self.lower, a, b)

    def __str__(self) -> str:
        return self.label


PAIRS: Dict[str, MeasurePair] = {}
"""Registered measures keyed by label (``"SL"``, ``"N2L"``, ``"SN1"`` ...)."""


def register_pair(upper: MeanKind, lower: MeanKind) -> MeasurePair:
    """Create and register ``upper - lower``.

    :raises ValueError: Unless ``upper`` strictly follows ``lower`` in the chain
        ``H <= G <= L <= N1 <= N3 <= N2 <= A <= S``.
    """
    pair = MeasurePair(upper, lower)
    if not pair.chain_ordered:
        raise ValueError(f"{upper.symbol} does not dominate {lower.symbol}")
    PAIRS[pair.label] = pair
    return pair


SL = register_pair(S, L)
AL = register_pair(A, L)
N2L = register_pair(N2, L)
N3L = register_pair(N3, L)
N1L = register_pair(N1, L)
SH = register_pair(S, H)
AG = register_pair(A, G)
SN1 = register_pair(S, N1)

for _upper, _lower in (
    (S, A),
    (A, H),
    (S, G),
    (S, N3),
    (S, N2),
    (A, N3),
    (A, N1),
    (N2, N1),
    (N3, N1),
    (N2, N3),
):
    register_pair(_upper, _lower)

CONVEX_PAIRS: Tuple[MeasurePair, ...] = (SL, AL, N2L, N3L, N1L, SH, AG, SN1)
"""The eight measures whose generating functions are claimed convex."""


def measure_pair(label: str) -> MeasurePair:
    """Look up a registered measure by label, or build ``"X-Y"`` (not registered).

    :raises KeyError: For an unknown label.
    """
    if label in PAIRS:
        return PAIRS[label]
    if "-" in label:
        upper, lower = label.split("-", 1)
        return MeasurePair(MeanKind.from_symbol(upper), MeanKind.from_symbol(lower))
    raise KeyError(f"unknown measure {label!r}")


@dataclass(frozen=True)
class GenDerivatives:
    """``f``, ``f'`` and ``f''`` at one abscissa or over an array of abscissae."""

    f0: Real
    f1: Real
    f2: Real


def generating_function(pair: MeasurePair, x: Real) -> Real:
    """``f(x) = m_X(x) - m_Y(x)``."""
    arr, scalar = _as_array(x)
    return _unwrap(pair.evaluate(1.0, arr), scalar)


def first_derivative(pair: MeasurePair, x: Real) -> Real:
    arr, scalar = _as_array(x)
    values = _FIRST[pair.upper.tag](arr) - _FIRST[pair.lower.tag](arr)
    return _unwrap(values, scalar)


def second_derivative(pair: MeasurePair, x: Real) -> Real:
    arr, scalar = _as_array(x)
    values = _SECOND[pair.upper.tag](arr) - _SECOND[pair.lower.tag](arr)
    return _unwrap(values, scalar)


def gen_derivatives(pair: MeasurePair, x: Real) -> GenDerivatives:
    """All three of ``f(x)``, ``f'(x)`` and ``f''(x)``.

    Example::

        >>> d = gen_derivatives(SL, 1.0)
        >>> (d.f0, d.f1, round(d.f2, 15))
        (0.0, 0.0, 0.416666666666667)
    """
    return GenDerivatives(
        f0=generating_function(pair, x),
        f1=first_derivative(pair, x),
        f2=second_derivative(pair, x),
    )


def phi_lift(pair: MeasurePair, p: PositivePair) -> float:
    """``a * f(b / a)``, which equals ``M_XY(a, b)`` by homogeneity."""
    return p.a * float(generating_function(pair, p.b / p.a))
