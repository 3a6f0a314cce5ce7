"""Numerically stable bivariate means on positive reals.

Every mean is evaluated from the ordered pair ``mn = min(a, b)``, ``mx = max(a, b)``
so results are exactly symmetric. Forms avoid the cancellation that the textbook
formulas suffer near ``a = b`` and avoid overflow for large inputs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

import numpy as np

from ._series import LOG_MEAN_WINDOW, log_mean_ratio
from .exceptions import InvalidPairError, MeanOverflowError, MeanParameterError
from .types import FloatArray, Real

GEOMETRIC_CROSSOVER = 1e-9
"""``|t|`` below which the power mean uses the geometric branch."""

Parameter = Union[Fraction, float]


class MeanTag(str, Enum):
    """Identity of a bivariate mean."""

    H = "H"
    G = "G"
    L = "L"
    N1 = "N1"
    N2 = "N2"
    N3 = "N3"
    A = "A"
    S = "S"
    B = "B"
    DP = "DP"


_PARAMETRIC = frozenset({MeanTag.B, MeanTag.DP})
_RATIONAL_RE = re.compile(r"^\s*([+-]?)(?:(inf)|(\d+(?:\.\d+)?)(?:/(\d+))?)\s*$")


def parse_parameter(text: str) -> Parameter:
    """Parse ``"1/2"``, ``"-1"``, ``"0.25"``, ``"inf"`` or ``"-inf"`` exactly.

    :raises MeanParameterError: If ``text`` is not a rational literal.
    """
    m = _RATIONAL_RE.match(text)
    if not m:
        raise MeanParameterError(f"malformed rational {text!r}", parameter=text)
    sign, inf, num, den = m.groups()
    if inf:
        return -math.inf if sign == "-" else math.inf
    value = Fraction(num)
    if den is not None:
        if int(den) == 0:
            raise MeanParameterError(f"zero denominator in {text!r}", parameter=text)
        value /= int(den)
    return -value if sign == "-" else value


def format_parameter(value: Parameter) -> str:
    """Inverse of :func:`parse_parameter` for canonical values."""
    if isinstance(value, float):
        return "-inf" if value < 0 else "inf"
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _normalize_parameter(tag: MeanTag, parameter: object) -> Optional[Parameter]:
    if tag not in _PARAMETRIC:
        if parameter is not None:
            raise MeanParameterError(f"{tag.value} takes no parameter", parameter=parameter)
        return None
    if parameter is None:
        raise MeanParameterError(f"{tag.value} requires a parameter")
    value: Parameter
    if isinstance(parameter, str):
        value = parse_parameter(parameter)
    elif isinstance(parameter, float):
        if math.isnan(parameter):
            raise MeanParameterError("parameter is NaN", parameter=parameter)
        value = parameter if math.isinf(parameter) else Fraction(parameter)
    elif isinstance(parameter, (int, Fraction)):
        value = Fraction(parameter)
    else:
        raise MeanParameterError(f"unsupported parameter {parameter!r}", parameter=parameter)
    if tag is MeanTag.DP:
        if isinstance(value, float) or not (0 < value < 1):
            raise MeanParameterError(
                f"DP requires 0 < r < 1, got {format_parameter(value)}", parameter=value
            )
    return value


@dataclass(frozen=True)
class MeanKind:
    """A bivariate mean: a named mean, ``B[t]`` (order ``t``) or ``DP[r]``.

    Parameters are stored exactly: finite values as :class:`~fractions.Fraction`,
    infinite orders as ``±inf`` floats.

    Example::

        >>> MeanKind(MeanTag.B, "1/2").symbol
        'B[1/2]'
    """

    tag: MeanTag
    parameter: Optional[Parameter] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "tag", MeanTag(self.tag))
        object.__setattr__(
            self, "parameter", _normalize_parameter(self.tag, self.parameter)
        )

    @classmethod
    def power(cls, t: object) -> "MeanKind":
        return cls(MeanTag.B, t)

    @classmethod
    def dp(cls, r: object) -> "MeanKind":
        return cls(MeanTag.DP, r)

    @classmethod
    def from_symbol(cls, text: str) -> "MeanKind":
        """Build a kind from ``"L"``, ``"B[2]"``, ``"DP[1/2]"`` and so on.

        :raises MeanParameterError: For unknown symbols or bad parameters.
        """
        m = re.fullmatch(r"\s*([A-Z][A-Z0-9]*)\s*(?:\[([^\]]*)\])?\s*", text)
        if not m:
            raise MeanParameterError(f"unknown mean {text!r}", parameter=text)
        name, param = m.groups()
        try:
            tag = MeanTag(name)
        except ValueError:
            raise MeanParameterError(f"unknown mean {name!r}", parameter=text) from None
        return cls(tag, param)

    @property
    def is_named(self) -> bool:
        return self.tag not in _PARAMETRIC

    @property
    def symbol(self) -> str:
        if self.parameter is None:
            return self.tag.value
        return f"{self.tag.value}[{format_parameter(self.parameter)}]"

    def __str__(self) -> str:
        return self.symbol


H = MeanKind(MeanTag.H)
G = MeanKind(MeanTag.G)
L = MeanKind(MeanTag.L)
N1 = MeanKind(MeanTag.N1)
N2 = MeanKind(MeanTag.N2)
N3 = MeanKind(MeanTag.N3)
A = MeanKind(MeanTag.A)
S = MeanKind(MeanTag.S)

CHAIN_ORDER: Tuple[MeanKind, ...] = (H, G, L, N1, N3, N2, A, S)
"""Named means in increasing order: ``H <= G <= L <= N1 <= N3 <= N2 <= A <= S``."""

_SPECIAL_ORDERS: Dict[Fraction, MeanKind] = {
    Fraction(-1): H,
    Fraction(0): G,
    Fraction(1, 2): N1,
    Fraction(1): A,
    Fraction(2): S,
}


@dataclass(frozen=True)
class PositivePair:
    """An input pair ``(a, b)`` of finite positive reals."""

    a: float
    b: float

    def __post_init__(self) -> None:
        for name in ("a", "b"):
            raw = getattr(self, name)
            try:
                value = float(raw)
            except (TypeError, ValueError):
                raise InvalidPairError(f"{name} is not a real number: {raw!r}") from None
            if not math.isfinite(value) or value <= 0.0:
                raise InvalidPairError(
                    f"{name} must be finite and positive, got {value!r}", value=value
                )
            object.__setattr__(self, name, value)

    @property
    def ratio(self) -> float:
        return self.b / self.a

    def swapped(self) -> "PositivePair":
        return PositivePair(self.b, self.a)

    def scaled(self, factor: float) -> "PositivePair":
        return PositivePair(self.a * factor, self.b * factor)


def _ordered(a: Real, b: Real) -> Tuple[FloatArray, FloatArray]:
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    if not (np.all(np.isfinite(a_arr)) and np.all(np.isfinite(b_arr))):
        raise InvalidPairError("pair components must be finite")
    if not (np.all(a_arr > 0.0) and np.all(b_arr > 0.0)):
        raise InvalidPairError("pair components must be positive")
    return np.minimum(a_arr, b_arr), np.maximum(a_arr, b_arr)


def _log_mean(mn: FloatArray, mx: FloatArray) -> FloatArray:
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        u = (mx - mn) / mn
        near = mn * u / np.log1p(u)
        far = (mx - mn) / (np.log(mx) - np.log(mn))
        series = mn * log_mean_ratio(u)
    out = np.where(u < 1.0, near, far)
    return np.where(u < LOG_MEAN_WINDOW, series, out)


def _power_mean(t: Parameter, mn: FloatArray, mx: FloatArray) -> FloatArray:
    if isinstance(t, float):
        return (mx if t > 0 else mn).copy()
    special = _SPECIAL_ORDERS.get(t)
    if special is not None:
        return _named(special.tag, mn, mx)
    tf = float(t)
    if abs(tf) < GEOMETRIC_CROSSOVER:
        return np.sqrt(mn) * np.sqrt(mx)
    # B_t = c * ((1 + (other/c)^t) / 2)^(1/t) with c chosen so (other/c)^t <= 1.
    if tf > 0:
        c, ell = mx, np.log(mn) - np.log(mx)
    else:
        c, ell = mn, np.log(mx) - np.log(mn)
    return c * np.exp(np.log1p(np.expm1(tf * ell) / 2.0) / tf)


def _dp_mean(r: Fraction, mn: FloatArray, mx: FloatArray) -> FloatArray:
    rf = float(r)
    s = rf + 1.0
    gap = (mx - mn) / mx
    with np.errstate(divide="ignore", invalid="ignore"):
        quotient = -np.expm1(s * np.log1p(-gap)) / (s * gap)
    # (1 - q^s) / (s (1 - q)) -> 1 as q -> 1, leaving mx^r.
    return np.power(mx, rf) * np.where(gap > 0.0, quotient, 1.0)


def _named(tag: MeanTag, mn: FloatArray, mx: FloatArray) -> FloatArray:
    if tag is MeanTag.A:
        return 0.5 * mn + 0.5 * mx
    if tag is MeanTag.G:
        return np.sqrt(mn) * np.sqrt(mx)
    if tag is MeanTag.H:
        return 2.0 * mn / (1.0 + mn / mx)
    if tag is MeanTag.L:
        return _log_mean(mn, mx)
    root_avg = 0.5 * (np.sqrt(mn) + np.sqrt(mx))
    if tag is MeanTag.N1:
        return root_avg * root_avg
    if tag is MeanTag.N2:
        return root_avg * np.sqrt(0.5 * mn + 0.5 * mx)
    if tag is MeanTag.N3:
        return mn / 3.0 + np.sqrt(mn) * np.sqrt(mx) / 3.0 + mx / 3.0
    if tag is MeanTag.S:
        q = mn / mx
        return mx * np.sqrt(0.5 + 0.5 * q * q)
    raise MeanParameterError(f"{tag.value} requires a parameter")


def evaluate_mean(kind: MeanKind, a: Real, b: Real) -> FloatArray:
    """Vectorized mean evaluation over broadcastable arrays ``a`` and ``b``.

    :raises InvalidPairError: If any component is non-finite or non-positive.
    """
    mn, mx = _ordered(a, b)
    if kind.tag is MeanTag.B:
        return _power_mean(kind.parameter, mn, mx)  # type: ignore[arg-type]
    if kind.tag is MeanTag.DP:
        return _dp_mean(kind.parameter, mn, mx)  # type: ignore[arg-type]
    return _named(kind.tag, mn, mx)


def _scalar(value: FloatArray, kind: MeanKind, p: PositivePair) -> float:
    result = float(value)
    if not math.isfinite(result) or result <= 0.0:
        raise MeanOverflowError(f"{kind.symbol}({p.a!r}, {p.b!r}) is not representable")
    return result


def mean_value(kind: MeanKind, p: PositivePair) -> float:
    """Evaluate one mean at one pair.

    :param kind: Which mean.
    :param p: The input pair.
    :returns: The mean, in ``[min(a, b), max(a, b)]`` for every kind except ``DP``.
    :raises MeanOverflowError: If the value is not a finite positive float
        (only reachable near the subnormal range or for ``DP`` with huge inputs).

    Example::

        >>> round(mean_value(N3, PositivePair(1, 4)), 12)
        2.333333333333
    """
    return _scalar(evaluate_mean(kind, p.a, p.b), kind, p)


def power_mean(t: object, p: PositivePair) -> float:
    """Mean of order ``t``, including ``t = ±inf`` (max/min) and ``t = 0`` (geometric).

    Large ``|t|`` saturates smoothly toward the max/min branch.
    """
    kind = MeanKind.power(t)
    return _scalar(evaluate_mean(kind, p.a, p.b), kind, p)


def dp_mid(r: object, p: PositivePair) -> float:
    """``(b^{r+1} - a^{r+1}) / ((r+1)(b-a))``, equal to ``a^r`` at ``a = b``.

    :raises MeanParameterError: Unless ``0 < r < 1``.
    """
    kind = MeanKind.dp(r)
    return _scalar(evaluate_mean(kind, p.a, p.b), kind, p)
