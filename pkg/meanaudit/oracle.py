"""Extended-precision reference evaluations backed by :mod:`mpmath`.

All functions work at :data:`ORACLE_DPS` significant digits (raised near the
removable point ``x = 1`` to absorb cancellation) and return :class:`mpmath.mpf`.
Inputs are binary64 values, converted exactly.
"""

from __future__ import annotations

import math
from typing import Dict, List

from mpmath import mp, mpf

from .exceptions import EvaluationFault, MeanParameterError
from .means import MeanKind, MeanTag, PositivePair

ORACLE_DPS = 50


def _extra_digits(a: mpf, b: mpf) -> int:
    if a == b:
        return 0
    gap = abs(b - a) / max(a, b)
    return max(0, int(-3 * mp.log10(gap)) + 5)


def _named(tag: MeanTag, a: mpf, b: mpf) -> mpf:
    if tag is MeanTag.A:
        return (a + b) / 2
    if tag is MeanTag.G:
        return mp.sqrt(a * b)
    if tag is MeanTag.H:
        return 2 * a * b / (a + b)
    if tag is MeanTag.L:
        return a if a == b else (b - a) / (mp.log(b) - mp.log(a))
    if tag is MeanTag.N1:
        return ((mp.sqrt(a) + mp.sqrt(b)) / 2) ** 2
    if tag is MeanTag.N2:
        return (mp.sqrt(a) + mp.sqrt(b)) / 2 * mp.sqrt((a + b) / 2)
    if tag is MeanTag.N3:
        return (a + mp.sqrt(a * b) + b) / 3
    if tag is MeanTag.S:
        return mp.sqrt((a * a + b * b) / 2)
    raise MeanParameterError(f"{tag.value} requires a parameter")


def _mean(kind: MeanKind, a: mpf, b: mpf) -> mpf:
    if kind.tag is MeanTag.B:
        t = kind.parameter
        if isinstance(t, float):
            return max(a, b) if t > 0 else min(a, b)
        if t == 0:
            return mp.sqrt(a * b)
        tm = mpf(t.numerator) / t.denominator
        return ((a**tm + b**tm) / 2) ** (1 / tm)
    if kind.tag is MeanTag.DP:
        r = mpf(kind.parameter.numerator) / kind.parameter.denominator  # type: ignore[union-attr]
        if a == b:
            return a**r
        return (b ** (r + 1) - a ** (r + 1)) / ((r + 1) * (b - a))
    return _named(kind.tag, a, b)


def mean_value(kind: MeanKind, p: PositivePair, dps: int = ORACLE_DPS) -> mpf:
    """Reference value of ``kind`` at ``p``.

    Example::

        >>> from meanaudit.means import L
        >>> mp.nstr(mean_value(L, PositivePair(1, 4)), 12)
        '2.16404256133'
    """
    a, b = mpf(p.a), mpf(p.b)
    with mp.workdps(dps + _extra_digits(a, b)):
        value = _mean(kind, a, b)
    return value


def k_fn(x: float, dps: int = ORACLE_DPS) -> mpf:
    """Reference value of ``k(x) = [(x+1) ln x - 2(x-1)] / (x^2 (ln x)^3)``."""
    xm = mpf(x)
    with mp.workdps(dps + _extra_digits(mpf(1), xm)):
        if xm == 1:
            return mpf(1) / 6
        t = mp.log(xm)
        value = ((xm + 1) * t - 2 * (xm - 1)) / (xm**2 * t**3)
    return value


def mean_second_derivative(kind: MeanKind, x: float, dps: int = ORACLE_DPS) -> mpf:
    """``d²/dx² mean(1, x)`` in closed form at high precision."""
    xm = mpf(x)
    with mp.workdps(dps):
        tag = kind.tag
        if tag is MeanTag.L:
            return -k_fn(x, dps)
        if tag is MeanTag.A:
            return mpf(0)
        if tag is MeanTag.H:
            return -4 / (1 + xm) ** 3
        if tag is MeanTag.G:
            return -1 / (4 * xm**1.5)
        if tag is MeanTag.N1:
            return -1 / (8 * xm**1.5)
        if tag is MeanTag.N3:
            return -1 / (12 * xm**1.5)
        if tag is MeanTag.N2:
            return -(xm**1.5 + 1) / (4 * xm**1.5 * (2 * xm + 2) ** 1.5)
        if tag is MeanTag.S:
            return 2 / (2 * xm**2 + 2) ** 1.5
    raise MeanParameterError(f"no closed-form derivative for {kind.symbol}")


def numeric_second_derivative(kind: MeanKind, x: float, dps: int = ORACLE_DPS) -> mpf:
    """``d²/dx² mean(1, x)`` by :func:`mpmath.diff`; independent of the closed forms."""
    with mp.workdps(dps + 20):
        value = mp.diff(lambda y: _mean(kind, mpf(1), y), mpf(x), 2)
    return value


def evaluate_expr(node: object, p: PositivePair, dps: int = ORACLE_DPS) -> mpf:
    """Evaluate a claim expression tree at ``p`` with extended precision.

    :raises EvaluationFault: On a negative square-root argument.
    """
    from . import dsl

    a, b = mpf(p.a), mpf(p.b)
    cache: Dict[MeanKind, mpf] = {}

    def walk(n: object) -> mpf:
        if isinstance(n, dsl.Num):
            return mpf(n.value.numerator) / n.value.denominator
        if isinstance(n, dsl.MeanRef):
            if n.kind not in cache:
                cache[n.kind] = _mean(n.kind, a, b)
            return cache[n.kind]
        if isinstance(n, dsl.BinOp):
            left, right = walk(n.left), walk(n.right)
            if n.op == "+":
                return left + right
            if n.op == "-":
                return left - right
            if n.op == "*":
                return left * right
            return left / right
        if isinstance(n, dsl.Pow):
            return walk(n.base) ** n.exponent
        if isinstance(n, dsl.Sqrt):
            arg = walk(n.arg)
            if arg < 0:
                raise EvaluationFault("sqrt of a negative value", witness=(p.a, p.b))
            return mp.sqrt(arg)
        raise TypeError(f"not an expression node: {n!r}")

    with mp.workdps(dps + _extra_digits(a, b)):
        value = walk(node)
    return value


def chain_margins(chain: object, p: PositivePair, dps: int = ORACLE_DPS) -> List[float]:
    """Scale-normalized margins of every comparison in ``chain`` at ``p``."""
    from . import dsl

    assert isinstance(chain, dsl.Chain)
    values = [evaluate_expr(term, p, dps) for term in chain.terms]
    margins: List[float] = []
    with mp.workdps(dps):
        for rel, left, right in zip(chain.relations, values, values[1:]):
            diff = right - left if rel == "<=" else left - right
            scale = max(abs(left), abs(right), mpf(p.a))
            margins.append(float(diff / scale))
    return margins


def is_close(value: float, reference: mpf, rel: float) -> bool:
    """``|value - reference| <= rel * |reference|`` evaluated at oracle precision."""
    if math.isnan(value):
        return False
    with mp.workdps(ORACLE_DPS):
        return abs(mpf(value) - reference) <= rel * abs(reference)
