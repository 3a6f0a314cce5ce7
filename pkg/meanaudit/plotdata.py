"""CSV curves for external plotting.

Every target is a table with ``x`` first, sampled on a log grid, with values
written to 17 significant digits.
"""

from __future__ import annotations

import csv
from typing import Callable, Dict, List, TextIO, Tuple

import numpy as np

from .audit import expression_curve
from .constants import CONSTANT_CLAIMS, ratio_curve
from .convexity import log_grid
from .genfn import CONVEX_PAIRS, k_fn, second_derivative
from .types import FloatArray

T_FUNCTIONS: Dict[str, str] = {
    "T1": "5/3*(A-G) - (S-L)",
    "T2": "(5*A+7*L)/12 - (2*N2+3*L)/5",
    "T3": "(S+5*L)/6 - (2*N2+3*L)/5",
    "T4": "N2 - (5*N3+L)/6",
}

Columns = List[Tuple[str, FloatArray]]


def _second_derivatives(xs: FloatArray) -> Columns:
    return [(f"f2_{p.label}", np.asarray(second_derivative(p, xs))) for p in CONVEX_PAIRS]


def _ratios(xs: FloatArray) -> Columns:
    cols: Columns = []
    for claim in CONSTANT_CLAIMS:
        g = ratio_curve(claim.numerator, claim.denominator, xs)
        name = claim.key.replace("/", "_")
        cols.append((f"g_{name}", g))
        cols.append((f"dg_{name}", np.gradient(g, xs)))
    return cols


def _t_functions(xs: FloatArray) -> Columns:
    return [(name, expression_curve(text, xs)) for name, text in T_FUNCTIONS.items()]


def _kernel(xs: FloatArray) -> Columns:
    return [("k", np.asarray(k_fn(xs)))]


TARGETS: Dict[str, Callable[[FloatArray], Columns]] = {
    "second-derivatives": _second_derivatives,
    "ratios": _ratios,
    "t-functions": _t_functions,
    "k": _kernel,
}


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def write_plot_data(
    target: str,
    out: TextIO,
    *,
    x_min: float = 1e-6,
    x_max: float = 1e6,
    points: int = 10_000,
) -> int:
    """Write the CSV for ``target`` to ``out``.

    :param target: One of :data:`TARGETS`.
    :returns: Number of data rows written.
    :raises KeyError: For an unknown target.
    """
    if target not in TARGETS:
        raise KeyError(f"unknown plot target {target!r}; choose from {', '.join(TARGETS)}")
    xs = log_grid(x_min, x_max, points)
    columns = TARGETS[target](xs)
    writer = csv.writer(out, lineterminator="\r\n")
    writer.writerow(["x"] + [name for name, _ in columns])
    for i, x in enumerate(xs):
        writer.writerow([_fmt(x)] + [_fmt(col[i]) for _, col in columns])
    return int(xs.size)
