"""Type aliases and protocols for meanaudit."""

from __future__ import annotations

from typing import Literal, Union

import numpy as np
from numpy.typing import NDArray

FloatArray = NDArray[np.float64]

Real = Union[float, FloatArray]
"""A scalar or an array of abscissae; functions return the same shape they receive."""

Verdict = Literal["HOLDS", "FAILS", "INCONCLUSIVE"]

Expectation = Literal["HOLDS", "FAILS"]

PrecisionMode = Literal["standard", "oracle"]

ExpectationMode = Literal["strict", "collect", "lenient"]

Relation = Literal["<=", ">="]
