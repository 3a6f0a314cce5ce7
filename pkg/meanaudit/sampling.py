"""Seeded sample sets of positive pairs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple, Union

import numpy as np

from .exceptions import InvalidPairError
from .means import PositivePair
from .types import FloatArray


@dataclass(frozen=True)
class PairSample:
    """Parallel arrays of first and second components; every entry is positive."""

    a: FloatArray
    b: FloatArray

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if a.shape != b.shape or a.ndim != 1:
            raise ValueError("a and b must be one-dimensional arrays of equal length")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b)) and np.all(a > 0) and np.all(b > 0)):
            raise InvalidPairError("sample components must be finite and positive")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_pairs(cls, pairs: Iterable[PositivePair]) -> "PairSample":
        items = list(pairs)
        return cls(np.array([p.a for p in items]), np.array([p.b for p in items]))

    def __len__(self) -> int:
        return int(self.a.size)

    def __iter__(self) -> Iterator[PositivePair]:
        for a, b in zip(self.a, self.b):
            yield PositivePair(float(a), float(b))

    def pair(self, i: int) -> PositivePair:
        return PositivePair(float(self.a[i]), float(self.b[i]))

    def scaled(self, factor: float) -> "PairSample":
        return PairSample(self.a * factor, self.b * factor)

    def concat(self, other: "PairSample") -> "PairSample":
        return PairSample(np.concatenate([self.a, other.a]), np.concatenate([self.b, other.b]))


SampleLike = Union[PairSample, Iterable[PositivePair]]


def as_sample(samples: SampleLike) -> PairSample:
    return samples if isinstance(samples, PairSample) else PairSample.from_pairs(samples)


def _bases(rng: np.random.Generator, n: int) -> FloatArray:
    return 10.0 ** rng.uniform(-3.0, 3.0, n)


def log_uniform_pairs(
    rng: np.random.Generator, n: int, ratio_range: Tuple[float, float]
) -> PairSample:
    """``a`` log-uniform in ``[1e-3, 1e3]``; ``b / a`` log-uniform in ``ratio_range``."""
    lo, hi = np.log10(ratio_range[0]), np.log10(ratio_range[1])
    a = _bases(rng, n)
    return PairSample(a, a * 10.0 ** rng.uniform(lo, hi, n))


def near_equal_pairs(
    rng: np.random.Generator, n: int, gap_range: Tuple[float, float]
) -> PairSample:
    """``b = a (1 + u)`` with ``|u|`` log-uniform in ``gap_range`` and a random sign."""
    lo, hi = np.log10(gap_range[0]), np.log10(gap_range[1])
    a = _bases(rng, n)
    u = 10.0 ** rng.uniform(lo, hi, n) * rng.choice((-1.0, 1.0), n)
    return PairSample(a, a * (1.0 + u))


def draw_pairs(
    seed: int,
    samples: int,
    near_equal: int,
    ratio_range: Tuple[float, float] = (1e-8, 1e8),
    gap_range: Tuple[float, float] = (1e-12, 1e-2),
    scale: float = 1.0,
) -> PairSample:
    """The audit sample: ``samples`` spread pairs followed by ``near_equal`` close ones."""
    rng = np.random.default_rng(seed)
    spread = log_uniform_pairs(rng, samples, ratio_range)
    close = near_equal_pairs(rng, near_equal, gap_range)
    return spread.concat(close).scaled(scale)
