"""Run configuration shared by the audit, the scans and the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from .exceptions import ConfigError
from .types import PrecisionMode

_PRECISION_MODES = frozenset({"standard", "oracle"})
_SEED_LIMIT = 2**64


def _positive_count(name: str, value: Any, minimum: int = 1) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f"{name} must be an integer >= {minimum}, got {value!r}", field=name)


def _interval(name: str, lo: Any, hi: Any) -> None:
    try:
        lo_f, hi_f = float(lo), float(hi)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} bounds must be real numbers", field=name) from None
    if not (math.isfinite(lo_f) and math.isfinite(hi_f) and 0.0 < lo_f < hi_f):
        raise ConfigError(f"{name} needs 0 < low < high, got [{lo!r}, {hi!r}]", field=name)


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run; identical configs give identical output.

    :param seed: Seed for ``numpy.random.default_rng``; ``0 <= seed < 2**64``.
    :param samples: Log-uniform pairs drawn for each audit.
    :param near_equal_samples: Extra pairs with ``|b/a - 1|`` in ``near_equal_range``;
        defaults to ``samples // 10``.
    :param grid_points: Points of the log grid used by scans.
    :param x_min: Lower end of the scan grid.
    :param x_max: Upper end of the scan grid.
    :param ratio_range: Range of ``b / a`` for the log-uniform pairs.
    :param near_equal_range: Range of ``|b/a - 1|`` for the near-equal pairs.
    :param scale: Factor applied to every sampled pair (homogeneity checks).
    :param precision_mode: ``"oracle"`` adds an extended-precision margin per entry
        and lifts the cap on oracle re-adjudication.
    :param output_path: Where the CLI writes reports and CSV; ``None`` for stdout.
    :param workers: Threads used to audit entries concurrently.
    """

    seed: int = 42
    samples: int = 100_000
    near_equal_samples: Optional[int] = None
    grid_points: int = 10_000
    x_min: float = 1e-6
    x_max: float = 1e6
    ratio_range: Tuple[float, float] = (1e-8, 1e8)
    near_equal_range: Tuple[float, float] = (1e-12, 1e-2)
    scale: float = 1.0
    precision_mode: PrecisionMode = "standard"
    output_path: Optional[Path] = None
    workers: int = 1

    def __post_init__(self) -> None:
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not (
            0 <= self.seed < _SEED_LIMIT
        ):
            raise ConfigError(f"seed must be an integer in [0, 2**64), got {self.seed!r}", field="seed")
        _positive_count("samples", self.samples)
        if self.near_equal_samples is None:
            object.__setattr__(self, "near_equal_samples", self.samples // 10)
        else:
            _positive_count("near_equal_samples", self.near_equal_samples, minimum=0)
        _positive_count("grid_points", self.grid_points, minimum=3)
        _positive_count("workers", self.workers)
        _interval("x range", self.x_min, self.x_max)
        _interval("ratio_range", *self.ratio_range)
        _interval("near_equal_range", *self.near_equal_range)
        if self.near_equal_range[1] >= 1.0:
            raise ConfigError("near_equal_range must stay below 1", field="near_equal_range")
        if not (isinstance(self.scale, (int, float)) and math.isfinite(self.scale) and self.scale > 0):
            raise ConfigError(f"scale must be finite and positive, got {self.scale!r}", field="scale")
        if self.precision_mode not in _PRECISION_MODES:
            raise ConfigError(
                f"invalid precision_mode: {self.precision_mode!r}", field="precision_mode"
            )
        if self.output_path is not None:
            object.__setattr__(self, "output_path", Path(self.output_path))
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "x_max", float(self.x_max))
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "ratio_range", tuple(float(v) for v in self.ratio_range))
        object.__setattr__(
            self, "near_equal_range", tuple(float(v) for v in self.near_equal_range)
        )

    def with_updates(self, **changes: Any) -> "RunConfig":
        """Copy with ``changes`` applied; ``None`` values are ignored.

        Changing ``samples`` without ``near_equal_samples`` re-derives the latter.
        """
        updates = {k: v for k, v in changes.items() if v is not None}
        if "samples" in updates and "near_equal_samples" not in updates:
            updates["near_equal_samples"] = None
        return replace(self, **updates)

    def as_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = list(value)
            elif isinstance(value, Path):
                value = str(value)
            out[f.name] = value
        return out
