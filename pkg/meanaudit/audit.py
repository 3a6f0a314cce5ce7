"""Auditing claims on seeded samples.

A comparison ``left <= right`` at a pair ``(a, b)`` has margin
``(right - left) / max(|left|, |right|, a)``; for ``>=`` the sides swap. A claim
is satisfied at a pair when every margin is at least ``-EPSILON``.

Tolerance policy:

* a margin below ``-10 * EPSILON`` is a strong violation; one strong violation
  (or an evaluation fault) makes the verdict ``FAILS``;
* a margin in ``[-10 * EPSILON, -EPSILON)`` is weak and is re-evaluated with the
  extended-precision oracle, which may confirm, strengthen or overturn it;
* weak violations that survive re-evaluation give ``INCONCLUSIVE``.
"""

from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import oracle
from .config import RunConfig
from .convexity import EPSILON, log_grid
from .dsl import BinOp, Chain, MeanCache, Node, evaluate, parse_expression, pretty
from .exceptions import (
    AuditWarning,
    EvaluationFault,
    ExpectationMismatch,
    MultipleExpectationMismatches,
)
from .means import PositivePair
from .sampling import PairSample, draw_pairs
from .suite import ClaimEntry
from .types import Expectation, ExpectationMode, FloatArray, Real, Verdict

STRONG_FACTOR = 10.0
WITNESS_STEPS = 60
ORACLE_BUDGET = 256
"""Weak violations re-evaluated per entry in standard precision mode."""

_EXPECTATION_MODES = frozenset({"strict", "collect", "lenient"})


def chain_margins(
    chain: Chain, a: Real, b: Real, cache: Optional[MeanCache] = None
) -> FloatArray:
    """Scale-normalized margins, shape ``(len(chain.relations), n)``.

    NaN marks a pair where a term is undefined.
    """
    memo: MeanCache = {} if cache is None else cache
    a_arr = np.atleast_1d(np.asarray(a, dtype=float))
    values = [np.broadcast_to(evaluate(t, a, b, memo), a_arr.shape) for t in chain.terms]
    rows = []
    with np.errstate(invalid="ignore"):
        for rel, left, right in zip(chain.relations, values, values[1:]):
            diff = right - left if rel == "<=" else left - right
            scale = np.maximum(np.maximum(np.abs(left), np.abs(right)), a_arr)
            row = diff / scale
            row[~(np.isfinite(left) & np.isfinite(right))] = np.nan
            rows.append(row)
    return np.vstack(rows)


def eval_claim(ast: Chain, p: PositivePair) -> List[float]:
    """Margins of each comparison in ``ast`` at ``p``.

    :raises EvaluationFault: If a term is undefined at ``p`` (for example a
        negative square-root argument).

    Example::

        >>> from meanaudit.dsl import parse_claim
        >>> eval_claim(parse_claim("A <= A"), PositivePair(1, 4))
        [0.0]
    """
    margins = chain_margins(ast, p.a, p.b)[:, 0]
    if not np.all(np.isfinite(margins)):
        raise EvaluationFault("claim is undefined at this pair", witness=(p.a, p.b))
    return [float(m) for m in margins]


def _worst_margin(ast: Chain, p: PositivePair, use_oracle: bool = False) -> float:
    try:
        if use_oracle:
            return min(oracle.chain_margins(ast, p))
        return min(eval_claim(ast, p))
    except EvaluationFault:
        return -math.inf


def minimize_witness(
    ast: Chain, p: PositivePair, *, use_oracle: bool = False
) -> Tuple[PositivePair, float]:
    """Move a strong violation toward ``a = b`` along ``b = a * x**s``.

    Bisection on ``s`` in ``(0, 1]`` keeps the smallest ``s`` found that still
    violates by more than ``10 * EPSILON``; ``p`` itself must violate. With
    ``use_oracle`` every margin comes from the extended-precision oracle.
    """
    threshold = -STRONG_FACTOR * EPSILON
    log_x = math.log(p.b / p.a)
    lo, hi = 0.0, 1.0
    best, best_margin = p, _worst_margin(ast, p, use_oracle)
    for _ in range(WITNESS_STEPS):
        mid = 0.5 * (lo + hi)
        candidate = PositivePair(p.a, p.a * math.exp(mid * log_x))
        margin = _worst_margin(ast, candidate, use_oracle)
        if math.isfinite(margin) and margin < threshold:
            hi, best, best_margin = mid, candidate, margin
        else:
            lo = mid
    return best, best_margin


@dataclass(frozen=True)
class EntryResult:
    """Audit outcome for one suite entry."""

    id: str
    source: str
    expectation: Expectation
    verdict: Verdict
    min_margin: Optional[float]
    min_margin_pair: Optional[Tuple[float, float]]
    witness: Optional[Tuple[float, float]]
    witness_margin: Optional[float]
    samples: int
    violations: int
    strong_violations: int
    faults: int
    oracle_adjudicated: int
    oracle_min_margin: Optional[float] = None

    @property
    def met(self) -> bool:
        return self.verdict == self.expectation

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "source": self.source,
            "expectation": self.expectation,
            "verdict": self.verdict,
            "met": self.met,
            "min_margin": self.min_margin,
            "min_margin_pair": list(self.min_margin_pair) if self.min_margin_pair else None,
            "witness": list(self.witness) if self.witness else None,
            "witness_margin": self.witness_margin,
            "samples": self.samples,
            "violations": self.violations,
            "strong_violations": self.strong_violations,
            "faults": self.faults,
            "oracle_adjudicated": self.oracle_adjudicated,
            "oracle_min_margin": self.oracle_min_margin,
        }


@dataclass(frozen=True)
class AuditReport:
    """Per-entry results plus the settings that produced them."""

    seed: int
    samples: int
    near_equal_samples: int
    ratio_range: Tuple[float, float]
    near_equal_range: Tuple[float, float]
    scale: float
    precision_mode: str
    entries: Tuple[EntryResult, ...] = field(default_factory=tuple)

    @property
    def mismatches(self) -> List[EntryResult]:
        return [e for e in self.entries if not e.met]

    @property
    def all_met(self) -> bool:
        return not self.mismatches

    def entry(self, claim_id: str) -> EntryResult:
        for e in self.entries:
            if e.id == claim_id:
                return e
        raise KeyError(claim_id)

    def to_dict(self) -> Dict[str, Any]:
        """Plain data in a fixed key order."""
        return {
            "seed": self.seed,
            "samples": self.samples,
            "near_equal_samples": self.near_equal_samples,
            "ratio_range": list(self.ratio_range),
            "near_equal_range": list(self.near_equal_range),
            "scale": self.scale,
            "precision_mode": self.precision_mode,
            "tolerance": {
                "epsilon": EPSILON,
                "strong_factor": STRONG_FACTOR,
                "normalization": "max(|left|, |right|, a)",
            },
            "entries": [e.to_dict() for e in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"


def _pair_at(sample: PairSample, i: int) -> Tuple[float, float]:
    return float(sample.a[i]), float(sample.b[i])


def _adjudicate(
    entry: ClaimEntry, sample: PairSample, indices: FloatArray
) -> Tuple[int, int, int, Optional[int]]:
    """Oracle verdict on weak violations: ``(confirmed, strong, faults, worst_index)``."""
    confirmed = strong = faults = 0
    worst: Optional[int] = None
    worst_margin = math.inf
    for i in indices:
        p = sample.pair(int(i))
        try:
            margin = min(oracle.chain_margins(entry.ast, p))
        except EvaluationFault:
            faults += 1
            worst = int(i) if worst is None else worst
            continue
        if margin < -STRONG_FACTOR * EPSILON:
            strong += 1
            if margin < worst_margin:
                worst, worst_margin = int(i), margin
        elif margin < -EPSILON:
            confirmed += 1
    return confirmed, strong, faults, worst


def audit_entry(
    entry: ClaimEntry,
    sample: PairSample,
    *,
    precision_mode: str = "standard",
    cache: Optional[MeanCache] = None,
) -> EntryResult:
    """Audit one entry on a fixed sample."""
    margins = chain_margins(entry.ast, sample.a, sample.b, cache)
    worst = margins.min(axis=0)
    fault_mask = np.isnan(worst)
    finite = np.where(fault_mask, np.inf, worst)
    strong_mask = finite < -STRONG_FACTOR * EPSILON
    weak_mask = (finite < -EPSILON) & ~strong_mask

    faults = int(fault_mask.sum())
    strong = int(strong_mask.sum())
    weak = int(weak_mask.sum())
    adjudicated = 0
    witness_index: Optional[int] = None
    oracle_witness = False

    if faults:
        witness_index = int(np.flatnonzero(fault_mask)[0])
    elif strong:
        witness_index = int(np.argmin(finite))
    elif weak:
        weak_idx = np.flatnonzero(weak_mask)
        budget = weak_idx if precision_mode == "oracle" else weak_idx[:ORACLE_BUDGET]
        confirmed, o_strong, o_faults, o_worst = _adjudicate(entry, sample, budget)
        adjudicated = int(budget.size)
        overturned = adjudicated - confirmed - o_strong - o_faults
        weak = weak - adjudicated + confirmed
        strong, faults = o_strong, o_faults
        witness_index = o_worst
        oracle_witness = o_strong > 0
        if overturned:
            warnings.warn(
                f"{entry.id}: oracle overturned {overturned} binary64 violation(s)",
                AuditWarning,
                stacklevel=2,
            )

    if faults or strong:
        verdict: Verdict = "FAILS"
    elif weak:
        verdict = "INCONCLUSIVE"
    else:
        verdict = "HOLDS"

    witness: Optional[Tuple[float, float]] = None
    witness_margin: Optional[float] = None
    if witness_index is not None:
        p = sample.pair(witness_index)
        if faults:
            witness = (p.a, p.b)
        else:
            best, witness_margin = minimize_witness(entry.ast, p, use_oracle=oracle_witness)
            witness = (best.a, best.b)

    min_margin: Optional[float] = None
    min_pair: Optional[Tuple[float, float]] = None
    if not fault_mask.all():
        i_min = int(np.argmin(finite))
        min_margin, min_pair = float(finite[i_min]), _pair_at(sample, i_min)

    oracle_min: Optional[float] = None
    if precision_mode == "oracle" and min_pair is not None:
        try:
            oracle_min = min(oracle.chain_margins(entry.ast, PositivePair(*min_pair)))
        except EvaluationFault:
            oracle_min = None

    return EntryResult(
        id=entry.id,
        source=entry.source,
        expectation=entry.expectation,
        verdict=verdict,
        min_margin=min_margin,
        min_margin_pair=min_pair,
        witness=witness,
        witness_margin=witness_margin,
        samples=len(sample),
        violations=faults + strong + weak,
        strong_violations=strong,
        faults=faults,
        oracle_adjudicated=adjudicated,
        oracle_min_margin=oracle_min,
    )


def audit_sample(config: RunConfig) -> PairSample:
    """The pairs :func:`run_audit` evaluates for ``config``."""
    return draw_pairs(
        config.seed,
        config.samples,
        config.near_equal_samples or 0,
        ratio_range=config.ratio_range,
        gap_range=config.near_equal_range,
        scale=config.scale,
    )


def run_audit(
    suite: Sequence[ClaimEntry],
    config: Optional[RunConfig] = None,
    *,
    sample: Optional[PairSample] = None,
) -> AuditReport:
    """Audit every entry of ``suite`` on the seeded sample of ``config``.

    Entries are independent; with ``config.workers > 1`` they run on a thread
    pool whose ordered ``map`` keeps the report identical to a serial run.

    :param suite: Entries to audit, e.g. :func:`~meanaudit.suite.bundled_suite`.
    :param config: Sampling and precision settings; defaults to ``RunConfig()``.
    :param sample: Audit these pairs instead of drawing them from ``config``.
    """
    cfg = config or RunConfig()
    pairs = sample if sample is not None else audit_sample(cfg)
    cache: MeanCache = {}

    def one(entry: ClaimEntry) -> EntryResult:
        return audit_entry(entry, pairs, precision_mode=cfg.precision_mode, cache=cache)

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = tuple(pool.map(one, suite))
    else:
        results = tuple(one(e) for e in suite)

    return AuditReport(
        seed=cfg.seed,
        samples=cfg.samples if sample is None else len(pairs),
        near_equal_samples=(cfg.near_equal_samples or 0) if sample is None else 0,
        ratio_range=cfg.ratio_range,
        near_equal_range=cfg.near_equal_range,
        scale=cfg.scale,
        precision_mode=cfg.precision_mode,
        entries=results,
    )


def _check_expectation_mode(mode: str) -> None:
    if mode not in _EXPECTATION_MODES:
        raise ValueError(f"invalid expectation mode: {mode!r}")


def check_expectations(
    report: AuditReport, *, mode: ExpectationMode = "strict"
) -> List[ExpectationMismatch]:
    """Compare verdicts with expectations.

    :param mode: ``"strict"`` raises the first :exc:`ExpectationMismatch`;
        ``"collect"`` raises :exc:`MultipleExpectationMismatches` listing all of
        them; ``"lenient"`` emits :exc:`AuditWarning` for each and returns them.
    :returns: The mismatches (empty when every expectation is met).
    """
    _check_expectation_mode(mode)
    mismatches = [
        ExpectationMismatch(e.id, expected=e.expectation, verdict=e.verdict)
        for e in report.mismatches
    ]
    if not mismatches:
        return []
    if mode == "strict":
        raise mismatches[0]
    if mode == "collect":
        raise MultipleExpectationMismatches(mismatches)
    for m in mismatches:
        warnings.warn(str(m), AuditWarning, stacklevel=2)
    return mismatches


# Sign-change scanning


@dataclass(frozen=True)
class SignReport:
    """Signs of ``E(1, x)`` over a log grid.

    Values with ``|E| <= EPSILON * max(1, x)`` count as zero. ``negative`` and
    ``positive`` hold up to five sample points ``(x, E)`` of each sign.
    """

    expression: str
    x_min: float
    x_max: float
    points: int
    negative: Tuple[Tuple[float, float], ...]
    positive: Tuple[Tuple[float, float], ...]
    negative_count: int
    positive_count: int
    zero_count: int
    min_abs_value: float
    min_abs_x: float

    @property
    def single_signed(self) -> bool:
        return not (self.negative_count and self.positive_count)

    @property
    def sign(self) -> str:
        if self.negative_count and self.positive_count:
            return "mixed"
        if self.negative_count:
            return "negative"
        if self.positive_count:
            return "positive"
        return "zero"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "expression": self.expression,
            "x_min": self.x_min,
            "x_max": self.x_max,
            "points": self.points,
            "sign": self.sign,
            "single_signed": self.single_signed,
            "negative_count": self.negative_count,
            "positive_count": self.positive_count,
            "zero_count": self.zero_count,
            "negative": [list(p) for p in self.negative],
            "positive": [list(p) for p in self.positive],
            "min_abs_value": self.min_abs_value,
            "min_abs_x": self.min_abs_x,
        }


def as_difference(expr: Union[str, Node, Chain]) -> Node:
    """Turn text, an expression or a two-term chain into one expression.

    A chain ``L <= R`` becomes ``R - L`` and ``L >= R`` becomes ``L - R``, so a
    positive value means the comparison holds.
    """
    if isinstance(expr, str):
        return parse_expression(expr)
    if isinstance(expr, Chain):
        if len(expr.terms) != 2:
            raise ValueError("only a single comparison can be scanned")
        left, right = expr.terms
        return BinOp("-", right, left) if expr.relations[0] == "<=" else BinOp("-", left, right)
    return expr


def expression_curve(expr: Union[str, Node, Chain], xs: Real) -> FloatArray:
    """``E(1, x)`` for each ``x``."""
    arr = np.atleast_1d(np.asarray(xs, dtype=float))
    return np.broadcast_to(evaluate(as_difference(expr), 1.0, arr), arr.shape).copy()


def sign_change_scan(
    expr: Union[str, Node, Chain],
    x_min: float = 1e-6,
    x_max: float = 1e6,
    points: int = 10_000,
) -> SignReport:
    """Evaluate ``E(1, x)`` on a log grid and report where it is positive or negative.

    Example::

        >>> sign_change_scan("A - A").sign
        'zero'
    """
    node = as_difference(expr)
    xs = log_grid(x_min, x_max, points)
    values = expression_curve(node, xs)
    defined = np.isfinite(values)
    zero_band = EPSILON * np.maximum(1.0, xs)
    neg = defined & (values < -zero_band)
    pos = defined & (values > zero_band)
    zero = defined & ~neg & ~pos

    magnitude = np.where(defined, np.abs(values), np.inf)
    i_min = int(np.argmin(magnitude))

    def picks(mask: np.ndarray) -> Tuple[Tuple[float, float], ...]:
        idx = np.flatnonzero(mask)
        if idx.size > 5:
            idx = idx[np.linspace(0, idx.size - 1, 5).astype(int)]
        return tuple((float(xs[i]), float(values[i])) for i in idx)

    return SignReport(
        expression=pretty(node),
        x_min=float(xs[0]),
        x_max=float(xs[-1]),
        points=points,
        negative=picks(neg),
        positive=picks(pos),
        negative_count=int(neg.sum()),
        positive_count=int(pos.sum()),
        zero_count=int(zero.sum()),
        min_abs_value=float(magnitude[i_min]),
        min_abs_x=float(xs[i_min]),
    )
