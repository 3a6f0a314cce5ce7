"""
Numerical auditing of inequalities between bivariate means.

The named means are harmonic ``H``, geometric ``G``, logarithmic ``L``, square-root
``N1 = ((√a+√b)/2)²``, Heronian ``N3 = (a+√(ab)+b)/3``,
``N2 = ((√a+√b)/2)·√((a+b)/2)``, arithmetic ``A`` and root-square ``S``, ordered
``H <= G <= L <= N1 <= N3 <= N2 <= A <= S``. ``B[t]`` is the mean of order ``t``
and ``DP[r]`` is ``(b^{r+1} - a^{r+1}) / ((r+1)(b-a))`` for ``0 < r < 1``.

**Means:** :func:`mean_value` evaluates any :class:`MeanKind` at a
:class:`PositivePair` with forms that stay accurate near ``a = b`` and for
extreme ratios; :func:`evaluate_mean` is the vectorized version.
:mod:`meanaudit.oracle` recomputes the same quantities with :mod:`mpmath`.

**Difference measures:** a :class:`MeasurePair` such as ``SL = S - L`` is
homogeneous, so ``M(a, b) = a·f(b/a)``. :func:`gen_derivatives` gives ``f``,
``f'`` and ``f''`` in closed form; :func:`k_fn` is the kernel shared by every
measure involving ``L``. :func:`verify_convexity` checks ``f(1) = f'(1) = 0``,
``f'' >= 0``, the tangent bound and midpoint convexity of ``a·f(b/a)``.

**Best constants:** :func:`extremum_scan` finds the supremum of
``g = f1''/f2''`` for two measures; :func:`ratio_at_one` gives its exact limit at
``x = 1`` and :func:`apply_ratio_bound` checks ``M1 <= beta·M2`` on samples.

**Claims:** :func:`parse_claim` reads chains such as
``"S-L <= 5/2*(A-L) <= 5*(N3-L)"``; :func:`run_audit` evaluates a suite on
seeded samples with scale-normalized margins and reports ``HOLDS``, ``FAILS``
(with a witness pair) or ``INCONCLUSIVE``. :func:`check_expectations` compares
verdicts with the suite's expectations in ``strict``, ``collect`` or ``lenient``
mode. :func:`sign_change_scan` reports where ``E(1, x)`` changes sign.
"""

from __future__ import annotations

from ._version import __version__
from .audit import (
    AuditReport,
    EntryResult,
    SignReport,
    chain_margins,
    check_expectations,
    eval_claim,
    run_audit,
    sign_change_scan,
)
from .config import RunConfig
from .constants import (
    CONSTANT_CLAIMS,
    ConstantClaim,
    RatioProfile,
    apply_ratio_bound,
    extremum_scan,
    ratio_at_one,
    ratio_curve,
    ratio_g,
)
from .convexity import ConvexityVerdict, fd_cross_check, verify_convexity
from .dsl import Chain, parse_claim, parse_expression, pretty
from .exceptions import (
    AuditWarning,
    ClaimSyntaxError,
    ConfigError,
    ConvergenceWarning,
    EvaluationFault,
    ExpectationMismatch,
    InvalidPairError,
    MalformedParameterError,
    MeanOverflowError,
    MeanParameterError,
    MultipleExpectationMismatches,
    RatioDomainError,
    SuiteFormatError,
    UnknownSymbolError,
)
from .genfn import (
    CONVEX_PAIRS,
    PAIRS,
    GenDerivatives,
    MeasurePair,
    gen_derivatives,
    k_fn,
    mean_first_derivative,
    mean_second_derivative,
    measure_pair,
    phi_lift,
)
from .means import (
    CHAIN_ORDER,
    MeanKind,
    MeanTag,
    PositivePair,
    dp_mid,
    evaluate_mean,
    mean_value,
    power_mean,
)
from .plotdata import write_plot_data
from .sampling import PairSample, draw_pairs
from .suite import ClaimEntry, bundled_suite, load_suite, parse_suite
from .types import Expectation, ExpectationMode, PrecisionMode, Verdict

__all__ = [
    "__version__",
    "MeanTag",
    "MeanKind",
    "PositivePair",
    "CHAIN_ORDER",
    "mean_value",
    "power_mean",
    "dp_mid",
    "evaluate_mean",
    "MeasurePair",
    "GenDerivatives",
    "PAIRS",
    "CONVEX_PAIRS",
    "measure_pair",
    "k_fn",
    "mean_first_derivative",
    "mean_second_derivative",
    "gen_derivatives",
    "phi_lift",
    "ConvexityVerdict",
    "verify_convexity",
    "fd_cross_check",
    "RatioProfile",
    "ConstantClaim",
    "CONSTANT_CLAIMS",
    "ratio_at_one",
    "ratio_g",
    "ratio_curve",
    "extremum_scan",
    "apply_ratio_bound",
    "Chain",
    "parse_claim",
    "parse_expression",
    "pretty",
    "ClaimEntry",
    "parse_suite",
    "load_suite",
    "bundled_suite",
    "PairSample",
    "draw_pairs",
    "RunConfig",
    "AuditReport",
    "EntryResult",
    "SignReport",
    "chain_margins",
    "eval_claim",
    "run_audit",
    "check_expectations",
    "sign_change_scan",
    "write_plot_data",
    "Verdict",
    "Expectation",
    "ExpectationMode",
    "PrecisionMode",
    "AuditWarning",
    "ConvergenceWarning",
    "InvalidPairError",
    "MeanParameterError",
    "MeanOverflowError",
    "RatioDomainError",
    "ClaimSyntaxError",
    "UnknownSymbolError",
    "MalformedParameterError",
    "EvaluationFault",
    "SuiteFormatError",
    "ConfigError",
    "ExpectationMismatch",
    "MultipleExpectationMismatches",
]
