"""Tests for best-constant scans of second-derivative ratios"""

import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from meanaudit import (
    CONSTANT_CLAIMS,
    ConvergenceWarning,
    MeasurePair,
    RatioDomainError,
    apply_ratio_bound,
    draw_pairs,
    extremum_scan,
    ratio_at_one,
    ratio_curve,
    ratio_g,
)
from meanaudit import constants
from meanaudit._optimize import GoldenResult, golden_maximize, golden_minimize
from meanaudit.genfn import AG, AL, N1L, N2L, N3L, SH, SL, SN1
from meanaudit.means import A

EXPECTED = {
    "SL/AL": Fraction(5, 2),
    "AL/N3L": Fraction(2),
    "N3L/N1L": Fraction(2),
    "SL/N2L": Fraction(4),
    "N2L/N1L": Fraction(5, 2),
    "SH/SL": Fraction(9, 5),
    "AG/AL": Fraction(3, 2),
    "SN1/SL": Fraction(9, 10),
}

MONOTONE = [c for c in CONSTANT_CLAIMS if c.monotone_pattern]


@pytest.fixture(scope="module")
def pairs():
    return draw_pairs(42, 4_000, 1_000)


def test_claim_table():
    assert {c.key: c.claimed for c in CONSTANT_CLAIMS} == EXPECTED
    assert [c.key for c in MONOTONE] == ["SL/AL", "AL/N3L", "N3L/N1L", "SL/N2L", "N2L/N1L"]


@pytest.mark.parametrize("claim", CONSTANT_CLAIMS, ids=lambda c: c.key)
def test_exact_value_at_one(claim):
    assert ratio_at_one(claim.numerator, claim.denominator) == claim.claimed


@pytest.mark.parametrize("claim", CONSTANT_CLAIMS, ids=lambda c: c.key)
def test_ratio_continuous_at_one(claim):
    for x in (1 - 1e-9, 1 + 1e-9):
        assert ratio_g(claim.numerator, claim.denominator, x) == pytest.approx(
            float(claim.claimed), rel=1e-8
        )


def test_ratio_at_one_degenerate_denominator():
    with pytest.raises(RatioDomainError) as exc_info:
        ratio_at_one(SL, MeasurePair(A, A))
    assert exc_info.value.x == 1.0


def test_ratio_curve_reports_first_bad_abscissa():
    xs = np.array([0.5, 2.0, 3.0])
    with pytest.raises(RatioDomainError) as exc_info:
        ratio_curve(SL, MeasurePair(A, A), xs)
    assert exc_info.value.x == 0.5


@pytest.mark.slow
@pytest.mark.parametrize("claim", MONOTONE, ids=lambda c: c.key)
def test_monotone_ratios_peak_at_one(claim):
    profile = extremum_scan(claim.numerator, claim.denominator)
    assert profile.value_at_one == claim.claimed
    assert profile.sup == pytest.approx(float(claim.claimed), abs=1e-9)
    assert abs(math.log(profile.argmax)) < 1e-3
    assert profile.sign_pattern_ok, profile.sign_violations
    assert profile.inf < profile.sup
    assert profile.bounds_valid


@pytest.mark.parametrize("claim", MONOTONE, ids=lambda c: c.key)
def test_monotone_ratios_on_coarse_grid(claim):
    profile = extremum_scan(claim.numerator, claim.denominator, points=1_001)
    assert profile.sup <= float(claim.claimed) + 1e-9
    assert profile.sign_pattern_ok
    assert profile.grid_points == 1_001


@pytest.mark.parametrize("claim", CONSTANT_CLAIMS, ids=lambda c: c.key)
def test_claimed_constant_holds_on_samples(claim, pairs):
    profile = extremum_scan(claim.numerator, claim.denominator, points=1_001)
    bound = profile.with_bounds(beta=float(claim.claimed))
    assert apply_ratio_bound(bound, pairs) == 0


def test_too_small_constant_is_caught(pairs):
    profile = extremum_scan(SL, AL, points=1_001).with_bounds(beta=2.0)
    assert not profile.bounds_valid
    assert apply_ratio_bound(profile, pairs) > 0


def test_lower_bound_checked(pairs):
    profile = extremum_scan(SL, AL, points=1_001)
    assert profile.alpha == 0.0
    assert apply_ratio_bound(profile.with_bounds(alpha=profile.inf), pairs) == 0
    assert apply_ratio_bound(profile.with_bounds(alpha=2.0), pairs) > 0


def test_apply_ratio_bound_accepts_pair_iterables():
    from meanaudit import PositivePair

    profile = extremum_scan(AL, N3L, points=501)
    assert apply_ratio_bound(profile, [PositivePair(1, 2), PositivePair(3, 0.1)]) == 0


def test_tails_are_informational():
    profile = extremum_scan(SL, AL, points=501)
    assert profile.tail_low == pytest.approx(ratio_g(SL, AL, 1e-6))
    assert profile.tail_high == pytest.approx(ratio_g(SL, AL, 1e6))
    assert 1.0 < profile.tail_high < 2.5


def test_secondary_ratio_pairs_have_finite_profiles():
    for num, den in ((SH, SL), (AG, AL), (SN1, SL), (N2L, N1L), (N3L, N1L)):
        profile = extremum_scan(num, den, points=501)
        assert math.isfinite(profile.sup) and math.isfinite(profile.inf)


def test_convergence_warning(monkeypatch):
    def stalled(f, lo, hi, tol):
        return GoldenResult(lo, f(lo), 200, False)

    monkeypatch.setattr(constants, "golden_maximize", stalled)
    with pytest.warns(ConvergenceWarning, match="SL/AL"):
        extremum_scan(SL, AL, points=101)


def test_no_warning_when_converged():
    with warnings.catch_warnings():
        warnings.simplefilter("error", ConvergenceWarning)
        extremum_scan(SL, N2L, points=101)


def test_golden_section():
    low = golden_minimize(lambda x: (x - 2.0) ** 2, 0.0, 5.0)
    assert low.converged
    assert low.x == pytest.approx(2.0, abs=1e-5)
    high = golden_maximize(lambda x: -((x + 1.0) ** 2) + 3.0, -4.0, 4.0)
    assert high.value == pytest.approx(3.0)
    capped = golden_minimize(lambda x: x * x, -1.0, 2.0, max_iterations=3)
    assert not capped.converged
    assert capped.iterations == 3
