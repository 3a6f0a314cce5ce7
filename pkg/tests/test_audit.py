"""Tests for the audit engine, expectation checks and sign scans"""

import json
import math
import warnings

import numpy as np
import pytest

from meanaudit import (
    AuditWarning,
    EvaluationFault,
    ExpectationMismatch,
    MultipleExpectationMismatches,
    PairSample,
    PositivePair,
    check_expectations,
    eval_claim,
    parse_claim,
    parse_suite,
    run_audit,
    sign_change_scan,
)
from meanaudit.audit import (
    ORACLE_BUDGET,
    audit_entry,
    audit_sample,
    as_difference,
    chain_margins,
    expression_curve,
    minimize_witness,
)
from meanaudit.convexity import EPSILON
from meanaudit.dsl import BinOp, MeanRef
from meanaudit.means import A, S

FOCUS = (
    "eq17-chain",
    "eq35-printed-tail",
    "eq35-corrected",
    "eq36-chain",
    "eq60-middle-printed",
    "eq60-middle-corrected",
    "eq63-printed-left",
    "t3-le",
    "t3-ge",
    "t4",
)


def _one(text, expect="HOLDS"):
    [entry] = parse_suite(f"c | {text} | expect={expect} | source=(t)\n")
    return entry


def test_eval_claim_margins(pair_1_4):
    margins = eval_claim(parse_claim("H <= G <= A"), pair_1_4)
    assert margins[0] == pytest.approx(0.2, rel=1e-12)
    assert margins[1] == pytest.approx(0.5 / 2.5, rel=1e-12)


def test_eval_claim_relation_direction(pair_1_4):
    assert eval_claim(parse_claim("S >= A"), pair_1_4)[0] > 0
    assert eval_claim(parse_claim("A >= S"), pair_1_4)[0] < 0
    assert eval_claim(parse_claim("A <= A"), pair_1_4) == [0.0]


def test_margin_normalization_uses_first_component():
    """Constants dominate small means: the scale is max(|left|, |right|, a)."""
    p = PositivePair(1e-3, 2e-3)
    [margin] = eval_claim(parse_claim("0 <= A - G"), p)
    assert margin == pytest.approx((1.5e-3 - math.sqrt(2e-6)) / 1e-3, rel=1e-9)


def test_eval_claim_fault(pair_1_4):
    with pytest.raises(EvaluationFault) as exc_info:
        eval_claim(parse_claim("sqrt(A - S) <= A"), pair_1_4)
    assert exc_info.value.witness == (1.0, 4.0)


def test_chain_margins_shape():
    chain = parse_claim("H <= G <= A <= S")
    margins = chain_margins(chain, np.array([1.0, 2.0]), np.array([3.0, 2.5]))
    assert margins.shape == (3, 2)
    assert np.all(margins > 0)


def test_focus_entries_meet_expectations(pick, small_config):
    report = run_audit(pick(*FOCUS), small_config)
    for entry in report.entries:
        assert entry.met, (entry.id, entry.verdict)
    assert report.all_met
    assert check_expectations(report) == []


def test_failing_entry_has_minimized_witness(pick, small_config):
    report = run_audit(pick("eq35-printed-tail"), small_config)
    result = report.entry("eq35-printed-tail")
    assert result.verdict == "FAILS"
    assert result.strong_violations > 0
    a, b = result.witness
    assert abs(math.log(b / a)) < 1e-3
    assert result.witness_margin < -10 * EPSILON
    [margin] = eval_claim(_one("5*(N3-L) <= 6*(N1-L)").ast, PositivePair(a, b))
    assert margin == pytest.approx(result.witness_margin)


def test_printed_tail_fails_at_1_2():
    [margin] = eval_claim(parse_claim("5*(N3-L) <= 6*(N1-L)"), PositivePair(1, 2))
    # both sides are below a = 1, which sets the scale
    assert margin == pytest.approx(0.0864704 - 0.1435474, rel=1e-5)


def test_minimize_witness_moves_toward_equality():
    chain = parse_claim("A <= G")
    best, margin = minimize_witness(chain, PositivePair(1.0, 100.0))
    assert 1.0 < best.b < 1.0001
    assert -1e-9 < margin < -10 * EPSILON


def test_holding_entry_fields(pick, small_config):
    report = run_audit(pick("eq17-chain"), small_config)
    result = report.entries[0]
    assert result.verdict == "HOLDS"
    assert result.violations == 0
    assert result.witness is None
    assert result.min_margin >= -EPSILON
    assert result.samples == 2_500
    assert result.source == "(17)"


def test_inconclusive_when_weak_violations_confirmed():
    entry = _one("A*1.000000000005 <= A", expect="HOLDS")
    sample = PairSample(np.array([1.0, 2.0, 3.0]), np.array([2.0, 3.0, 5.0]))
    result = audit_entry(entry, sample)
    assert result.verdict == "INCONCLUSIVE"
    assert result.oracle_adjudicated == 3
    assert result.violations == 3
    assert result.strong_violations == 0
    assert not result.met


def test_strong_violation_skips_oracle():
    entry = _one("A*1.0000000001 <= A", expect="FAILS")
    sample = PairSample(np.array([1.0, 2.0]), np.array([2.0, 3.0]))
    result = audit_entry(entry, sample)
    assert result.verdict == "FAILS"
    assert result.oracle_adjudicated == 0
    assert result.strong_violations == 2


def test_faults_count_as_failures():
    entry = _one("sqrt(G - A) <= A", expect="FAILS")
    sample = PairSample(np.array([1.0, 2.0]), np.array([1.0, 3.0]))
    result = audit_entry(entry, sample)
    assert result.verdict == "FAILS"
    assert result.faults == 1
    assert result.witness == (2.0, 3.0)
    assert result.witness_margin is None


def test_oracle_budget_caps_adjudication():
    entry = _one("A*1.000000000005 <= A")
    n = ORACLE_BUDGET + 20
    sample = PairSample(np.linspace(1.0, 2.0, n), np.linspace(3.0, 4.0, n))
    capped = audit_entry(entry, sample)
    assert capped.oracle_adjudicated == ORACLE_BUDGET
    assert capped.violations == n
    full = audit_entry(entry, sample, precision_mode="oracle")
    assert full.oracle_adjudicated == n
    assert full.oracle_min_margin == pytest.approx(-5e-12, rel=1e-3)


def test_oracle_overturn_warns(monkeypatch):
    from meanaudit import audit as audit_module

    monkeypatch.setattr(audit_module.oracle, "chain_margins", lambda chain, p: [0.0])
    entry = _one("A*1.000000000005 <= A")
    sample = PairSample(np.array([1.0]), np.array([2.0]))
    with pytest.warns(AuditWarning, match="overturned 1"):
        result = audit_entry(entry, sample)
    assert result.verdict == "HOLDS"
    assert result.violations == 0


def test_oracle_strengthened_violation_keeps_strong_witness(monkeypatch):
    """A weak binary64 violation the oracle finds strong is minimized with the oracle."""
    from meanaudit import audit as audit_module

    monkeypatch.setattr(audit_module.oracle, "chain_margins", lambda chain, p: [-1e-9])
    entry = _one("A*1.000000000005 <= A", expect="FAILS")
    sample = PairSample(np.array([1.0]), np.array([2.0]))
    result = audit_entry(entry, sample)
    assert result.verdict == "FAILS"
    assert result.strong_violations == 1
    assert result.witness_margin == -1e-9
    assert result.witness_margin < -10 * EPSILON
    a, b = result.witness
    assert a == 1.0 and 1.0 <= b < 2.0


def test_run_audit_is_deterministic(tiny_suite, small_config):
    first = run_audit(tiny_suite, small_config).to_json()
    second = run_audit(tiny_suite, small_config).to_json()
    assert first == second


def test_workers_do_not_change_report(pick, small_config):
    entries = pick(*FOCUS[:6])
    serial = run_audit(entries, small_config)
    threaded = run_audit(entries, small_config.with_updates(workers=4))
    assert serial.to_json() == threaded.to_json()


def test_scale_invariance(pick, small_config):
    entries = pick(*FOCUS)
    base = run_audit(entries, small_config)
    for factor in (1e-6, 1e6):
        scaled = run_audit(entries, small_config.with_updates(scale=factor))
        assert [e.verdict for e in scaled.entries] == [e.verdict for e in base.entries]


def test_explicit_sample(tiny_suite, small_config):
    sample = audit_sample(small_config).scaled(10.0)
    report = run_audit(tiny_suite, small_config, sample=sample)
    assert report.samples == len(sample)
    assert report.near_equal_samples == 0


def test_report_json(tiny_suite, small_config):
    report = run_audit(tiny_suite, small_config)
    data = json.loads(report.to_json())
    assert data["seed"] == 42
    assert data["samples"] == 2_000
    assert data["near_equal_samples"] == 500
    assert data["tolerance"]["epsilon"] == EPSILON
    assert [e["id"] for e in data["entries"]] == ["chain", "reversed"]
    assert data["entries"][1]["verdict"] == "FAILS"
    assert data["entries"][1]["witness"] is not None
    assert report.to_json().endswith("}\n")


def test_report_lookup(tiny_suite, small_config):
    report = run_audit(tiny_suite, small_config)
    assert report.entry("reversed").met
    with pytest.raises(KeyError):
        report.entry("absent")


def _mismatched_report(small_config):
    suite = parse_suite(
        "wrong1 | A <= H | expect=HOLDS | source=(t)\n"
        "right | H <= A | expect=HOLDS | source=(t)\n"
        "wrong2 | H <= A | expect=FAILS | source=(t)\n"
    )
    return run_audit(suite, small_config)


def test_check_expectations_strict(small_config):
    report = _mismatched_report(small_config)
    with pytest.raises(ExpectationMismatch) as exc_info:
        check_expectations(report, mode="strict")
    assert exc_info.value.claim_id == "wrong1"
    assert exc_info.value.expected == "HOLDS"
    assert exc_info.value.verdict == "FAILS"


def test_check_expectations_collect(small_config):
    report = _mismatched_report(small_config)
    with pytest.raises(MultipleExpectationMismatches) as exc_info:
        check_expectations(report, mode="collect")
    assert [m.claim_id for m in exc_info.value.mismatches] == ["wrong1", "wrong2"]


def test_check_expectations_lenient(small_config):
    report = _mismatched_report(small_config)
    with pytest.warns(AuditWarning):
        mismatches = check_expectations(report, mode="lenient")
    assert len(mismatches) == 2


def test_check_expectations_invalid_mode(tiny_suite, small_config):
    report = run_audit(tiny_suite, small_config)
    with pytest.raises(ValueError, match="invalid expectation mode"):
        check_expectations(report, mode="loose")


def test_check_expectations_all_met_is_quiet(tiny_suite, small_config):
    report = run_audit(tiny_suite, small_config)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert check_expectations(report, mode="lenient") == []


def test_t3_changes_sign():
    report = sign_change_scan("(S+5*L)/6 - (2*N2+3*L)/5", points=2_000)
    assert report.sign == "mixed"
    assert not report.single_signed
    assert report.negative_count > 0 and report.positive_count > 0
    assert len(report.negative) <= 5 and len(report.positive) <= 5
    [low, near_one] = expression_curve("(S+5*L)/6 - (2*N2+3*L)/5", [1e-5, 1.1])
    assert low == pytest.approx(-0.0037512758, abs=1e-8)
    assert near_one > 0


def test_t4_is_single_signed():
    report = sign_change_scan("N2 - (5*N3+L)/6", points=2_000)
    assert report.single_signed
    assert report.sign in ("positive", "zero")
    assert report.negative_count == 0


def test_zero_expression():
    report = sign_change_scan("A - A", points=100)
    assert report.sign == "zero"
    assert report.zero_count == 100
    assert report.min_abs_value == 0.0


def test_scan_accepts_two_term_chain():
    assert as_difference(parse_claim("A <= S")) == BinOp("-", MeanRef(S), MeanRef(A))
    assert as_difference(parse_claim("S >= A")) == BinOp("-", MeanRef(S), MeanRef(A))
    report = sign_change_scan(parse_claim("A <= S"), points=200)
    assert report.negative_count == 0
    with pytest.raises(ValueError):
        as_difference(parse_claim("H <= G <= A"))


def test_sign_report_dict():
    data = sign_change_scan("A - G", points=50).to_dict()
    assert data["points"] == 50
    assert data["sign"] == "positive"
    assert data["expression"] == "A - G"


@pytest.mark.slow
def test_bundled_suite_meets_expectations(suite):
    """Full default run: every bundled claim gets its recorded verdict."""
    from meanaudit import RunConfig

    report = run_audit(suite, RunConfig())
    assert [e.id for e in report.entries if not e.met] == []
