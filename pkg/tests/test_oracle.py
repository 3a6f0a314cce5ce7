"""Tests comparing binary64 evaluations with the mpmath reference"""

import math

import pytest
from mpmath import mp, mpf

from meanaudit import CHAIN_ORDER, EvaluationFault, MeanKind, PositivePair, k_fn, mean_value
from meanaudit import oracle
from meanaudit.dsl import parse_claim, parse_expression
from meanaudit.genfn import mean_second_derivative
from meanaudit.means import L, N1, N2, N3

PAIRS = [
    PositivePair(1.0, 4.0),
    PositivePair(1.0, 1.0 + 1e-12),
    PositivePair(1.0, 1.0 + 1e-7),
    PositivePair(2.0, 2.0005),
    PositivePair(1e-3, 1e3),
    PositivePair(1.0, 1e8),
    PositivePair(1e-8, 1.0),
    PositivePair(3.7, 0.0123),
]


@pytest.mark.parametrize("p", PAIRS, ids=lambda p: f"{p.a:g},{p.b:g}")
def test_named_means_agree_with_oracle(p):
    for kind in CHAIN_ORDER:
        assert oracle.is_close(mean_value(kind, p), oracle.mean_value(kind, p), 4e-15), kind.symbol


@pytest.mark.parametrize("symbol", ["B[1/3]", "B[-2]", "B[5/2]", "DP[1/4]", "DP[1/2]", "DP[3/4]"])
@pytest.mark.parametrize("p", PAIRS[:5], ids=lambda p: f"{p.a:g},{p.b:g}")
def test_parametric_means_agree_with_oracle(symbol, p):
    kind = MeanKind.from_symbol(symbol)
    assert oracle.is_close(mean_value(kind, p), oracle.mean_value(kind, p), 1e-13)


def test_oracle_log_mean_digits():
    assert mp.nstr(oracle.mean_value(L, PositivePair(1, 4)), 15) == "2.16404256133345"


def test_oracle_equal_arguments():
    p = PositivePair(3.0, 3.0)
    assert oracle.mean_value(L, p) == 3
    assert float(oracle.mean_value(MeanKind.dp("1/2"), p)) == pytest.approx(math.sqrt(3), rel=1e-15)


def test_oracle_kernel_at_one():
    with mp.workdps(50):
        assert mp.almosteq(oracle.k_fn(1.0), mpf(1) / 6, 1e-45)
    assert k_fn(1.0) == pytest.approx(1 / 6, rel=1e-16)


@pytest.mark.parametrize("t", [-0.24, -0.1, -1e-2, -1e-4, -1e-8, 1e-8, 1e-4, 1e-2, 0.1, 0.24])
def test_kernel_series_window(t):
    """The series branch for |ln x| < 1/4 keeps full precision."""
    x = math.exp(t)
    assert oracle.is_close(k_fn(x), oracle.k_fn(x), 1e-13)


@pytest.mark.parametrize("x", [1e-6, 1e-2, 0.5, 0.77, 1.3, 2.0, 10.0, 1e4, 1e6])
def test_kernel_direct_branch(x):
    assert oracle.is_close(k_fn(x), oracle.k_fn(x), 1e-11)


@pytest.mark.parametrize("kind", CHAIN_ORDER, ids=lambda k: k.symbol)
@pytest.mark.parametrize("x", [0.01, 0.3, 1.0 + 1e-6, 2.0, 50.0, 1e3])
def test_closed_form_second_derivatives(kind, x):
    """Closed forms match both the mpmath closed forms and mpmath.diff."""
    closed = mean_second_derivative(kind, x)
    reference = oracle.mean_second_derivative(kind, x)
    numeric = oracle.numeric_second_derivative(kind, x)
    with mp.workdps(30):
        assert abs(reference - numeric) <= mpf("1e-20") * max(1, abs(reference))
    if reference == 0:
        assert closed == 0.0
    else:
        assert oracle.is_close(closed, reference, 1e-11)


def test_evaluate_expression():
    p = PositivePair(1, 2)
    node = parse_expression("5*(N3 - L)")
    value = oracle.evaluate_expr(node, p)
    assert float(value) == pytest.approx(0.1435474, abs=1e-6)
    tail = oracle.evaluate_expr(parse_expression("6*(N1 - L)"), p)
    assert float(tail) == pytest.approx(0.0864704, abs=1e-6)


def test_evaluate_expression_negative_sqrt():
    with pytest.raises(EvaluationFault) as exc_info:
        oracle.evaluate_expr(parse_expression("sqrt(A - S)"), PositivePair(1, 4))
    assert exc_info.value.witness == (1.0, 4.0)


def test_oracle_chain_margins_resolve_fourth_order_gap():
    """N1 - (A+3L)/4 is O(d^4) near a = b; the oracle still resolves its sign."""
    chain = parse_claim("(A+3*L)/4 <= N1")
    p = PositivePair(1.0, 1.0 + 1e-3)
    [margin] = oracle.chain_margins(chain, p)
    assert margin > 0
    assert margin < 1e-12
    p2 = PositivePair(1, 2)
    [margin2] = oracle.chain_margins(chain, p2)
    assert margin2 * 1.457106781 == pytest.approx(8.55e-5, rel=1e-2)


def test_oracle_margin_signs():
    chain = parse_claim("N1 <= N3 <= N2")
    margins = oracle.chain_margins(chain, PositivePair(1, 4))
    assert all(m > 0 for m in margins)
    reversed_chain = parse_claim("N2 <= N3")
    assert oracle.chain_margins(reversed_chain, PositivePair(1, 4))[0] < 0


def test_is_close_rejects_nan():
    assert not oracle.is_close(math.nan, mpf(1), 1.0)


def test_oracle_margins_ordering_of_n_means():
    p = PositivePair(1, 2)
    values = [oracle.mean_value(k, p) for k in (N1, N3, N2)]
    assert values[0] < values[1] < values[2]
