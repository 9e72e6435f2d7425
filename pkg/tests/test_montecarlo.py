"""Trial-level simulator against the analytic recursion."""

import math

import pytest

from pidr.cascade import cascade_error, strategy_nested
from pidr.errors import ZeroTrials
from pidr.model import IDEAL, NONIDEAL, Partition, Priors, operating_point_from_nbar
from pidr.montecarlo import simulate_cascade, simulate_trials
from pidr.numerics import Rng

EQ = Priors.equal()
OP1 = operating_point_from_nbar(1.0)


def test_zero_trials_rejected():
    with pytest.raises(ZeroTrials):
        simulate_cascade(Partition((1.0,)), OP1, EQ, IDEAL, 0, Rng(0))


def test_uninformative_channel():
    op0 = operating_point_from_nbar(0.0)
    mc = simulate_cascade(Partition((0.5, 0.5)), op0, EQ, IDEAL, 10**5, Rng(3))
    assert abs(mc.p_hat - 0.5) <= 4.0 * mc.std_err


def test_single_segment_matches_analytic():
    part = Partition((1.0,))
    analytic = cascade_error(part, OP1, EQ, IDEAL).p_error
    mc = simulate_cascade(part, OP1, EQ, IDEAL, 10**6, Rng(4))
    assert abs(mc.p_hat - analytic) <= 4.0 * mc.std_err


def test_deterministic_for_fixed_seed():
    part = Partition((0.4, 0.6))
    a = simulate_cascade(part, OP1, EQ, NONIDEAL, 10**5, Rng(42))
    b = simulate_cascade(part, OP1, EQ, NONIDEAL, 10**5, Rng(42))
    assert a == b


def test_distinct_seeds_differ():
    part = Partition((0.4, 0.6))
    a = simulate_cascade(part, OP1, EQ, NONIDEAL, 10**5, Rng(1))
    b = simulate_cascade(part, OP1, EQ, NONIDEAL, 10**5, Rng(2))
    assert a.errors != b.errors


def test_counts_and_mcresult_fields():
    part = Partition((0.5, 0.5))
    mc = simulate_cascade(part, OP1, EQ, NONIDEAL, 2000, Rng(5))
    assert 0 <= mc.errors <= mc.trials
    assert mc.p_hat == mc.errors / mc.trials
    assert mc.std_err == math.sqrt(mc.p_hat * (1.0 - mc.p_hat) / mc.trials)


def test_trace_matches_aggregate_stream():
    part = Partition((0.3, 0.7))
    agg = simulate_cascade(part, OP1, EQ, NONIDEAL, 5000, Rng(17))
    traced, _, _ = simulate_trials(part, OP1, EQ, NONIDEAL, 5000, Rng(17))
    assert traced == agg


def test_noop_segments_never_click_or_flip():
    part = Partition((0.5, 0.0, 0.5))
    _, _, outcomes = simulate_trials(part, OP1, EQ, IDEAL, 3000, Rng(9))
    for trial in outcomes:
        assert trial[1].k_i == 0
        assert trial[1].decision_after == trial[0].decision_after


def test_decision_flips_exactly_on_clicks():
    part = Partition((0.5, 0.5))
    _, _, outcomes = simulate_trials(part, OP1, EQ, NONIDEAL, 3000, Rng(10))
    for trial in outcomes:
        tentative = 0
        for stage in trial:
            expected = (1 - tentative) if stage.k_i >= 1 else tentative
            assert stage.decision_after == expected
            tentative = stage.decision_after


def test_label_relabeling_invariance():
    # swapping signal labels and the true-bit prior together leaves the
    # error statistics unchanged at equal priors
    part = Partition((0.4, 0.6))
    a = simulate_cascade(part, OP1, EQ, NONIDEAL, 10**6, Rng(31))
    b = simulate_cascade(part, OP1, EQ, NONIDEAL, 10**6, Rng(32), _flip_labels=True)
    combined = math.hypot(a.std_err, b.std_err)
    assert abs(a.p_hat - b.p_hat) <= 4.0 * combined


@pytest.mark.parametrize(
    "params,n,nbar",
    [(IDEAL, 2, 0.5), (NONIDEAL, 3, 1.0)],
)
def test_agreement_spot_checks(params, n, nbar):
    op = operating_point_from_nbar(nbar)
    part, res = strategy_nested(n, op, EQ, params)
    mc = simulate_cascade(part, op, EQ, params, 10**6, Rng(64))
    sigma = math.sqrt(res.p_error * (1.0 - res.p_error) / 10**6)
    assert abs(mc.p_hat - res.p_error) <= 4.0 * sigma
