"""Exhaustive pinwheel search, exact trimming optimum, tightness families.

The search is the ground truth everything else is judged against, so its
own tests stick to instances small enough to check by hand, plus a witness
validator that re-plays every claimed schedule.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bamboo.model import BgtInstance, InvalidInstance
from bamboo.oracle import (
    StateSpaceTooLarge,
    bgt_opt,
    pinwheel_feasible,
    tightness_examples,
)
from bamboo.scheduler import solve


def assert_valid_witness(periods, witness):
    """Re-play the cyclic day assignment and check every window."""
    k = len(witness)
    assert all(0 <= w < len(periods) for w in witness)
    for i, p in enumerate(periods):
        days = [d for d in range(2 * k) if witness[d % k] == i]
        assert days, f"job {i} never appears"
        assert days[0] + 1 <= p, f"job {i} misses its first window"
        assert all(b - a <= p for a, b in zip(days, days[1:]))


# ---------------------------------------------------------------- search


def test_two_three_twelve_is_infeasible():
    res = pinwheel_feasible([2, 3, 12])
    assert not res.feasible and res.witness is None


def test_two_four_four_is_feasible():
    res = pinwheel_feasible([2, 4, 4])
    assert res.feasible
    assert res.witness == (0, 2, 0, 1)
    assert_valid_witness([2, 4, 4], res.witness)


def test_two_twos_alternate():
    # density exactly 1, still schedulable: alternate the two jobs
    res = pinwheel_feasible([2, 2])
    assert res.feasible
    assert_valid_witness([2, 2], res.witness)


def test_density_above_one_short_circuits():
    assert not pinwheel_feasible([2, 2, 2]).feasible
    assert not pinwheel_feasible([1, 5]).feasible


def test_singleton_and_input_validation():
    res = pinwheel_feasible([1])
    assert res.feasible and res.witness == (0,)
    with pytest.raises(InvalidInstance):
        pinwheel_feasible([])
    with pytest.raises(InvalidInstance):
        pinwheel_feasible([0, 3])
    with pytest.raises(InvalidInstance):
        pinwheel_feasible([True, 3])


def test_state_cap_enforced():
    with pytest.raises(StateSpaceTooLarge):
        pinwheel_feasible([100] * 5, cap=10**3)


@given(st.lists(st.integers(min_value=1, max_value=6), min_size=1, max_size=3))
@settings(max_examples=200, deadline=None)
def test_feasibility_monotone_in_periods(periods):
    res = pinwheel_feasible(periods)
    if res.feasible:
        assert_valid_witness(periods, res.witness)
        # loosening any single deadline cannot break a working schedule
        for i in range(len(periods)):
            looser = list(periods)
            looser[i] += 1
            assert pinwheel_feasible(looser).feasible


@given(st.integers(min_value=4, max_value=20))
@settings(max_examples=17, deadline=None)
def test_two_three_m_family_is_never_feasible(m):
    assert not pinwheel_feasible([2, 3, m]).feasible


# ---------------------------------------------------------------- exact optimum


def test_bgt_opt_two_equal_growers():
    # alternate daily cuts: each bamboo is cut every other day, peak 2
    assert bgt_opt(BgtInstance.from_values([1, 1])) == 2


def test_bgt_opt_single():
    assert bgt_opt(BgtInstance.from_values([1])) == 1


def test_bgt_opt_three_to_one():
    # L = max(6, 4) = 6 and floor-periods (2, 6) already schedule
    assert bgt_opt(BgtInstance.from_values([3, 1])) == 6


def test_bgt_opt_never_above_pipeline():
    for rates in ([2, 1], [5, 3, 2], [4, 3, 1], [6, 6, 1]):
        inst = BgtInstance.from_values(rates)
        opt = bgt_opt(inst)
        sol = solve(inst)
        assert opt <= sol.height_bound <= Fraction(12, 7) * opt


# ---------------------------------------------------------------- tightness


def test_tightness_default_parameters():
    rep = tightness_examples()
    fixed = rep["pseudo"]
    assert fixed["delta"] == "11673/994175"
    assert fixed["delta_positive"] is True
    assert fixed["delta_matches_formula"] is True
    assert fixed["floor_periods"] == [2, 3, 100]
    assert fixed["floors_feasible"] is False

    reduced = rep["reduced"]
    assert reduced["factor"] == "1193/700"
    assert reduced["eps1"] == "3707/280000"
    assert reduced["eps2"] == "3707/210000"
    assert reduced["gamma_ceiling"] == "49/1193"
    assert reduced["gamma_in_range"] is True
    assert reduced["shape_reproduced"] is True
    assert reduced["eps1_matches_formula"] is True
    assert reduced["eps2_matches_formula"] is True
    assert reduced["m_matches_formula"] is True
    assert reduced["floor_periods"] == [2, 3, 1194]
    assert reduced["floors_feasible"] is False


def test_tightness_gamma_out_of_range_reports_shape_loss():
    rep = tightness_examples(gamma=Fraction(1))
    reduced = rep["reduced"]
    assert reduced["gamma_in_range"] is False
    assert reduced["shape_reproduced"] is False
    assert "floor_periods" not in reduced


def test_tightness_parameter_validation():
    with pytest.raises(InvalidInstance):
        tightness_examples(epsilon=Fraction(1))
    with pytest.raises(InvalidInstance):
        tightness_examples(big_m=Fraction(3))
    with pytest.raises(InvalidInstance):
        tightness_examples(eta=Fraction(6, 7))
    with pytest.raises(InvalidInstance):
        tightness_examples(gamma=Fraction(3))
