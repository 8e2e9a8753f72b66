import dataclasses
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cashsched.fuzzy import MixClass, expected_interval, make_nivtf, mix_coeff
from cashsched.io import load_instance
from cashsched.project import (
    Activity,
    PeriodGrid,
    horizon_bound,
    mode_terms,
    round_half_up,
    validate_project,
)
from cashsched.toys import random_toy

from conftest import PKG_DATA, chain, mode


def test_case_study_instance_is_valid():
    p, diags = load_instance(PKG_DATA / "case22.json")
    assert diags == [] and validate_project(p) == []
    assert len(p.activities) == 24
    assert sum(a.is_dummy for a in p.activities) == 2
    assert all(len(a.modes) == 2 for a in p.activities if not a.is_dummy)
    assert p.periods.boundaries == (30, 60, 90, 120)


def test_cycle_reported_once():
    p = chain([2, 3], 10)
    a1, a2 = p.activities[1], p.activities[2]
    cyc = dataclasses.replace(p, activities=(p.activities[0], dataclasses.replace(a1, predecessors=("S", "A2")),
                                             a2, p.activities[3]))
    diags = validate_project(cyc)
    assert [d.rule for d in diags] == ["cycle"]
    assert "A1" in diags[0].message and "A2" in diags[0].message


def test_period_coverage_reported():
    p = dataclasses.replace(chain([2], 10), periods=PeriodGrid((4, 8)))
    diags = validate_project(p)
    assert [d.rule for d in diags] == ["period coverage"]


def test_bad_dummy_and_unknown_predecessor():
    p = chain([2], 10)
    bad = Activity("E", "E", ("ghost",), (mode(1),), True)
    diags = validate_project(dataclasses.replace(p, activities=p.activities[:-1] + (bad,)))
    rules = {d.rule for d in diags}
    assert {"unknown predecessor", "dummy shape"} <= rules


def test_negative_rate_and_arity():
    p = chain([2], 10)
    p = dataclasses.replace(p, finance=dataclasses.replace(p.finance, r_delay=-0.1))
    assert [d.rule for d in validate_project(p)] == ["non-negative"]
    wrong = dataclasses.replace(p.activities[1], modes=(mode(2, 0, (1, 1)),))
    p2 = dataclasses.replace(chain([2], 10), activities=(p.activities[0], wrong, p.activities[2]))
    assert [d.rule for d in validate_project(p2)] == ["mode arity"]


def test_horizon_bound_examples():
    assert horizon_bound(chain([2, 3, 4], 20)) == 9
    single = chain([1], 10)
    two_modes = dataclasses.replace(single.activities[1], modes=(mode(5, 0, (0,)), mode(2, 0, (0,))))
    assert horizon_bound(dataclasses.replace(single, activities=(single.activities[0], two_modes,
                                                                 single.activities[2]))) == 5
    fz = make_nivtf((7, 10, 12), (7, 10, 12))
    assert horizon_bound(chain([fz, fz], 30), alpha=1.0) == 22


@given(st.integers(0, 200), st.floats(0, 1))
def test_horizon_bound_envelope(seed, alpha):
    p = random_toy(seed)
    lo = sum(max(math.floor(expected_interval(m.duration.upper)[0]) for m in a.modes) for a in p.activities)
    hi = sum(max(math.ceil(expected_interval(m.duration.upper)[1]) for m in a.modes) for a in p.activities)
    assert lo <= horizon_bound(p, alpha) <= hi


@given(st.lists(st.integers(1, 20), min_size=1, max_size=6))
def test_periods_partition_days(lengths):
    bounds = []
    total = 0
    for n in lengths:
        total += n
        bounds.append(total)
    g = PeriodGrid(tuple(bounds))
    owners = [g.period_of(t) for t in range(1, g.horizon + 1)]
    assert owners == sorted(owners)
    for y in range(1, len(g) + 1):
        assert g.period_of(g.first_day(y)) == y == g.period_of(g.last_day(y))
        assert owners.count(y) == len(g.days(y))


def test_boundary_day_belongs_to_closing_period():
    g = PeriodGrid.uniform(30, 4)
    assert g.period_of(30) == 1 and g.period_of(31) == 2 and g.period_of(120) == 4
    with pytest.raises(ValueError):
        g.period_of(121)


def test_fuzzy_mode_terms():
    dur = make_nivtf((7, 10, 12), (7, 10, 12))
    use = make_nivtf((2, 3, 5), (2, 3, 5))
    t = mode_terms(mode(dur, 0, (use,)), 0.5)
    assert t.lag["L"] == pytest.approx(9.75)
    at0 = mode_terms(mode(make_nivtf((2, 3, 5), (2, 3, 5)), 0, (use,)), 0.0)
    assert at0.renewable["L"] == (4.0,)
    # (2 + 2*3 + 5) / 4 = 3.25 rounds half-up to 3
    assert at0.window == {"L": 3, "U": 3}


def test_mode_terms_envelopes():
    use = make_nivtf((2, 3, 4), (1, 3, 6))
    t = mode_terms(mode(make_nivtf((3, 4, 5), (2, 4, 7)), 0, (use,)), 0.3)
    assert t.renewable["L"][0] >= t.renewable["U"][0]
    assert t.done_lo <= t.done_hi
    assert t.min_lag == math.ceil(max(t.lag.values()))
    e1u, e2u = expected_interval(use.upper)
    assert e1u <= t.renewable["U"][0] <= t.renewable["L"][0] <= e2u
    assert t.renewable["L"][0] == max(mix_coeff(use.lower, 0.3, MixClass.LEQ_FULL),
                                      mix_coeff(use.upper, 0.3, MixClass.LEQ_FULL))


def test_crisp_terms_reject_fuzzy_and_fractional():
    with pytest.raises(ValueError):
        mode_terms(mode(make_nivtf((1, 2, 3), (1, 2, 3))), None)
    with pytest.raises(ValueError):
        mode_terms(mode(2.5), None)


@pytest.mark.parametrize("x, r", [(2.5, 3), (3.25, 3), (-0.5, 0), (4.0, 4)])
def test_round_half_up(x, r):
    assert round_half_up(x) == r
