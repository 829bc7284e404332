import math
from fractions import Fraction

import numpy as np
import pytest

from rarewalk import closed_form as cf

from . import oracles


def test_double_factorial():
    assert cf.double_factorial(-1) == 1
    assert cf.double_factorial(0) == 1
    assert cf.double_factorial(5) == 15
    assert cf.double_factorial(6) == 48
    with pytest.raises(ValueError):
        cf.double_factorial(-2)


def test_recursion_examples():
    assert cf.expectation_alpha_recursion(1) == 1
    assert cf.expectation_alpha_recursion(3) == Fraction(5, 4)
    assert cf.expectation_alpha_recursion(5) == Fraction(11, 8)


def test_recursion_increment_pattern():
    # odd n -> n+1 keeps the value; even m -> m+1 adds 2(m-1)!!/(m+2)!!
    for m in range(1, 60):
        step = cf.expectation_alpha_recursion(m + 1) - cf.expectation_alpha_recursion(m)
        if m % 2:
            assert step == 0
        else:
            assert step == Fraction(2 * cf.double_factorial(m - 1), cf.double_factorial(m + 2))
            assert step == cf.recursion_increment(m)


def test_ladder_examples():
    assert cf.expectation_alpha_ladder(1) == 1
    assert cf.expectation_alpha_ladder(2) == 1
    assert cf.expectation_alpha_ladder(3) == Fraction(5, 4)


@pytest.mark.parametrize("n", [1, 2, 7, 40, 333, 1000])
def test_three_routes_agree(n):
    r = cf.expectation_alpha_recursion(n)
    assert cf.expectation_alpha_ladder(n) == r
    assert cf.expectation_alpha_telescoped(n, exact=True) == r


def test_recursion_matches_brute_force():
    for n in range(1, 11):
        assert cf.expectation_alpha_recursion(n) == oracles.brute_alpha_mean(n)


def test_sequence_and_bounds():
    seq = cf.expectation_alpha_sequence(50)
    assert seq == [cf.expectation_alpha_recursion(n) for n in range(1, 51)]
    nondecreasing, below_two, first_bad = cf.check_recursion_bounds(2000)
    assert nondecreasing and below_two and first_bad == 0


def test_return_and_ladder_event_examples():
    assert cf.prob_return_zero(0) == 1
    assert cf.prob_return_zero(2) == Fraction(1, 2)
    assert cf.prob_return_zero(4) == Fraction(3, 8)
    assert cf.prob_return_zero(3) == 0
    assert cf.prob_D1(0) == 1
    assert cf.prob_D1(2) == Fraction(1, 2)
    assert cf.prob_D1(4) == Fraction(3, 8)
    assert cf.prob_D2(1) == Fraction(1, 2)
    assert cf.prob_D2(2) == Fraction(1, 4)
    assert cf.prob_D2(3) == Fraction(1, 4)
    assert cf.prob_C2(1) == Fraction(1, 2)
    assert cf.prob_C2(2) == Fraction(1, 4)
    assert cf.prob_C2(3) == Fraction(1, 8)
    assert cf.prob_C1(1) == 1
    assert cf.prob_C1(2) == Fraction(1, 4)
    assert cf.prob_C1(4) == Fraction(1, 16)


@pytest.mark.parametrize("t", range(1, 13))
def test_events_match_brute_force(t):
    assert cf.prob_C1(t) == oracles.brute_event(t, oracles.c1(t))
    assert cf.prob_C2(t) == oracles.brute_event(t, oracles.c2(t))
    assert cf.prob_D1(t) == oracles.brute_event(t, oracles.d1(t))
    assert cf.prob_D2(t) == oracles.brute_event(t, oracles.d2(t))


def test_preconditions():
    for fn in (cf.prob_C1, cf.prob_C2, cf.prob_D2, cf.expectation_alpha_recursion, cf.expectation_alpha_ladder):
        with pytest.raises(ValueError):
            fn(0)
    with pytest.raises(ValueError):
        cf.prob_D1(-1)


def test_strip_counts_two_ways():
    for t in range(1, 40):
        for m in range(1, t + 1):
            assert cf.strip_count_reflection(t, m) == cf.strip_count_dp(t, m)


@pytest.mark.parametrize("t", [1, 2, 17, 256, 300, 1001, 4096, 5001, 10_000])
def test_float_route_relative_error(t):
    exact = {
        "c2": cf.prob_C2(t, exact=True),
        "d1": cf.prob_D1(t, exact=True),
        "d2": cf.prob_D2(t, exact=True),
        "c1": cf.prob_C1(t, exact=True),
    }
    approx = {
        "c2": cf.prob_C2(t, exact=False),
        "d1": cf.prob_D1(t, exact=False),
        "d2": cf.prob_D2(t, exact=False),
        "c1": cf.prob_C1(t, exact=False),
    }
    for k in exact:
        assert isinstance(approx[k], float)
        assert abs(approx[k] - float(exact[k])) <= 1e-12 * float(exact[k]), k


def test_telescoped_float_route():
    for n in (10, 999, 5000):
        exact = cf.expectation_alpha_telescoped(n, exact=True)
        assert abs(cf.expectation_alpha_telescoped(n, exact=False) - float(exact)) <= 1e-12 * float(exact)


def test_event_table_consistency():
    table = cf.build_event_table(64)
    for t in range(1, 65):
        assert table.c2[t] == cf.prob_C2(t)
        assert table.d1[t] == cf.prob_D1(t)
        assert table.d2_gap[t] == cf.prob_D2(t)
    ftab = cf.build_event_table(600, exact=False)
    assert not ftab.exact
    assert abs(ftab.c2[600] - float(cf.prob_C2(600, exact=True))) <= 1e-12 * ftab.c2[600]
    c2f = cf.c2_float_table(300)
    assert np.allclose(c2f[1:], [float(cf.prob_C2(t)) for t in range(1, 301)], rtol=1e-12, atol=0)


def test_convergence_report_rows():
    rows = cf.convergence_report(10_000)
    by_t = {r["t"]: r for r in rows}
    assert by_t[2]["t_c2"] == 0.5
    last = by_t[10_000]
    assert abs(last["sqrt_t_d1"] - math.sqrt(2 / math.pi)) <= 0.01 * math.sqrt(2 / math.pi)
    assert cf.CONVERGENCE_LIMITS["sqrt_t_d1"] == pytest.approx(0.797885, abs=1e-6)
    assert cf.CONVERGENCE_LIMITS["sqrt_t_d2"] == pytest.approx(0.398942, abs=1e-6)
