from fractions import Fraction

import pytest

from rarewalk import enumeration as en

from . import oracles


def test_expectation_examples():
    assert en.enum_expectation_alpha(1) == 1
    assert en.enum_expectation_alpha(2) == 1
    assert en.enum_expectation_alpha(3) == Fraction(5, 4)


def test_distribution_examples():
    assert en.enum_distribution_alpha(1) == {1: 1}
    assert en.enum_distribution_alpha(2) == {0: Fraction(1, 2), 2: Fraction(1, 2)}
    assert en.enum_distribution_alpha(3) == {0: Fraction(1, 4), 1: Fraction(1, 2), 3: Fraction(1, 4)}


def test_moment_examples():
    assert en.enum_moment_alpha_k(3, 2) == Fraction(3, 4)
    assert en.enum_moment_alpha_k(3, 1) == Fraction(5, 4)
    assert en.enum_moment_alpha_k(3, 4) == 0


@pytest.mark.parametrize("n", [1, 5, 12])
def test_f1_mean_is_two(n):
    assert en.enum_expectation_f1(n) == 2


@pytest.mark.parametrize("n", range(1, 13))
def test_against_python_oracle(n):
    tally = en.enumerate_paths(n)
    assert tally.total == 2**n
    assert tally.expectation("alpha") == oracles.brute_alpha_mean(n)
    assert tally.expectation("alpha-plus") == oracles.expectation(n, lambda p: oracles.alpha_parts(p)[1])
    assert tally.expectation("f1") == oracles.expectation(n, oracles.f1)
    for k in (2, 3):
        assert tally.binomial_moment(k) == oracles.brute_alpha_moment(n, k)


def test_distribution_sums_to_one():
    for n in range(1, 16):
        assert sum(en.enum_distribution_alpha(n).values()) == 1


def test_alpha_plus_and_minus_means_agree():
    tally = en.enumerate_paths(14)
    assert tally.expectation("alpha_plus") == tally.expectation("alpha_minus")
    assert 2 * tally.expectation("alpha_plus") == tally.expectation("alpha")


def test_event_examples():
    assert en.enum_event_probability(en.EventSpec("D1", 2)) == Fraction(1, 2)
    assert en.enum_event_probability(en.EventSpec("C2", 3)) == Fraction(1, 8)
    assert en.enum_event_probability(en.EventSpec("D2", 2, 0)) == Fraction(1, 4)


@pytest.mark.parametrize("t", range(1, 11))
def test_events_against_python_oracle(t):
    assert en.enum_event_probability(en.EventSpec("C1", t)) == oracles.brute_event(t, oracles.c1(t))
    assert en.enum_event_probability(en.EventSpec("C2", t)) == oracles.brute_event(t, oracles.c2(t))
    assert en.enum_event_probability(en.EventSpec("D1", t)) == oracles.brute_event(t, oracles.d1(t))
    assert en.enum_event_probability(en.EventSpec("D2", t, 0)) == oracles.brute_event(t, oracles.d2(t))


def test_caps():
    with pytest.raises(ValueError):
        en.enum_expectation_alpha(en.HARD_CAP + 1, cap=en.HARD_CAP + 1)
    with pytest.raises(ValueError):
        en.enum_expectation_alpha(25)
    with pytest.raises(ValueError):
        en.enum_expectation_alpha(0)
    with pytest.raises(ValueError):
        en.EventSpec("nonsense", 3)
