import math
from fractions import Fraction

import pytest

from rarewalk import closed_form as cf
from rarewalk import moments

from . import oracles


def test_plus_side_examples():
    assert moments.expected_alpha_k_plus(3, 2) == Fraction(3, 8)
    assert moments.expected_alpha_k_plus(3, 1) == Fraction(5, 8)
    assert moments.expected_alpha_k_plus(2, 3) == 0


def test_full_examples():
    assert moments.expected_alpha_k(3, 2) == Fraction(3, 4)
    assert moments.expected_alpha_k(3, 1) == Fraction(5, 4)
    assert moments.expected_alpha_k(1, 1) == 1


@pytest.mark.parametrize("n", range(1, 11))
def test_against_python_oracle(n):
    for k in range(1, 5):
        assert moments.expected_alpha_k_plus(n, k) == oracles.brute_alpha_moment(n, k, side=1)
        assert moments.expected_alpha_k(n, k) == oracles.brute_alpha_moment(n, k, side=0)


def test_first_moment_is_the_mean():
    for n in (1, 2, 9, 50, 200):
        assert moments.expected_alpha_k(n, 1) == cf.expectation_alpha_recursion(n)


def test_floating_mode_tracks_exact():
    for n, k in ((30, 2), (100, 3), (400, 5)):
        exact = moments.expected_alpha_k(n, k, "exact")
        approx = moments.expected_alpha_k(n, k, "floating")
        assert approx == pytest.approx(float(exact), rel=1e-10)


def test_ladder_weight_at_zero_is_half_the_mean():
    # with k = 1 the convolution power is a point mass at r = 0
    for n in (1, 5, 12):
        w0 = moments.ladder_weight(0, n)
        assert 2 * w0 == cf.expectation_alpha_recursion(n)
        assert math.isclose(moments.ladder_weight(0, n, "floating"), float(w0), rel_tol=1e-12)


def test_request_validation():
    with pytest.raises(ValueError):
        moments.expected_alpha_k(0, 1)
    with pytest.raises(ValueError):
        moments.expected_alpha_k(5, 0)
    with pytest.raises(ValueError):
        moments.expected_alpha_k(5, 1, "sloppy")
    with pytest.raises(ValueError):
        moments.expected_alpha_k(moments.EXACT_HORIZON + 1, 2, "exact")


def test_growth_report():
    rows = moments.lemma_growth_report([3], a=0.5, epsilon=0.1)
    assert rows[0]["k"] == 1
    assert rows[0]["ratio"] == pytest.approx(1.25 / math.log(3), rel=1e-12)
    rows = moments.lemma_growth_report([2**j for j in range(6, 13)], a=1.0, epsilon=0.1)
    for r in rows:
        assert r["lower"] < r["upper"]
        assert r["moment"] > 0
    with pytest.raises(ValueError):
        moments.lemma_growth_report([1], 1.0, 0.1)
