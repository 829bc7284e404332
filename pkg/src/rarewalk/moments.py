"""Binomial moments E binom(alpha(n), k) through the ladder convolution.

A k-subset of rare positive edges, listed bottom to top, is crossed at times
j_1 < ... < j_k.  The walk is at a weak running maximum at j_1, each stretch
between consecutive crossings is a C2 excursion of length y_i = j_{i+1} - j_i,
and after j_k the walk stays above S_{j_k}.  Writing r = j_k - j_1,

    E alpha+_k(n) = sum_{r=k-1}^{n-1} W(r, n) * f^{*(k-1)}(r),
    W(r, n)       = sum_{j=0}^{n-1-r} P(D1(j)) P(D2 gap n-j-r),

with f(t) = P(C2(t)) for t >= 1 and f^{*0} the unit mass at 0.  The negative
side has the same law, so E alpha_k(n) = 2 E alpha+_k(n).

Exact mode stays in integers: P(C2(t)) = N_t / 2**t, so the convolution
powers are integer convolutions over 2**r, and everything lands on a common
denominator 2**(n+2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

import numpy as np

from . import closed_form as cf

EXACT_HORIZON = 512

Number = Union[Fraction, float]


@dataclass(frozen=True)
class MomentRequest:
    n: int
    k: int
    mode: str = "exact"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.mode not in ("exact", "floating"):
            raise ValueError(f"mode must be 'exact' or 'floating', got {self.mode!r}")
        if self.mode == "exact" and self.n > EXACT_HORIZON:
            raise ValueError(
                f"exact moments are limited to n <= {EXACT_HORIZON}; got n = {self.n} (use mode='floating')"
            )


def _int_convolve(a: list[int], b: list[int], size: int) -> list[int]:
    out = [0] * size
    for i, x in enumerate(a[:size]):
        if x:
            for j, y in enumerate(b[: size - i]):
                if y:
                    out[i + j] += x * y
    return out


def _ladder_numerators(n: int) -> list[int]:
    """U_r with W(r, n) = U_r / 2**(n-r+2), for r = 0..n-1."""
    u = [cf._d1_scaled(j) for j in range(n)]
    v = [cf._d2_scaled(g) for g in range(n + 1)]
    return [sum(u[j] * v[n - r - j] for j in range(n - r)) for r in range(n)]


def ladder_weight(r: int, n: int, mode: str = "exact") -> Number:
    """W(r, n) = sum_j P(D1(j)) P(D2(j + r, n))."""
    if not 0 <= r < n:
        raise ValueError(f"need 0 <= r < n, got r={r}, n={n}")
    if mode == "exact":
        return sum(cf.prob_D1(j, True) * cf.prob_D2(n - j - r, True) for j in range(n - r))
    return math.fsum(cf.prob_D1(j, False) * cf.prob_D2(n - j - r, False) for j in range(n - r))


def _exact_plus(n: int, k: int) -> Fraction:
    if k > n:
        return Fraction(0)
    ladder = _ladder_numerators(n)
    # c2 numerators as a series in r: f(t) = N_t / 2**t, t >= 1
    base = [0] + [cf.c2_numerator(t) for t in range(1, n)]
    power = [1] + [0] * (n - 1)
    for _ in range(k - 1):
        power = _int_convolve(power, base, n)
    # W(r) f(r) = U_r / 2**(n-r+2) * M_r / 2**r
    total = sum(ladder[r] * power[r] for r in range(k - 1, n))
    return Fraction(total, 1 << (n + 2))


@lru_cache(maxsize=8)
def _float_tables(horizon: int):
    c2 = cf.c2_float_table(horizon)
    d1 = np.array([cf.prob_D1(j, False) for j in range(horizon + 1)])
    d2 = np.array([0.0] + [cf.prob_D2(g, False) for g in range(1, horizon + 1)])
    return c2, d1, d2


def _float_plus(n: int, k: int) -> float:
    if k > n:
        return 0.0
    c2, d1, d2 = _float_tables(max(n, 1))
    # W(r, n) for r = 0..n-1 is the convolution of d1 and d2 at lag n - r
    lag = np.convolve(d1[:n], d2[: n + 1])[: n + 1]
    weight = lag[n - np.arange(n)]
    power = np.zeros(n)
    power[0] = 1.0
    base = c2[:n].copy()
    base[0] = 0.0
    for _ in range(k - 1):
        power = np.convolve(power, base)[:n]
    return float(np.dot(weight[k - 1 :], power[k - 1 :]))


def expected_alpha_k_plus(n: int, k: int, mode: str = "exact") -> Number:
    """E binom(alpha+(n), k) for the rare edges on the nonnegative side."""
    req = MomentRequest(n, k, mode)
    if req.mode == "exact":
        return _exact_plus(n, k)
    return _float_plus(n, k)


def expected_alpha_k(n: int, k: int, mode: str = "exact") -> Number:
    """E binom(alpha(n), k).

    alpha+ and alpha- are never both positive, so binom(alpha, k) splits as
    binom(alpha+, k) + binom(alpha-, k), and the two sides are mirror images.
    """
    return 2 * expected_alpha_k_plus(n, k, mode)


def lemma_growth_report(n_list: Iterable[int], a: float, epsilon: float) -> list[dict]:
    """E alpha_k(n) with k = round(a ln n) against ((1/2 -+ eps) ln n)**k.

    ``ratio`` is E alpha_k(n)**(1/k) / ln n, which should settle inside
    (1/2 - eps, 1/2 + eps) as n grows.  Nothing is asserted: the band is an
    asymptotic statement.  Logs are natural.
    """
    if a <= 0:
        raise ValueError(f"a must be > 0, got {a}")
    if not 0 < epsilon < 0.5:
        raise ValueError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    rows = []
    for n in n_list:
        if n < 2:
            raise ValueError(f"n must be >= 2 so that ln n > 0, got {n}")
        log_n = math.log(n)
        k = max(1, round(a * log_n))
        value = float(expected_alpha_k(n, k, "floating"))
        rows.append({
            "n": n,
            "k": k,
            "moment": value,
            "lower": ((0.5 - epsilon) * log_n) ** k,
            "upper": ((0.5 + epsilon) * log_n) ** k,
            "ratio": value ** (1.0 / k) / log_n if value > 0 else 0.0,
        })
    return rows
