"""Exact evaluators for E alpha(n) and the ladder-event probabilities.

Every probability here is dyadic: an event fixed by the first t steps has
probability N / 2**t with N an integer.  The evaluators work on those integer
numerators and divide once, which keeps the exact routes fast enough to run
to n in the thousands.

Events, for a walk S started at 0 (all indices within the horizon):

* ``C1(t)``: 0 < S_l < S_t for 0 < l < t
* ``C2(t)``: 0 < S_l <= S_t for 0 < l <= t
* ``D1(t)``: S_l <= S_t for 0 <= l <= t
* ``D2`` with gap g: S_l > S_0 for 0 < l <= g

Past ``EXACT_HORIZON`` the ``exact=None`` default switches to float64.  The
float routes use scipy's beta and binomial pmf rather than lgamma
differences; relative error stays under 1e-12 (checked in the tests).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import numpy as np
from scipy import stats

EXACT_HORIZON = 4096

LIMIT_T_C2 = 0.5
LIMIT_SQRT_D1 = math.sqrt(2.0 / math.pi)
LIMIT_SQRT_D2 = 1.0 / math.sqrt(2.0 * math.pi)
LIMIT_T_C1 = 0.25

Number = Union[Fraction, float]


def _use_exact(index: int, exact: Optional[bool]) -> bool:
    return index <= EXACT_HORIZON if exact is None else exact


# -- double factorials and the central binomial ----------------------------


def double_factorial(k: int) -> int:
    """k!! with (-1)!! = 0!! = 1."""
    if k < -1:
        raise ValueError(f"double factorial needs k >= -1, got {k}")
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


@lru_cache(maxsize=None)
def _central(m: int) -> int:
    return math.comb(2 * m, m)


def _central_prob_float(m: int) -> float:
    # saddle-point pmf keeps ~1e-15 relative error; the beta-function
    # identity drifts past 1e-12 by m ~ 2000
    if m == 0:
        return 1.0
    return float(stats.binom.pmf(m, 2 * m, 0.5))


def prob_return_zero(n: int, exact: Optional[bool] = None) -> Number:
    """P(S_n = 0)."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n % 2:
        return Fraction(0) if _use_exact(n, exact) else 0.0
    if _use_exact(n, exact):
        return Fraction(_central(n // 2), 1 << n)
    return _central_prob_float(n // 2)


def prob_D1(t: int, exact: Optional[bool] = None) -> Number:
    """P(S_l <= S_t for all l <= t) = P(S_2m = 0) with m = ceil(t/2)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return prob_return_zero(2 * ((t + 1) // 2), exact)


def prob_D2(gap: int, exact: Optional[bool] = None) -> Number:
    """P(S_1 > 0, ..., S_gap > 0) = P(S_2m = 0) / 2 with m = floor(gap/2)."""
    if gap < 1:
        raise ValueError(f"gap must be >= 1, got {gap}")
    return prob_return_zero(2 * (gap // 2), exact) / 2


# -- C2: endpoint is the running maximum, walk never returns to 0 ----------


def strip_count_dp(t: int, m: int) -> int:
    """Paths of length t with 1 <= S_l <= m for 0 < l <= t and S_t = m.

    Reference route: forward dynamic program over the strip.
    """
    if t < 1 or m < 1:
        return 0
    # after the forced first up-step the walk sits at 1
    ways = [0] * (m + 2)
    ways[1] = 1
    for _ in range(t - 1):
        nxt = [0] * (m + 2)
        for x in range(1, m + 1):
            w = ways[x]
            if w:
                nxt[x - 1] += w
                nxt[x + 1] += w
        nxt[0] = 0
        nxt[m + 1] = 0
        ways = nxt
    return ways[m]


def _image_sum(row, s: int, a: int, b: int, width: int):
    """Signed image sum for s-step paths a -> b strictly inside (0, width).

    ``row[j]`` is binom(s, j) (exact or scaled).  Barriers sit at 0 and width.
    """
    total = 0
    for shift, sign in ((b - a, 1), (b + a, -1)):
        # displacement d = shift + 2*k*width must satisfy |d| <= s
        k_lo = -((s + shift) // (2 * width))
        k_hi = (s - shift) // (2 * width)
        for k in range(k_lo, k_hi + 1):
            d = shift + 2 * k * width
            if -s <= d <= s and (s + d) % 2 == 0:
                total += sign * row[(s + d) // 2]
    return total


def strip_count_reflection(t: int, m: int, row=None) -> int:
    """Same count as :func:`strip_count_dp`, by alternating reflection images."""
    if t < 1 or m < 1 or m > t:
        return 0
    s = t - 1
    if row is None:
        row = _binomial_row(s)
    return _image_sum(row, s, 1, m, m + 1)


@lru_cache(maxsize=4)
def _binomial_row(s: int) -> tuple[int, ...]:
    row = [1] * (s + 1)
    for j in range(1, s + 1):
        row[j] = row[j - 1] * (s - j + 1) // j
    return tuple(row)


@lru_cache(maxsize=None)
def c2_numerator(t: int) -> int:
    """Number of length-t paths in C2(t); P(C2(t)) = c2_numerator(t) / 2**t."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    row = _binomial_row(t - 1)
    # parity: a path from 1 to m in t-1 steps needs m = t (mod 2)
    return sum(strip_count_reflection(t, m, row) for m in range(2 - t % 2, t + 1, 2))


def prob_C2(t: int, exact: Optional[bool] = None) -> Number:
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if _use_exact(t, exact):
        return Fraction(c2_numerator(t), 1 << t)
    return _c2_float_windowed(t)


def prob_C1(t: int, exact: Optional[bool] = None) -> Number:
    """P(C1(t)); C1(t) is C2(t-1) followed by an up-step, and C1(1) is sure."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if t == 1:
        return Fraction(1) if _use_exact(t, exact) else 1.0
    return prob_C2(t - 1, exact) / 2


# -- E alpha(n): three routes ----------------------------------------------


def _recursion_numerators():
    """Yield N_K with E alpha(2K + 1) = N_K / 4**K, K = 0, 1, 2, ...

    E alpha(1) = 1, and passing from an even m = 2K to m + 1 adds
    2 (m-1)!! / (m+2)!!, which equals the Catalan number C_K over 4**K.
    So every partial sum sits over a power of four.
    """
    numer = 1
    catalan = 1
    k = 0
    while True:
        yield numer
        k += 1
        catalan = catalan * 2 * (2 * k - 1) // (k + 1)
        numer = 4 * numer + catalan


_CACHE_K = 4096
_numerators: list[int] = []


def _numerator(k: int) -> int:
    if k < len(_numerators):
        return _numerators[k]
    if k <= _CACHE_K:
        if not _numerators:
            _numerators.extend(itertools.islice(_recursion_numerators(), _CACHE_K + 1))
        return _numerators[k]
    return next(itertools.islice(_recursion_numerators(), k, None))


def recursion_increment(m: int) -> Fraction:
    """E alpha(m+1) - E alpha(m) as stated by the recursion."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if m % 2:
        return Fraction(0)
    return Fraction(2 * double_factorial(m - 1), double_factorial(m + 2))


def expectation_alpha_recursion(n: int) -> Fraction:
    """E alpha(n) from the odd/even increment recursion."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    k = (n - 1) // 2  # E alpha(n) = E alpha(2k + 1)
    return Fraction(_numerator(k), 4**k)


def expectation_alpha_sequence(n_max: int) -> list[Fraction]:
    """[E alpha(1), ..., E alpha(n_max)] from the recursion."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    numer = list(itertools.islice(_recursion_numerators(), (n_max - 1) // 2 + 1))
    return [Fraction(numer[(n - 1) // 2], 4 ** ((n - 1) // 2)) for n in range(1, n_max + 1)]


def check_recursion_bounds(n_max: int) -> tuple[bool, bool, int]:
    """Exact check that E alpha is nondecreasing and below 2 for n <= n_max.

    Returns (nondecreasing, below_two, first_offending_n or 0).  Works on the
    integer numerators directly: no Fraction reduction on 10**5-bit numbers.
    """
    k_max = (n_max - 1) // 2
    two_pow = 2  # 2 * 4**k
    prev = None
    for k, numer in enumerate(itertools.islice(_recursion_numerators(), k_max + 1)):
        if numer >= two_pow:
            return True, False, 2 * k + 1
        if prev is not None and numer < prev << 2:
            return False, True, 2 * k + 1
        prev = numer
        two_pow <<= 2
    return True, True, 0


def _d1_scaled(j: int) -> int:
    # P(D1(j)) * 2**(j+1)
    m = (j + 1) // 2
    return _central(m) << (j + 1 - 2 * m)


def _d2_scaled(g: int) -> int:
    # P(D2 gap g) * 2**(g+1)
    m = g // 2
    return _central(m) << (g - 2 * m)


def expectation_alpha_ladder(n: int) -> Fraction:
    """E alpha(n) = 2 * sum_{j<n} P(D1(j)) P(D2 gap n-j).

    Each rare positive edge is crossed once, upward, at a time j+1 where S_j
    is a weak running maximum (D1(j)) and the walk stays strictly above S_j
    afterwards (D2).  The negative side mirrors it.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    total = sum(_d1_scaled(j) * _d2_scaled(n - j) for j in range(n))
    # each term is over 2**(j+1) * 2**(n-j+1) = 2**(n+2); doubled
    return Fraction(total, 1 << (n + 1))


def expectation_alpha_telescoped(n: int, exact: Optional[bool] = None) -> Number:
    """E alpha(n) = 2 - 2 P(S_2m = 0), m = ceil(n/2).

    The recursion's increment with m = 2k is 2 (P(S_2k=0) - P(S_2k+2=0)),
    so the partial sums telescope.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return 2 - 2 * prob_D1(n, exact)


# -- tables and reports ----------------------------------------------------


@dataclass(frozen=True)
class EventTable:
    """P(C2(t)), P(D1(t)) and P(D2 gap g) for indices up to ``horizon``.

    ``c2[0]`` and ``d2_gap[0]`` are placeholders (the events need t, g >= 1)
    and hold zero.
    """

    horizon: int
    c2: tuple
    d1: tuple
    d2_gap: tuple
    exact: bool = True


def build_event_table(horizon: int, exact: bool = True) -> EventTable:
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if exact:
        c2 = (Fraction(0),) + tuple(prob_C2(t, True) for t in range(1, horizon + 1))
        d1 = tuple(prob_D1(t, True) for t in range(horizon + 1))
        d2 = (Fraction(0),) + tuple(prob_D2(g, True) for g in range(1, horizon + 1))
    else:
        c2 = (0.0,) + tuple(c2_float_table(horizon)[1:])
        d1 = tuple(prob_D1(t, False) for t in range(horizon + 1))
        d2 = (0.0,) + tuple(prob_D2(g, False) for g in range(1, horizon + 1))
    return EventTable(horizon, c2, d1, d2, exact)


def c2_float_table(horizon: int) -> np.ndarray:
    """float64 P(C2(t)) for t = 0..horizon (index 0 is zero).

    Past t = 256 the fixed-point binomial row is carried from one t to the
    next by Pascal's rule instead of being rebuilt.
    """
    out = np.zeros(horizon + 1)
    for t in range(1, min(horizon, _TABLE_EXACT) + 1):
        out[t] = c2_numerator(t) / 2.0**t
    if horizon > _TABLE_EXACT:
        s = _TABLE_EXACT
        row = np.array([(c << _FIXED_BITS) >> s for c in _binomial_row(s)], dtype=object)
        for t in range(_TABLE_EXACT + 1, horizon + 1):
            out[t] = _c2_from_row(t, row)
            padded = np.concatenate(([0], row, [0]))
            row = (padded[1:] + padded[:-1]) >> 1
    return out


_TABLE_EXACT = 256
_FIXED_BITS = 128


def _fixed_point_row(s: int, d_max: int) -> np.ndarray:
    """binom(s, j) / 2**s scaled by 2**_FIXED_BITS, for |2j - s| <= d_max.

    Starts from the exact central binomial and walks the ratio recurrence
    outwards in integers, so each entry is off by at most a few units.
    Entries outside the window are zero.
    """
    c = s // 2
    lo = max(0, (s - d_max + 1) // 2)
    hi = min(s, (s + d_max) // 2)
    row = np.zeros(s + 1, dtype=object)
    centre = (math.comb(s, c) << _FIXED_BITS) >> s
    row[c] = r = centre
    for j in range(c, hi):
        r = r * (s - j) // (j + 1)
        row[j + 1] = r
    r = centre
    for j in range(c, lo, -1):
        r = r * j // (s - j + 1)
        row[j - 1] = r
    return row


def _image_indices(t: int, d_max: int):
    """Row indices of the positive and negative reflection images, all m."""
    s = t - 1
    ms = np.arange(2 - t % 2, t + 1, 2, dtype=np.int64)
    width = ms + 1
    d_max = min(s, d_max)
    out = []
    for shift in (ms - 1, ms + 1):
        k_lo = -((d_max + shift) // (2 * width))
        k_hi = (d_max - shift) // (2 * width)
        counts = np.maximum(k_hi - k_lo + 1, 0)
        idx_m = np.repeat(np.arange(ms.size), counts)
        starts = np.repeat(np.cumsum(counts) - counts, counts)
        k = np.arange(idx_m.size) - starts + np.repeat(k_lo, counts)
        d = shift[idx_m] + 2 * k * width[idx_m]
        d = d[(np.abs(d) <= d_max) & ((s + d) % 2 == 0)]
        out.append((s + d) // 2)
    return out


def _c2_from_row(t: int, row: np.ndarray, d_max: Optional[int] = None) -> float:
    plus, minus = _image_indices(t, t if d_max is None else d_max)
    total = int(row[plus].sum()) - int(row[minus].sum())
    return float(Fraction(total, 1 << (_FIXED_BITS + 1)))


def _c2_float_windowed(t: int) -> float:
    """P(C2(t)) in floating point for t past the exact horizon.

    The alternating image sum cancels badly in float64 (the terms are O(1),
    the result is about 1/(2t)), so it runs in 128-bit fixed point over the
    central window |d| <= 16 sqrt(s) of the binomial row; the mass outside
    the window is below exp(-128).
    """
    s = t - 1
    d_max = 16 * math.isqrt(s) + 16
    return _c2_from_row(t, _fixed_point_row(s, d_max), d_max)


def convergence_report(t_max: int, ts=None) -> list[dict]:
    """Scaled event probabilities against their large-t limits.

    Columns: t, t*P(C2(t)), sqrt(t)*P(D1(t)), sqrt(t)*P(D2 gap t), t*P(C1(t)).
    Limits are 1/2, sqrt(2/pi), 1/sqrt(2 pi) and 1/4.
    """
    if t_max < 2:
        raise ValueError(f"t_max must be >= 2, got {t_max}")
    if ts is None:
        ts = []
        t = 2
        while t < t_max:
            ts.append(t)
            t *= 2
        ts.append(t_max)
    rows = []
    for t in ts:
        c2 = float(prob_C2(t))
        rows.append({
            "t": t,
            "t_c2": t * c2,
            "sqrt_t_d1": math.sqrt(t) * float(prob_D1(t)),
            "sqrt_t_d2": math.sqrt(t) * float(prob_D2(t)),
            "t_c1": t * float(prob_C1(t)),
        })
    return rows


CONVERGENCE_LIMITS = {
    "t_c2": LIMIT_T_C2,
    "sqrt_t_d1": LIMIT_SQRT_D1,
    "sqrt_t_d2": LIMIT_SQRT_D2,
    "t_c1": LIMIT_T_C1,
}
