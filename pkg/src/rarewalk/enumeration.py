"""Exhaustive enumeration of all 2**n equally likely paths.

This is the brute-force oracle the analytic routes are checked against.  A
path is an n-bit integer, bit i set meaning step i+1 goes up.  Statistics are
tallied as integer histograms and divided by 2**n once at the end.

Work is split over the top bits of the path code; each prefix class fills its
own histogram row, and rows are summed, so the result does not depend on how
the classes are scheduled.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numba as nb
import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_CAP = 24
HARD_CAP = 30
EVENT_CAP = 20

_PREFIX_BITS = 6


def _check_n(n: int, cap: int = DEFAULT_CAP):
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > HARD_CAP:
        raise ValueError(f"n = {n} exceeds the hard enumeration cap of {HARD_CAP} (2**{n} paths)")
    if n > cap:
        raise ValueError(f"n = {n} exceeds the enumeration cap {cap}; pass cap={n} to force it")
    if n > DEFAULT_CAP:
        logger.warning("enumerating 2**%d paths; expect a long run", n)


@nb.njit(cache=True)
def _tally(code, n, counts, hist_alpha, hist_plus, hist_minus, hist_f1):
    off = n
    pos = 0
    lo = 0
    hi = 0
    for i in range(n):
        if (code >> i) & 1:
            counts[pos + off] += 1
            pos += 1
            hi = max(hi, pos)
        else:
            pos -= 1
            counts[pos + off] += 1
            lo = min(lo, pos)
    ap = 0
    am = 0
    for y in range(lo, hi):
        if counts[y + off] == 1:
            if y >= 0:
                ap += 1
            else:
                am += 1
    # sites: replay the path so the f1 tally does not lean on edge counts
    for y in range(lo, hi):
        counts[y + off] = 0
    counts[off] = 1
    pos = 0
    for i in range(n):
        if (code >> i) & 1:
            pos += 1
        else:
            pos -= 1
        counts[pos + off] += 1
    f1 = 0
    for x in range(lo, hi + 1):
        if counts[x + off] == 1:
            f1 += 1
        counts[x + off] = 0
    hist_alpha[ap + am] += 1
    hist_plus[ap] += 1
    hist_minus[am] += 1
    hist_f1[f1] += 1


@nb.njit(cache=True, parallel=True)
def _enumerate(n, prefix_bits, out):
    classes = 1 << prefix_bits
    per = 1 << (n - prefix_bits)
    for c in nb.prange(classes):
        counts = np.zeros(2 * n + 2, np.int64)
        base = c * per
        for r in range(per):
            _tally(base + r, n, counts, out[c, 0], out[c, 1], out[c, 2], out[c, 3])


@dataclass(frozen=True)
class EnumerationTally:
    """Integer path counts by value of alpha, alpha+, alpha- and f1."""

    n: int
    alpha: tuple[int, ...]
    alpha_plus: tuple[int, ...]
    alpha_minus: tuple[int, ...]
    f1: tuple[int, ...]

    @property
    def total(self) -> int:
        return 1 << self.n

    def distribution(self, stat: str = "alpha") -> dict[int, Fraction]:
        hist = getattr(self, stat.replace("-", "_"))
        return {v: Fraction(c, self.total) for v, c in enumerate(hist) if c}

    def expectation(self, stat: str = "alpha") -> Fraction:
        hist = getattr(self, stat.replace("-", "_"))
        return Fraction(sum(v * c for v, c in enumerate(hist)), self.total)

    def binomial_moment(self, k: int, stat: str = "alpha") -> Fraction:
        if k < 0:
            raise ValueError(f"k must be >= 0, got {k}")
        hist = getattr(self, stat.replace("-", "_"))
        return Fraction(sum(math.comb(v, k) * c for v, c in enumerate(hist)), self.total)


_tallies: dict[int, EnumerationTally] = {}


def enumerate_paths(n: int, cap: int = DEFAULT_CAP) -> EnumerationTally:
    _check_n(n, cap)
    if n in _tallies:
        return _tallies[n]
    prefix = min(_PREFIX_BITS, n)
    out = np.zeros((1 << prefix, 4, 2 * n + 2), np.int64)
    _enumerate(n, prefix, out)
    sums = out.sum(axis=0)
    tally = EnumerationTally(
        n,
        *(tuple(int(v) for v in np.trim_zeros(sums[i], "b")) for i in range(4)),
    )
    _tallies[n] = tally
    return tally


def enum_expectation_alpha(n: int, cap: int = DEFAULT_CAP) -> Fraction:
    return enumerate_paths(n, cap).expectation("alpha")


def enum_distribution_alpha(n: int, cap: int = DEFAULT_CAP) -> dict[int, Fraction]:
    return enumerate_paths(n, cap).distribution("alpha")


def enum_moment_alpha_k(n: int, k: int, cap: int = DEFAULT_CAP) -> Fraction:
    """E binom(alpha(n), k); binom(m, k) = 0 for k > m."""
    return enumerate_paths(n, cap).binomial_moment(k, "alpha")


def enum_expectation_f1(n: int, cap: int = DEFAULT_CAP) -> Fraction:
    return enumerate_paths(n, cap).expectation("f1")


# -- events ----------------------------------------------------------------

EVENT_KINDS = ("C1", "C2", "D1", "D2", "POSITIVE_STRICT", "NONNEG", "RETURN_ZERO", "CUSTOM")


@dataclass(frozen=True)
class EventSpec:
    """An event on the first steps of the walk.

    ``t`` is the terminal index; ``r`` the start index for the two-point
    events C2(r, t) and D2(r, t).  ``C2`` with ``r`` set is C2(r, t).
    ``POSITIVE_STRICT`` is S_1..S_t > 0, ``NONNEG`` is S_0..S_t >= 0,
    ``RETURN_ZERO`` is S_t = 0.  ``CUSTOM`` takes a vectorised predicate:
    it receives the (paths x (t+1)) position matrix and returns a bool mask.
    """

    kind: str
    t: int
    r: Optional[int] = None
    predicate: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}; expected one of {EVENT_KINDS}")
        if self.t < 0:
            raise ValueError(f"t must be >= 0, got {self.t}")
        if self.kind in ("C1", "C2", "POSITIVE_STRICT") and self.t < 1 and self.r is None:
            raise ValueError(f"{self.kind} needs t >= 1")
        if self.kind == "D2" and self.r is None:
            raise ValueError("D2 needs r (use r=0 for the gap-t event)")
        if self.r is not None:
            if self.kind not in ("C2", "D2"):
                raise ValueError(f"{self.kind} takes no r parameter")
            if not 0 <= self.r < self.t:
                raise ValueError(f"need 0 <= r < t, got r={self.r}, t={self.t}")
        if self.kind == "CUSTOM" and self.predicate is None:
            raise ValueError("CUSTOM events need a predicate")


def position_matrix(n: int) -> np.ndarray:
    """Positions S_0..S_n of every n-step path, one row per path code."""
    codes = np.arange(1 << n, dtype=np.int64)
    pos = np.zeros((codes.size, n + 1), dtype=np.int16)
    for i in range(n):
        pos[:, i + 1] = pos[:, i] + 2 * ((codes >> i) & 1).astype(np.int16) - 1
    return pos


def _event_mask(spec: EventSpec, pos: np.ndarray) -> np.ndarray:
    t = spec.t
    S = pos[:, : t + 1]
    everyone = np.ones(S.shape[0], dtype=bool)
    if spec.kind == "C1":
        inner = S[:, 1:t]
        return ((inner > 0) & (inner < S[:, [t]])).all(axis=1) if t > 1 else everyone
    if spec.kind == "C2":
        r = spec.r or 0
        after = S[:, r + 1 : t + 1]
        return ((after > S[:, [r]]) & (after <= S[:, [t]])).all(axis=1)
    if spec.kind == "D1":
        return (S <= S[:, [t]]).all(axis=1)
    if spec.kind == "D2":
        return (S[:, spec.r + 1 : t + 1] > S[:, [spec.r]]).all(axis=1)
    if spec.kind == "POSITIVE_STRICT":
        return (S[:, 1:] > 0).all(axis=1)
    if spec.kind == "NONNEG":
        return (S >= 0).all(axis=1)
    if spec.kind == "RETURN_ZERO":
        return S[:, t] == 0
    return np.asarray(spec.predicate(S), dtype=bool)


def enum_event_probability(spec: EventSpec, n: Optional[int] = None) -> Fraction:
    """Exact probability of ``spec`` by checking every path of length n (default t)."""
    n = spec.t if n is None else n
    if n < spec.t:
        raise ValueError(f"path length {n} is shorter than the event index {spec.t}")
    if n > EVENT_CAP:
        raise ValueError(f"event enumeration is capped at n = {EVENT_CAP}, got {n}")
    if n == 0:
        return Fraction(int(_event_mask(spec, np.zeros((1, 1), np.int16))[0]))
    hits = int(np.count_nonzero(_event_mask(spec, position_matrix(n))))
    return Fraction(hits, 1 << n)
