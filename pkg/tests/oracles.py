"""Slow, transparent reference computations used only by the tests.

Everything here walks all 2**n step sequences in plain Python, with no
sharing of code paths with the package.
"""

import itertools
import math
from fractions import Fraction


def all_positions(n):
    for steps in itertools.product((1, -1), repeat=n):
        pos = [0]
        for s in steps:
            pos.append(pos[-1] + s)
        yield pos


def edge_counts(pos):
    counts = {}
    for a, b in zip(pos, pos[1:]):
        y = min(a, b)
        counts[y] = counts.get(y, 0) + 1
    return counts


def alpha_parts(pos):
    once = [y for y, c in edge_counts(pos).items() if c == 1]
    plus = sum(1 for y in once if y >= 0)
    return len(once), plus, len(once) - plus


def f1(pos):
    seen = {}
    for x in pos:
        seen[x] = seen.get(x, 0) + 1
    return sum(1 for c in seen.values() if c == 1)


def expectation(n, fn):
    return Fraction(sum(fn(p) for p in all_positions(n)), 2**n)


def brute_alpha_mean(n):
    return expectation(n, lambda p: alpha_parts(p)[0])


def brute_alpha_moment(n, k, side=0):
    return expectation(n, lambda p: math.comb(alpha_parts(p)[side], k))


def brute_event(n, pred):
    return expectation(n, lambda p: 1 if pred(p) else 0)


def c1(t):
    return lambda p: all(0 < p[l] < p[t] for l in range(1, t))


def c2(t):
    return lambda p: all(0 < p[l] <= p[t] for l in range(1, t + 1))


def d1(t):
    return lambda p: all(p[l] <= p[t] for l in range(0, t + 1))


def d2(gap):
    return lambda p: all(p[l] > p[0] for l in range(1, gap + 1))
