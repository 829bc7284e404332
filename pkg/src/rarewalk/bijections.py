"""The two path maps behind the increment formula for E alpha, and a verifier.

``flip_after_last_visit`` reflects the path through level 1 after the last
time it sits at 1.  Restricted to paths that start with an up-step, it swaps
{edge <0,1> crossed once, last visit to 1 before the horizon} with
{edge <0,1> crossed twice}.

``reflect_before_first_hit`` mirrors the prefix up to the first visit of a
level; at level -1 it swaps start-0 paths that touch -1 with start-(-2)
paths, which is the ballot-style count behind P(S_j >= 0, S_n = 0).

Paths are explicit position tuples here; this module checks claims, it is
not on any hot path.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

from .walk import EdgeLedger, WalkPath, hitting_time

MAX_CERTIFY = 20


def last_visit_time(path: WalkPath, level: int = 1) -> Optional[int]:
    """sup{0 < k <= n : S_k = level}, or None."""
    pos = path.positions
    for k in range(len(pos) - 1, 0, -1):
        if pos[k] == level:
            return k
    return None


def flip_after_last_visit(path: WalkPath) -> WalkPath:
    sigma = last_visit_time(path, 1)
    if sigma is None:
        raise ValueError("path never visits level 1 after time 0; the flip is undefined")
    steps = path.steps[:sigma] + tuple(-s for s in path.steps[sigma:])
    return WalkPath(steps, path.start)


def reflect_before_first_hit(path: WalkPath, level: int = -1) -> WalkPath:
    sigma = hitting_time(path, level)
    if sigma is None:
        raise ValueError(f"path never hits level {level}; the reflection is undefined")
    steps = tuple(-s for s in path.steps[:sigma]) + path.steps[sigma:]
    return WalkPath(steps, 2 * level - path.start)


@dataclass
class Claim:
    name: str
    passed: bool
    counts: dict = field(default_factory=dict)


@dataclass
class BijectionReport:
    n_plus_1: int
    reflection_n: int
    claims: list[Claim]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def to_dict(self) -> dict:
        return {
            "n_plus_1": self.n_plus_1,
            "reflection_n": self.reflection_n,
            "passed": self.passed,
            "claims": [asdict(c) for c in self.claims],
        }


def _all_paths(n: int, start: int = 0):
    for code in range(1 << n):
        yield WalkPath.from_bits(code, n, start)


def _flip_claims(N: int) -> list[Claim]:
    once: set[WalkPath] = set()  # L(0,N)=1, X1=1, sigma<N
    twice: set[WalkPath] = set()  # L(0,N)=2, X1=1
    once_at_end = 0  # L(0,N)=1, X1=1, sigma=N
    for p in _all_paths(N):
        if p.steps[0] != 1:
            continue
        crossings = EdgeLedger.from_path(p).count(0)
        sigma = last_visit_time(p, 1)
        if crossings == 1:
            if sigma < N:
                once.add(p)
            else:
                once_at_end += 1
        elif crossings == 2:
            twice.add(p)

    image_once = [flip_after_last_visit(p) for p in once]
    image_twice = [flip_after_last_visit(p) for p in twice]
    lands_exactly_twice = all(
        q.steps[0] == 1 and EdgeLedger.from_path(q).count(0) == 2 for q in image_once
    )
    lands_in_once = all(q in once for q in image_twice)
    involution = all(flip_after_last_visit(q) == p for p, q in zip(once, image_once)) and all(
        flip_after_last_visit(q) == p for p, q in zip(twice, image_twice)
    )

    # the sigma = N slice: those paths end 2 -> 1 and stay >= 1, i.e. a
    # nonnegative excursion of length N-1 shifted up by one
    n = N - 1
    excursions = sum(
        1 for p in _all_paths(n) if p.end == 0 and min(p.positions) >= 0
    ) if n > 0 else 1

    return [
        Claim("flip maps {L(0,n+1)=1, X1=1, sigma<n+1} into {L(0,n+1)=2, X1=1}",
              lands_exactly_twice, {"domain": len(once)}),
        Claim("flip is injective on {L=1, X1=1, sigma<n+1}",
              len(set(image_once)) == len(once), {"images": len(set(image_once))}),
        Claim("flip maps {L(0,n+1)=2, X1=1} into {L=1, X1=1, sigma<n+1}",
              lands_in_once, {"domain": len(twice)}),
        Claim("flip is injective on {L=2, X1=1}",
              len(set(image_twice)) == len(twice), {"images": len(set(image_twice))}),
        Claim("|{L=1, X1=1, sigma<n+1}| = |{L=2, X1=1}|",
              len(once) == len(twice), {"left": len(once), "right": len(twice)}),
        Claim("flip is an involution on both sets", involution, {}),
        Claim("|{L=1, X1=1, sigma=n+1}| = |{S_j >= 0, S_n = 0}|",
              once_at_end == excursions, {"left": once_at_end, "right": excursions}),
    ]


def _reflection_claims(n: int) -> list[Claim]:
    touched = [p for p in _all_paths(n) if p.end == 0 and hitting_time(p, -1) is not None]
    from_minus_two = [p for p in _all_paths(n, -2) if p.end == 0]
    images = [reflect_before_first_hit(p) for p in touched]
    target = set(from_minus_two)
    expected = math.comb(n, (n + 2) // 2) if n % 2 == 0 and n >= 2 else 0
    nonneg = sum(1 for p in _all_paths(n) if p.end == 0 and min(p.positions) >= 0)
    ballot = math.comb(n, n // 2) - math.comb(n, n // 2 + 1) if n % 2 == 0 else 0
    return [
        Claim("reflection maps {S0=0, Sn=0, sigma_-1<=n} into {S0=-2, Sn=0}",
              all(q in target for q in images), {"domain": len(touched)}),
        Claim("reflection is injective",
              len(set(images)) == len(images), {"images": len(set(images))}),
        Claim("reflection is an involution",
              all(reflect_before_first_hit(q) == p for p, q in zip(touched, images)), {}),
        Claim("|{S0=0, Sn=0, sigma_-1<=n}| = |{S0=-2, Sn=0}| = binom(n, (n+2)/2)",
              len(touched) == len(from_minus_two) == expected,
              {"left": len(touched), "right": len(from_minus_two), "binomial": expected}),
        Claim("|{S_j >= 0, Sn=0}| = binom(n, n/2) - binom(n, (n+2)/2)",
              nonneg == ballot, {"paths": nonneg, "formula": ballot}),
    ]


def verify_injection_sets(n_plus_1: int) -> BijectionReport:
    """Exhaustively check the flip and reflection claims at horizon n+1.

    The reflection claims are checked at the largest even n <= n+1 (for odd
    n both sides are empty).
    """
    if not 1 <= n_plus_1 <= MAX_CERTIFY:
        raise ValueError(f"n_plus_1 must lie in [1, {MAX_CERTIFY}], got {n_plus_1}")
    reflection_n = n_plus_1 - (n_plus_1 % 2)
    claims = _flip_claims(n_plus_1)
    if reflection_n >= 2:
        claims += _reflection_claims(reflection_n)
    return BijectionReport(n_plus_1, reflection_n, claims)
