"""Walk paths and local-time bookkeeping on Z.

An edge <y, y+1> is keyed by its left endpoint y.  The positive side of the
axis owns the edges with y >= 0, the negative side owns y <= -1, so the edge
<-1, 0> is a negative edge.

Site occupation counts time 0; edge crossings start at step 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "WalkPath",
    "EdgeLedger",
    "SiteLedger",
    "extend",
    "rare_edge_count",
    "rare_site_count",
    "hitting_time",
]


@dataclass(frozen=True)
class WalkPath:
    """A finite nearest-neighbour path: ``steps`` of +1/-1 from ``start``."""

    steps: tuple[int, ...]
    start: int = 0

    def __post_init__(self):
        steps = tuple(int(s) for s in self.steps)
        for s in steps:
            if s not in (1, -1):
                raise ValueError(f"steps must be +1 or -1, got {s}")
        object.__setattr__(self, "steps", steps)

    @classmethod
    def from_positions(cls, positions: Sequence[int]) -> "WalkPath":
        if len(positions) == 0:
            raise ValueError("a path needs at least its starting site")
        steps = tuple(int(b) - int(a) for a, b in zip(positions, positions[1:]))
        return cls(steps, int(positions[0]))

    @classmethod
    def from_bits(cls, bits: int, n: int, start: int = 0) -> "WalkPath":
        """Decode an n-bit integer; bit i (LSB first) set means step i+1 is up."""
        return cls(tuple(1 if (bits >> i) & 1 else -1 for i in range(n)), start)

    def to_bits(self) -> int:
        return sum(1 << i for i, s in enumerate(self.steps) if s == 1)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def positions(self) -> tuple[int, ...]:
        out = [self.start]
        for s in self.steps:
            out.append(out[-1] + s)
        return tuple(out)

    @property
    def end(self) -> int:
        return self.start + sum(self.steps)

    def negated(self) -> "WalkPath":
        return WalkPath(tuple(-s for s in self.steps), -self.start)


class _DenseCounter:
    """Integer counts over a contiguous window of Z, grown geometrically."""

    __slots__ = ("_lo", "_data")

    def __init__(self):
        self._lo = 0
        self._data: list[int] = []

    def _reserve(self, key: int):
        if not self._data:
            self._lo = key - 4
            self._data = [0] * 8
            return
        hi = self._lo + len(self._data)
        if key < self._lo:
            grow = max(self._lo - key, len(self._data))
            self._data[:0] = [0] * grow
            self._lo -= grow
        elif key >= hi:
            grow = max(key - hi + 1, len(self._data))
            self._data.extend([0] * grow)

    def bump(self, key: int) -> int:
        self._reserve(key)
        i = key - self._lo
        self._data[i] += 1
        return self._data[i]

    def get(self, key: int) -> int:
        i = key - self._lo
        if 0 <= i < len(self._data):
            return self._data[i]
        return 0

    def items(self):
        return ((self._lo + i, c) for i, c in enumerate(self._data) if c)


@dataclass
class EdgeLedger:
    """Edge crossing counts L(y, n) with the rare-edge tallies kept current."""

    alpha: int = 0
    alpha_plus: int = 0
    alpha_minus: int = 0
    steps_consumed: int = 0
    _counts: _DenseCounter = field(default_factory=_DenseCounter, repr=False)

    def extend(self, from_pos: int, to_pos: int) -> "EdgeLedger":
        if abs(to_pos - from_pos) != 1:
            raise ValueError(f"positions {from_pos} and {to_pos} are not adjacent")
        y = min(from_pos, to_pos)
        c = self._counts.bump(y)
        if c == 1:
            delta = 1
        elif c == 2:
            delta = -1
        else:
            delta = 0
        if delta:
            self.alpha += delta
            if y >= 0:
                self.alpha_plus += delta
            else:
                self.alpha_minus += delta
        self.steps_consumed += 1
        return self

    def count(self, y: int) -> int:
        return self._counts.get(y)

    @property
    def counts(self) -> dict[int, int]:
        return dict(self._counts.items())

    @classmethod
    def from_path(cls, path: WalkPath) -> "EdgeLedger":
        ledger = cls()
        pos = path.start
        for s in path.steps:
            ledger.extend(pos, pos + s)
            pos += s
        return ledger


@dataclass
class SiteLedger:
    """Site occupation counts xi(x, n), time 0 included."""

    f1: int = 0
    _visits: _DenseCounter = field(default_factory=_DenseCounter, repr=False)

    def visit(self, x: int) -> "SiteLedger":
        c = self._visits.bump(x)
        if c == 1:
            self.f1 += 1
        elif c == 2:
            self.f1 -= 1
        return self

    def visits_at(self, x: int) -> int:
        return self._visits.get(x)

    @property
    def visits(self) -> dict[int, int]:
        return dict(self._visits.items())

    @classmethod
    def from_path(cls, path: WalkPath) -> "SiteLedger":
        ledger = cls()
        for x in path.positions:
            ledger.visit(x)
        return ledger


def extend(ledger: EdgeLedger, from_pos: int, to_pos: int) -> EdgeLedger:
    return ledger.extend(from_pos, to_pos)


def rare_edge_count(path: WalkPath) -> tuple[int, int, int]:
    """Return (alpha, alpha_plus, alpha_minus) for the whole path.

    Tabulates crossings in one pass over the position array rather than
    through :class:`EdgeLedger`, so the two can be checked against each other.
    """
    if len(path) == 0:
        return 0, 0, 0
    pos = np.asarray(path.positions, dtype=np.int64)
    edges = np.minimum(pos[:-1], pos[1:])
    lo = int(edges.min())
    counts = np.bincount(edges - lo)
    once = np.flatnonzero(counts == 1) + lo
    plus = int(np.count_nonzero(once >= 0))
    minus = int(once.size) - plus
    return int(once.size), plus, minus


def rare_site_count(path: WalkPath) -> int:
    """Number of sites occupied at exactly one time in 0..n."""
    pos = np.asarray(path.positions, dtype=np.int64)
    counts = np.bincount(pos - pos.min())
    return int(np.count_nonzero(counts == 1))


def hitting_time(path: WalkPath, x: int) -> Optional[int]:
    """First k >= 0 with S_k = x, or None if the path never gets there."""
    for k, p in enumerate(path.positions):
        if p == x:
            return k
    return None

