"""Counter-based random streams.

Replica ``i`` under master seed ``s`` gets the key ``mix64(mix64(s) ^ (i * M))``
and its ``j``-th 64-bit word is ``mix64(key + (j + 1) * GAMMA)``.  Each word is
a pure function of ``(s, i, j)``, so streams can be produced in any order and
on any number of threads without changing a single bit.

``mix64`` is the SplitMix64 finaliser.  The numba versions below must agree
with the pure-Python reference; ``tests/test_rng.py`` checks that.
"""

from __future__ import annotations

import secrets

import numba as nb
import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
REPLICA_MULT = 0xD1342543DE82EF95

_GAMMA = np.uint64(GAMMA)
_REPLICA_MULT = np.uint64(REPLICA_MULT)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_TWO53_INV = 1.0 / 9007199254740992.0


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def replica_key(master_seed: int, replica: int) -> int:
    return mix64(mix64(master_seed) ^ ((replica * REPLICA_MULT) & MASK64))


def word(key: int, j: int) -> int:
    return mix64(key + (j + 1) * GAMMA)


def fair_steps_reference(master_seed: int, replica: int, n: int) -> list[int]:
    """Pure-Python fair step stream; bit b of word j drives step 64*j + b."""
    key = replica_key(master_seed, replica)
    out = []
    j = 0
    while len(out) < n:
        w = word(key, j)
        for b in range(min(64, n - len(out))):
            out.append(1 if (w >> b) & 1 else -1)
        j += 1
    return out


def biased_steps_reference(master_seed: int, replica: int, n: int, p: float) -> list[int]:
    """Pure-Python biased stream; step j is +1 when the j-th uniform is below p."""
    key = replica_key(master_seed, replica)
    return [1 if (word(key, j) >> 11) * _TWO53_INV < p else -1 for j in range(n)]


def fresh_seed() -> int:
    return secrets.randbits(64)


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


@nb.njit(cache=True, inline="always")
def nb_mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@nb.njit(cache=True)
def nb_replica_key(master_seed, replica):
    return nb_mix64(nb_mix64(master_seed) ^ (np.uint64(replica) * _REPLICA_MULT))


@nb.njit(cache=True)
def nb_fill_fair(key, out):
    n = out.shape[0]
    nwords = (n + 63) // 64
    ctr = np.uint64(key)
    for j in range(nwords):
        ctr = ctr + _GAMMA
        w = nb_mix64(ctr)
        base = j * 64
        top = min(64, n - base)
        for b in range(top):
            out[base + b] = 1 if (w >> np.uint64(b)) & _ONE else -1


@nb.njit(cache=True)
def nb_fill_biased(key, p, out):
    n = out.shape[0]
    ctr = np.uint64(key)
    for j in range(n):
        ctr = ctr + _GAMMA
        u = np.float64(nb_mix64(ctr) >> _S11) * _TWO53_INV
        out[j] = 1 if u < p else -1
