"""Compiled inner loops for the simulation engine.

Edge counts live in a dense int32 buffer indexed by ``y + n`` for a walk of
``n`` steps, which covers every reachable edge ``-n <= y <= n - 1``.  Only the
visited window is touched, and it is zeroed again before the buffer is reused,
so a worker pays O(range) per replica rather than O(n).

Replicas are split into fixed chunks; each replica writes to its own output
row, so results do not depend on the thread count.
"""

import numba as nb
import numpy as np

from .rng import nb_fill_biased, nb_fill_fair, nb_replica_key

CHUNK = 256

# stats row layout
ALPHA, ALPHA_PLUS, ALPHA_MINUS, F1, END = range(5)
NSTATS = 5


@nb.njit(cache=True)
def path_stats(steps, counts, row):
    """Fill ``row`` with (alpha, alpha+, alpha-, f1, S_n) and clean ``counts``."""
    n = steps.shape[0]
    off = n
    pos = 0
    lo = 0
    hi = 0
    for i in range(n):
        s = np.int64(steps[i])
        counts[pos + ((s - 1) >> 1) + off] += 1
        pos += s
        lo = min(lo, pos)
        hi = max(hi, pos)
    alpha = 0
    ap = 0
    for y in range(lo, hi):
        if counts[y + off] == 1:
            alpha += 1
            if y >= 0:
                ap += 1
    # xi(x) = (L(x-1) + L(x) + [x == 0] + [x == S_n]) / 2
    f1 = 0
    for x in range(lo, hi + 1):
        twice = 0
        if x > lo:
            twice += counts[x - 1 + off]
        if x < hi:
            twice += counts[x + off]
        if x == 0:
            twice += 1
        if x == pos:
            twice += 1
        if twice == 2:
            f1 += 1
    for y in range(lo, hi):
        counts[y + off] = 0
    row[ALPHA] = alpha
    row[ALPHA_PLUS] = ap
    row[ALPHA_MINUS] = alpha - ap
    row[F1] = f1
    row[END] = pos


@nb.njit(cache=True)
def running_max_ratio(steps, counts, weight, n_min):
    """Max over n in [n_min, len(steps)] of alpha(n) * weight[n], and its argmax."""
    n_total = steps.shape[0]
    off = n_total
    pos = 0
    lo = 0
    hi = 0
    alpha = 0
    best = -1.0
    best_n = -1
    for i in range(n_total):
        s = np.int64(steps[i])
        y = pos + ((s - 1) >> 1)
        pos += s
        lo = min(lo, pos)
        hi = max(hi, pos)
        c = counts[y + off] + 1
        counts[y + off] = c
        if c == 1:
            alpha += 1
        elif c == 2:
            alpha -= 1
        t = i + 1
        if t >= n_min:
            r = alpha * weight[t]
            if r > best:
                best = r
                best_n = t
    for y in range(lo, hi):
        counts[y + off] = 0
    return best, best_n


@nb.njit(cache=True)
def audit_path(steps, counts, viol):
    """Tally ledger invariant violations along one path into ``viol``.

    viol[0]: sum of counts != n          viol[1]: alpha != alpha+ + alpha-
    viol[2]: alpha+ * alpha- != 0        viol[3]: |alpha(n+1) - alpha(n)| > 1
    viol[4]: parity law broken           viol[5]: running alpha != recount
    """
    n = steps.shape[0]
    off = n
    pos = 0
    lo = 0
    hi = 0
    ap = 0
    am = 0
    prev = 0
    for i in range(n):
        s = np.int64(steps[i])
        y = pos + ((s - 1) >> 1)
        pos += s
        lo = min(lo, pos)
        hi = max(hi, pos)
        c = counts[y + off] + 1
        counts[y + off] = c
        d = 0
        if c == 1:
            d = 1
        elif c == 2:
            d = -1
        if y >= 0:
            ap += d
        else:
            am += d
        if ap * am != 0:
            viol[2] += 1
        cur = ap + am
        if abs(cur - prev) > 1:
            viol[3] += 1
        prev = cur
    total = 0
    alpha = 0
    rp = 0
    rm = 0
    a = min(0, pos)
    b = max(0, pos)
    parity_bad = 0
    for y in range(lo, hi):
        c = counts[y + off]
        total += c
        if c == 1:
            alpha += 1
            if y >= 0:
                rp += 1
            else:
                rm += 1
        odd = (c & 1) == 1
        inside = a <= y and y < b
        if odd != inside:
            parity_bad = 1
        counts[y + off] = 0
    if total != n:
        viol[0] += 1
    if alpha != rp + rm:
        viol[1] += 1
    viol[4] += parity_bad
    if alpha != prev or rp != ap or rm != am:
        viol[5] += 1


@nb.njit(cache=True, parallel=True)
def run_fair(master_seed, n, replicas, out):
    nchunks = (replicas + CHUNK - 1) // CHUNK
    for c in nb.prange(nchunks):
        counts = np.zeros(2 * n + 1, np.int32)
        steps = np.empty(n, np.int8)
        for i in range(c * CHUNK, min(replicas, (c + 1) * CHUNK)):
            nb_fill_fair(nb_replica_key(master_seed, i), steps)
            path_stats(steps, counts, out[i])


@nb.njit(cache=True, parallel=True)
def run_biased(master_seed, n, p, replicas, out):
    nchunks = (replicas + CHUNK - 1) // CHUNK
    for c in nb.prange(nchunks):
        counts = np.zeros(2 * n + 1, np.int32)
        steps = np.empty(n, np.int8)
        for i in range(c * CHUNK, min(replicas, (c + 1) * CHUNK)):
            nb_fill_biased(nb_replica_key(master_seed, i), p, steps)
            path_stats(steps, counts, out[i])


@nb.njit(cache=True, parallel=True)
def run_limsup(master_seed, n_total, n_min, replicas, weight, out_max, out_arg):
    for i in nb.prange(replicas):
        counts = np.zeros(2 * n_total + 1, np.int32)
        steps = np.empty(n_total, np.int8)
        nb_fill_fair(nb_replica_key(master_seed, i), steps)
        best, best_n = running_max_ratio(steps, counts, weight, n_min)
        out_max[i] = best
        out_arg[i] = best_n


@nb.njit(cache=True, parallel=True)
def run_audit(master_seed, n, replicas, viol_out):
    nchunks = (replicas + CHUNK - 1) // CHUNK
    for c in nb.prange(nchunks):
        counts = np.zeros(2 * n + 1, np.int32)
        steps = np.empty(n, np.int8)
        viol = np.zeros(6, np.int64)
        for i in range(c * CHUNK, min(replicas, (c + 1) * CHUNK)):
            nb_fill_fair(nb_replica_key(master_seed, i), steps)
            audit_path(steps, counts, viol)
        viol_out[c] = viol
