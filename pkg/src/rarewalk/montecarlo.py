"""Replicated simulation of alpha(n) and friends.

Replica ``i`` of a run with master seed ``s`` is driven by the counter-based
stream ``(s, i)`` from :mod:`rarewalk.rng`, so every aggregate is a pure
function of the parameters and the seed, whatever the worker count.  Means
and variances are accumulated as exact integers.

All thresholds of the form a (log n)**2 use the natural logarithm, and the
tail event is the strict one, alpha(n) > a (log n)**2.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numba
import numpy as np
from scipy import stats

from . import kernels
from .rng import biased_steps_reference, check_seed, fair_steps_reference, mix64, nb_fill_biased, nb_fill_fair, replica_key
from .walk import EdgeLedger, WalkPath, rare_edge_count, rare_site_count

logger = logging.getLogger(__name__)

CONFIDENCE = 0.95


def set_threads(threads: Optional[int]) -> int:
    """Cap numba's worker count; returns the count actually in force."""
    if threads is not None:
        if threads < 1:
            raise ValueError(f"threads must be >= 1, got {threads}")
        numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
    return numba.get_num_threads()


def derive_seed(master_seed: int, label: int) -> int:
    """Independent sub-seed for one cell of a grid run (e.g. one n value)."""
    return mix64(master_seed ^ mix64(label + 0x632BE59BD9B4E019))


@dataclass(frozen=True)
class ReplicaSummary:
    alpha: int
    alpha_plus: int
    alpha_minus: int
    f1: int
    terminal_position: int
    checkpoint_values: Optional[tuple[tuple[int, int], ...]] = None


def _steps_array(steps) -> np.ndarray:
    arr = np.asarray(list(steps) if not isinstance(steps, np.ndarray) else steps, dtype=np.int8)
    if arr.ndim != 1 or not np.all((arr == 1) | (arr == -1)):
        raise ValueError("steps must be a flat sequence of +1/-1")
    return arr


def generate_steps(n: int, master_seed: int, replica: int = 0, p: float = 0.5) -> np.ndarray:
    """The step sequence the engine uses for replica ``replica``."""
    out = np.empty(n, np.int8)
    key = np.uint64(replica_key(check_seed(master_seed), replica))
    if p == 0.5:
        nb_fill_fair(key, out)
    else:
        nb_fill_biased(key, float(p), out)
    return out


def simulate_replica(
    n: int,
    step_source: Optional[Iterable[int]] = None,
    *,
    master_seed: int = 0,
    replica: int = 0,
    p: float = 0.5,
    checkpoints: Optional[Sequence[int]] = None,
) -> ReplicaSummary:
    """Run one walk of n steps and summarise it.

    ``step_source`` forces the steps (it must yield at least n values);
    otherwise they come from the ``(master_seed, replica)`` stream with
    P(step = +1) = p.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if step_source is None:
        steps = generate_steps(n, master_seed, replica, p)
    else:
        steps = _steps_array(step_source)[:n]
        if steps.size < n:
            raise ValueError(f"step source supplied {steps.size} steps, need {n}")
    row = np.zeros(kernels.NSTATS, np.int64)
    kernels.path_stats(steps, np.zeros(2 * n + 1, np.int32), row)
    marks = None
    if checkpoints:
        wanted = sorted(set(int(c) for c in checkpoints if 1 <= c <= n))
        ledger = EdgeLedger()
        pos = 0
        got = []
        it = iter(wanted)
        nxt = next(it, None)
        for t, s in enumerate(steps, start=1):
            ledger.extend(pos, pos + int(s))
            pos += int(s)
            if t == nxt:
                got.append((t, ledger.alpha))
                nxt = next(it, None)
        marks = tuple(got)
    return ReplicaSummary(*(int(v) for v in row), checkpoint_values=marks)


def run_replicas(
    n: int,
    replicas: int,
    master_seed: int,
    p: float = 0.5,
    threads: Optional[int] = None,
    debug: bool = False,
) -> np.ndarray:
    """Per-replica rows (alpha, alpha+, alpha-, f1, S_n), shape (replicas, 5).

    With ``debug`` set, about 1% of replicas are recomputed through the
    pure-Python ledger and compared.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if replicas < 1:
        raise ValueError(f"replicas must be >= 1, got {replicas}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    seed = np.uint64(check_seed(master_seed))
    set_threads(threads)
    out = np.zeros((replicas, kernels.NSTATS), np.int64)
    if p == 0.5:
        kernels.run_fair(seed, n, replicas, out)
    else:
        kernels.run_biased(seed, n, float(p), replicas, out)
    if debug:
        _spot_check(out, n, int(seed), p)
    return out


def _spot_check(out: np.ndarray, n: int, master_seed: int, p: float):
    for i in range(0, out.shape[0], 100):
        if p == 0.5:
            steps = fair_steps_reference(master_seed, i, n)
        else:
            steps = biased_steps_reference(master_seed, i, n, p)
        path = WalkPath(tuple(steps))
        ledger = EdgeLedger.from_path(path)
        a, ap, am = rare_edge_count(path)
        expect = (a, ap, am, rare_site_count(path), path.end)
        got = tuple(int(v) for v in out[i])
        if got != expect or (ledger.alpha, ledger.alpha_plus, ledger.alpha_minus) != (a, ap, am):
            raise AssertionError(f"replica {i}: engine {got} != ledger {expect}")
        if ap * am != 0 or a != ap + am:
            raise AssertionError(f"replica {i}: ledger invariants broken: {expect}")


# -- estimators --------------------------------------------------------------


@dataclass(frozen=True)
class MeanEstimate:
    n: int
    stat: str
    replicas: int
    master_seed: int
    mean: float
    std_error: float
    total: int
    total_sq: int

    def within(self, target: float, n_se: float = 3.0) -> bool:
        if self.std_error == 0.0:
            return self.mean == target
        return abs(self.mean - target) <= n_se * self.std_error


def _mean_estimate(values: np.ndarray, n: int, stat: str, seed: int) -> MeanEstimate:
    r = int(values.size)
    total = int(values.sum())
    total_sq = int(np.square(values, dtype=np.int64).sum())
    mean = total / r
    if r > 1:
        # exact integer numerator avoids cancellation in the sample variance
        var = (r * total_sq - total * total) / (r * (r - 1))
        se = math.sqrt(max(var, 0.0) / r)
    else:
        se = 0.0
    return MeanEstimate(n, stat, r, seed, mean, se, total, total_sq)


_STAT_COLUMN = {"alpha": 0, "alpha_plus": 1, "alpha_minus": 2, "f1": 3, "end": 4}


def estimate_expectation(
    n: int,
    replicas: int,
    master_seed: int,
    stat: str = "alpha",
    threads: Optional[int] = None,
    p: float = 0.5,
) -> MeanEstimate:
    if replicas < 1:
        raise ValueError(f"replicas must be >= 1, got {replicas}")
    if stat not in _STAT_COLUMN:
        raise ValueError(f"unknown statistic {stat!r}; expected one of {sorted(_STAT_COLUMN)}")
    out = run_replicas(n, replicas, master_seed, p, threads)
    return _mean_estimate(out[:, _STAT_COLUMN[stat]], n, stat, master_seed)


def clopper_pearson(hits: int, trials: int, confidence: float = CONFIDENCE) -> tuple[float, float]:
    """Exact two-sided binomial interval for hits / trials."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    tail = (1.0 - confidence) / 2.0
    lo = 0.0 if hits == 0 else float(stats.beta.ppf(tail, hits, trials - hits + 1))
    hi = 1.0 if hits == trials else float(stats.beta.ppf(1.0 - tail, hits + 1, trials - hits))
    return lo, hi


def tail_threshold(n: int, a: float) -> float:
    return a * math.log(n) ** 2


@dataclass(frozen=True)
class TailEstimate:
    n: int
    a: float
    threshold: float
    hits: int
    replicas: int
    p_hat: float
    ci_low: float
    ci_high: float
    master_seed: int

    def covers(self, value: float) -> bool:
        return self.ci_low <= value <= self.ci_high


def _tail_from_alpha(alpha: np.ndarray, n: int, a: float, seed: int) -> TailEstimate:
    thr = tail_threshold(n, a)
    hits = int(np.count_nonzero(alpha > thr))
    r = int(alpha.size)
    lo, hi = clopper_pearson(hits, r)
    return TailEstimate(n, a, thr, hits, r, hits / r, lo, hi, seed)


def estimate_tail(
    n: int,
    a: float,
    replicas: int,
    master_seed: int,
    threads: Optional[int] = None,
    p: float = 0.5,
) -> TailEstimate:
    """P(alpha(n) > a (ln n)**2) with a Clopper-Pearson interval."""
    if a <= 0:
        raise ValueError(f"a must be > 0, got {a}")
    if replicas < 1:
        raise ValueError(f"replicas must be >= 1, got {replicas}")
    out = run_replicas(n, replicas, master_seed, p, threads)
    return _tail_from_alpha(out[:, 0], n, a, master_seed)


@dataclass
class SlopeReport:
    a: float
    target_slope: float
    rows: list[dict]
    fitted_slope: Optional[float]
    master_seed: int


def tail_slope_report(
    n_grid: Sequence[int],
    a: float,
    replicas_per_n: int,
    master_seed: int,
    threads: Optional[int] = None,
) -> SlopeReport:
    """Tail estimates across n and the least-squares slope of ln p_hat on ln n.

    Each n runs on its own derived seed.  Rows with no hits are flagged and
    left out of the fit.  The slope is compared with -2a by the caller, not
    here.
    """
    if a <= 0:
        raise ValueError(f"a must be > 0, got {a}")
    rows = []
    for n in n_grid:
        if n < 3:
            raise ValueError(f"every n in the grid must be >= 3, got {n}")
        sub = derive_seed(master_seed, n)
        est = estimate_tail(n, a, replicas_per_n, sub, threads)
        usable = est.hits > 0
        rows.append({
            "n": n,
            "threshold": est.threshold,
            "hits": est.hits,
            "replicas": est.replicas,
            "p_hat": est.p_hat,
            "ci_low": est.ci_low,
            "ci_high": est.ci_high,
            "log_p_over_log_n": math.log(est.p_hat) / math.log(n) if usable else None,
            "sub_seed": sub,
            "in_fit": usable,
        })
    fit = [(math.log(r["n"]), math.log(r["p_hat"])) for r in rows if r["in_fit"]]
    slope = None
    if len(fit) >= 2:
        x, y = np.array(fit).T
        slope = float(np.polyfit(x, y, 1)[0])
    return SlopeReport(a, -2.0 * a, rows, slope, master_seed)


@dataclass
class LimsupProbe:
    horizon: int
    n_min: int
    maxima: np.ndarray
    argmax: np.ndarray
    master_seed: Optional[int] = None
    quantiles: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.quantiles and self.maxima.size:
            qs = (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0)
            self.quantiles = {f"q{int(q * 100):02d}": float(np.quantile(self.maxima, q)) for q in qs}


LIMSUP_BRACKET = (1.0 / 128.0, 0.5)


def _log_weights(horizon: int) -> np.ndarray:
    w = np.zeros(horizon + 1)
    t = np.arange(2, horizon + 1)
    w[2:] = 1.0 / np.log(t) ** 2
    return w


def limsup_path(steps, n_min: int) -> tuple[float, int]:
    """max over n in [n_min, len] of alpha(n) / (ln n)**2 along one path."""
    steps = _steps_array(steps)
    if n_min < 2:
        raise ValueError(f"n_min must be >= 2 (ln n > 0), got {n_min}")
    if steps.size < n_min:
        raise ValueError("path is shorter than n_min")
    counts = np.zeros(2 * steps.size + 1, np.int32)
    best, arg = kernels.running_max_ratio(steps, counts, _log_weights(steps.size), n_min)
    return float(best), int(arg)


def limsup_probe(
    N: int,
    n_min: int,
    replicas: int,
    master_seed: int,
    threads: Optional[int] = None,
) -> LimsupProbe:
    """Per-replica max of alpha(n)/(ln n)**2 over n_min <= n <= N.

    This is a finite-horizon proxy; it makes no claim about the limit.
    """
    if n_min < 2:
        raise ValueError(f"n_min must be >= 2 (ln n > 0), got {n_min}")
    if N < n_min:
        raise ValueError(f"N must be >= n_min, got N={N}, n_min={n_min}")
    if replicas < 1:
        raise ValueError(f"replicas must be >= 1, got {replicas}")
    seed = np.uint64(check_seed(master_seed))
    set_threads(threads)
    maxima = np.zeros(replicas)
    argmax = np.zeros(replicas, np.int64)
    kernels.run_limsup(seed, N, n_min, replicas, _log_weights(N), maxima, argmax)
    return LimsupProbe(N, n_min, maxima, argmax, master_seed)


def biased_walk_summary(
    n: int,
    p: float,
    replicas: int,
    master_seed: int,
    a: Optional[float] = None,
    threads: Optional[int] = None,
) -> dict:
    """Exploratory statistics of alpha(n) when P(step = +1) = p.

    There is no reference value for p != 1/2.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    out = run_replicas(n, replicas, master_seed, p, threads)
    summary = {
        "n": n,
        "p": p,
        "replicas": replicas,
        "master_seed": master_seed,
        "alpha": _mean_estimate(out[:, 0], n, "alpha", master_seed),
        "alpha_plus": _mean_estimate(out[:, 1], n, "alpha_plus", master_seed),
        "alpha_minus": _mean_estimate(out[:, 2], n, "alpha_minus", master_seed),
        "share_plus_side": float(np.count_nonzero(out[:, 1] > 0)) / replicas,
        "share_minus_side": float(np.count_nonzero(out[:, 2] > 0)) / replicas,
    }
    if a is not None:
        summary["tail"] = _tail_from_alpha(out[:, 0], n, a, master_seed)
    return summary


def audit_invariants(n: int, replicas: int, master_seed: int, threads: Optional[int] = None) -> dict:
    """Count ledger invariant violations over random fair paths."""
    seed = np.uint64(check_seed(master_seed))
    set_threads(threads)
    nchunks = (replicas + kernels.CHUNK - 1) // kernels.CHUNK
    viol = np.zeros((nchunks, 6), np.int64)
    kernels.run_audit(seed, n, replicas, viol)
    names = ("sum_counts", "alpha_split", "one_sided", "step_bound", "parity", "recount")
    return dict(zip(names, (int(v) for v in viol.sum(axis=0))))
