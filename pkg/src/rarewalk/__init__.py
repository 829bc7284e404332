"""Rarely visited edges of the simple random walk on Z.

Exact evaluators, an exhaustive-enumeration oracle, path-bijection checks and
a reproducible Monte Carlo engine for alpha(n), the number of edges crossed
exactly once by time n.
"""

__version__ = "0.1.0"

from .closed_form import (  # noqa: E402
    EventTable,
    build_event_table,
    convergence_report,
    double_factorial,
    expectation_alpha_ladder,
    expectation_alpha_recursion,
    prob_C1,
    prob_C2,
    prob_D1,
    prob_D2,
    prob_return_zero,
)
from .walk import EdgeLedger, SiteLedger, WalkPath, extend, hitting_time, rare_edge_count, rare_site_count  # noqa: E402

__all__ = [
    "EdgeLedger",
    "EventTable",
    "SiteLedger",
    "WalkPath",
    "build_event_table",
    "convergence_report",
    "double_factorial",
    "expectation_alpha_ladder",
    "expectation_alpha_recursion",
    "extend",
    "hitting_time",
    "prob_C1",
    "prob_C2",
    "prob_D1",
    "prob_D2",
    "prob_return_zero",
    "rare_edge_count",
    "rare_site_count",
]
