"""Command-line front end.

Every subcommand prints a CSV (default) or JSON report to stdout, or writes
it to ``--output``.  Stochastic subcommands take ``--seed``; without one a
fresh 64-bit seed is drawn, announced on stderr and recorded in the report.

Environment overrides:
    RAREWALK_THREADS     default for --threads
    RAREWALK_OUTPUT_DIR  base directory for relative --output paths; with no
                         --output, reports go to <dir>/<command>.<format>
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from . import bijections, closed_form as cf, enumeration as en, moments, montecarlo as mc
from .report import Report
from .rng import check_seed, fresh_seed

STOCHASTIC = {"tail", "tail-slope", "limsup", "sites", "biased"}


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(x)) if "e" in x.lower() else int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def _count(text: str) -> int:
    """Integers, also written as 1e6 or 2**18."""
    try:
        if "**" in text:
            base, exp = text.split("**")
            return int(base) ** int(exp)
        value = float(text) if ("e" in text.lower() or "." in text) else int(text)
        if float(value) != int(value):
            raise ValueError
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")


def _seed(text: str) -> int:
    try:
        return check_seed(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $RAREWALK_THREADS or all)")

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=_seed, default=None, help="64-bit master seed")
    seeded.add_argument("--replicas", type=_count, required=True)

    p = argparse.ArgumentParser(prog="rarewalk", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    s = sub.add_parser("expect", parents=[common], help="E alpha(n) by the exact routes")
    s.add_argument("--n", type=_count, required=True)
    s.add_argument("--n-max", type=_count, default=None, help="tabulate every n from --n to --n-max")
    s.add_argument("--route", choices=("recursion", "ladder", "telescoped", "both", "all"), default="both")

    s = sub.add_parser("enumerate", parents=[common], help="exhaustive statistics over all 2^n paths")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--stat", default="alpha-mean",
                   choices=("alpha-mean", "alpha-dist", "alpha-plus-mean", "alpha-minus-mean",
                            "f1-mean", "f1-dist", "moment"))
    s.add_argument("--k", type=int, default=1, help="subset size for --stat moment")
    s.add_argument("--cap", type=int, default=en.DEFAULT_CAP)

    s = sub.add_parser("events", parents=[common], help="ladder-event probabilities")
    s.add_argument("--t-max", type=_count, required=True)
    s.add_argument("--report", choices=("table", "convergence", "oracle"), default="table")
    s.add_argument("--floating", action="store_true", help="float64 table instead of exact")

    s = sub.add_parser("moments", parents=[common], help="binomial moments E binom(alpha(n), k)")
    s.add_argument("--n", type=_count, default=None)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--mode", choices=("exact", "floating"), default="exact")
    s.add_argument("--growth", action="store_true", help="growth report over --n-list")
    s.add_argument("--n-list", type=_int_list, default=None)
    s.add_argument("--a", type=float, default=1.0)
    s.add_argument("--epsilon", type=float, default=0.1)

    s = sub.add_parser("bijection-check", parents=[common], help="certify the path bijections")
    s.add_argument("--n-plus-1", type=int, required=True)

    s = sub.add_parser("tail", parents=[common, seeded], help="P(alpha(n) > a (ln n)^2)")
    s.add_argument("--n", type=_count, required=True)
    s.add_argument("--a", type=float, required=True)

    s = sub.add_parser("tail-slope", parents=[common, seeded], help="tail exponent across n")
    s.add_argument("--n-grid", type=_int_list, required=True)
    s.add_argument("--a", type=float, required=True)

    s = sub.add_parser("limsup", parents=[common, seeded], help="running max of alpha(n)/(ln n)^2")
    s.add_argument("--N", type=_count, required=True, dest="N")
    s.add_argument("--n-min", type=_count, default=2)

    s = sub.add_parser("sites", parents=[common, seeded], help="rarely visited sites f1(n)")
    s.add_argument("--n", type=_count, required=True)

    s = sub.add_parser("biased", parents=[common, seeded], help="asymmetric walk, exploratory")
    s.add_argument("--n", type=_count, required=True)
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--a", type=float, default=None)
    return p


# -- handlers --------------------------------------------------------------


def _cmd_expect(args) -> Report:
    n_max = args.n_max or args.n
    if n_max < args.n:
        raise UsageError("--n-max must be >= --n")
    routes = {
        "recursion": ["recursion"],
        "ladder": ["ladder"],
        "telescoped": ["telescoped"],
        "both": ["recursion", "ladder"],
        "all": ["recursion", "ladder", "telescoped"],
    }[args.route]
    fns = {
        "recursion": cf.expectation_alpha_recursion,
        "ladder": cf.expectation_alpha_ladder,
        "telescoped": lambda n: cf.expectation_alpha_telescoped(n, exact=True),
    }
    rows = []
    agree_all = True
    for n in range(args.n, n_max + 1):
        values = {r: fns[r](n) for r in routes}
        agree = len(set(values.values())) == 1
        agree_all &= agree
        rows.append({"n": n, **values, "agree": agree})
    return Report("expect", {"n": args.n, "n_max": n_max, "route": args.route}, rows,
                  {"agree": agree_all, "limit": 2})


def _cmd_enumerate(args) -> Report:
    tally = en.enumerate_paths(args.n, args.cap)
    stat = args.stat
    params = {"n": args.n, "stat": stat, "cap": args.cap}
    if stat.endswith("-dist"):
        name = stat[: -len("-dist")]
        dist = tally.distribution(name)
        rows = [{"value": v, "probability": p} for v, p in sorted(dist.items())]
        return Report("enumerate", params, rows, {"total_mass": sum(dist.values()), "paths": tally.total})
    if stat == "moment":
        params["k"] = args.k
        value = tally.binomial_moment(args.k, "alpha")
        return Report("enumerate", params, [{"n": args.n, "k": args.k, "moment": value}])
    name = stat[: -len("-mean")]
    return Report("enumerate", params, [{"n": args.n, "stat": name, "mean": tally.expectation(name)}])


def _cmd_events(args) -> Report:
    t_max = args.t_max
    params = {"t_max": t_max, "report": args.report}
    if args.report == "convergence":
        rows = cf.convergence_report(t_max)
        return Report("events", params, rows, {f"limit.{k}": v for k, v in cf.CONVERGENCE_LIMITS.items()})
    if args.report == "oracle":
        if t_max > en.EVENT_CAP:
            raise UsageError(f"--t-max for the oracle report must be <= {en.EVENT_CAP}")
        rows = []
        for t in range(1, t_max + 1):
            pairs = {
                "c1": (cf.prob_C1(t, True), en.enum_event_probability(en.EventSpec("C1", t))),
                "c2": (cf.prob_C2(t, True), en.enum_event_probability(en.EventSpec("C2", t))),
                "d1": (cf.prob_D1(t, True), en.enum_event_probability(en.EventSpec("D1", t))),
                "d2_gap": (cf.prob_D2(t, True), en.enum_event_probability(en.EventSpec("D2", t, 0))),
            }
            row = {"t": t}
            for k, (closed, brute) in pairs.items():
                row[k] = closed
                row[f"{k}_agree"] = closed == brute
            rows.append(row)
        ok = all(v for r in rows for k, v in r.items() if k.endswith("_agree"))
        return Report("events", params, rows, {"all_agree": ok})
    if not args.floating and t_max > cf.EXACT_HORIZON:
        raise UsageError(f"exact tables stop at t = {cf.EXACT_HORIZON}; pass --floating")
    params["exact"] = not args.floating
    table = cf.build_event_table(t_max, exact=not args.floating)
    rows = []
    for t in range(t_max + 1):
        rows.append({
            "t": t,
            "c2": table.c2[t] if t else None,
            "d1": table.d1[t],
            "d2_gap": table.d2_gap[t] if t else None,
            "c1": (cf.prob_C1(t, table.exact) if t else None),
        })
    return Report("events", params, rows)


def _cmd_moments(args) -> Report:
    if args.growth:
        if not args.n_list:
            raise UsageError("--growth needs --n-list")
        rows = moments.lemma_growth_report(args.n_list, args.a, args.epsilon)
        return Report("moments", {"growth": True, "n_list": args.n_list, "a": args.a, "epsilon": args.epsilon},
                      rows, {"band_low": 0.5 - args.epsilon, "band_high": 0.5 + args.epsilon, "log": "natural"})
    if args.n is None or args.k is None:
        raise UsageError("moments needs --n and --k (or --growth)")
    plus = moments.expected_alpha_k_plus(args.n, args.k, args.mode)
    row = {"n": args.n, "k": args.k, "moment_plus": plus, "moment": 2 * plus}
    return Report("moments", {"n": args.n, "k": args.k, "mode": args.mode}, [row])


def _cmd_bijection(args) -> Report:
    rep = bijections.verify_injection_sets(args.n_plus_1)
    rows = [{"claim": c.name, "passed": c.passed, "counts": c.counts} for c in rep.claims]
    return Report("bijection-check", {"n_plus_1": args.n_plus_1}, rows,
                  {"passed": rep.passed, "reflection_n": rep.reflection_n})


def _cmd_tail(args) -> Report:
    est = mc.estimate_tail(args.n, args.a, args.replicas, args.seed, args.threads)
    row = {k: getattr(est, k) for k in ("n", "a", "threshold", "hits", "replicas", "p_hat", "ci_low", "ci_high")}
    return Report("tail", {"n": args.n, "a": args.a}, [row],
                  {"target_exponent": -2 * args.a, "log": "natural", "confidence": mc.CONFIDENCE})


def _cmd_tail_slope(args) -> Report:
    rep = mc.tail_slope_report(args.n_grid, args.a, args.replicas, args.seed, args.threads)
    return Report("tail-slope", {"n_grid": args.n_grid, "a": args.a}, rep.rows,
                  {"target_slope": rep.target_slope, "fitted_slope": rep.fitted_slope, "log": "natural"})


def _cmd_limsup(args) -> Report:
    probe = mc.limsup_probe(args.N, args.n_min, args.replicas, args.seed, args.threads)
    rows = [{"replica": i, "max_ratio": float(m), "argmax_n": int(a)}
            for i, (m, a) in enumerate(zip(probe.maxima, probe.argmax))]
    summary = dict(probe.quantiles)
    summary["bracket_low"], summary["bracket_high"] = mc.LIMSUP_BRACKET
    return Report("limsup", {"N": args.N, "n_min": args.n_min}, rows, summary)


def _cmd_sites(args) -> Report:
    est = mc.estimate_expectation(args.n, args.replicas, args.seed, "f1", args.threads)
    row = {"n": args.n, "mean_f1": est.mean, "std_error": est.std_error,
           "z_vs_2": (est.mean - 2) / est.std_error if est.std_error else 0.0}
    summary = {"reference": 2, "within_3se": est.within(2.0)}
    if args.n <= 20:
        summary["exact"] = en.enum_expectation_f1(args.n)
    return Report("sites", {"n": args.n}, [row], summary)


def _cmd_biased(args) -> Report:
    s = mc.biased_walk_summary(args.n, args.p, args.replicas, args.seed, args.a, args.threads)
    rows = []
    for key in ("alpha", "alpha_plus", "alpha_minus"):
        e = s[key]
        rows.append({"stat": key, "mean": e.mean, "std_error": e.std_error,
                     "ci_low": e.mean - 1.96 * e.std_error, "ci_high": e.mean + 1.96 * e.std_error})
    summary = {"share_plus_side": s["share_plus_side"], "share_minus_side": s["share_minus_side"],
               "exploratory": True}
    if "tail" in s:
        t = s["tail"]
        summary.update({"tail_hits": t.hits, "tail_p_hat": t.p_hat, "tail_ci_low": t.ci_low,
                        "tail_ci_high": t.ci_high, "tail_threshold": t.threshold})
    return Report("biased", {"n": args.n, "p": args.p, "a": args.a}, rows, summary)


HANDLERS = {
    "expect": _cmd_expect,
    "enumerate": _cmd_enumerate,
    "events": _cmd_events,
    "moments": _cmd_moments,
    "bijection-check": _cmd_bijection,
    "tail": _cmd_tail,
    "tail-slope": _cmd_tail_slope,
    "limsup": _cmd_limsup,
    "sites": _cmd_sites,
    "biased": _cmd_biased,
}


def _resolve_output(command: str, fmt: str, output: Optional[str]) -> Optional[Path]:
    base = os.environ.get("RAREWALK_OUTPUT_DIR")
    if output is None:
        return Path(base) / f"{command}.{fmt}" if base else None
    path = Path(output)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.threads is None and os.environ.get("RAREWALK_THREADS"):
        try:
            args.threads = int(os.environ["RAREWALK_THREADS"])
        except ValueError:
            print("error: RAREWALK_THREADS must be an integer", file=sys.stderr)
            return 2

    seed_source = None
    if args.command in STOCHASTIC:
        if args.seed is None:
            args.seed = fresh_seed()
            seed_source = "generated"
            print(f"rarewalk: no --seed given, using {args.seed}", file=sys.stderr)
        else:
            seed_source = "explicit"

    try:
        threads = mc.set_threads(args.threads)
        report = HANDLERS[args.command](args)
    except (ValueError, UsageError) as exc:
        print(f"rarewalk {args.command}: precondition failed: {exc}", file=sys.stderr)
        return 2

    if args.command in STOCHASTIC:
        report.master_seed = args.seed
        report.seed_source = seed_source
        report.replicas = args.replicas
    report.threads = threads
    text = report.render(args.format)
    out = _resolve_output(args.command, args.format, args.output)
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> None:
    warnings.filterwarnings("ignore", message=".*TBB.*")
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    sys.exit(dispatch(argv))


if __name__ == "__main__":
    main()
