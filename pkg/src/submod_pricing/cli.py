"""Command-line front end: gen, solve, compare, sweep, verify.

Exit codes: 0 success, 1 verification failure, 2 usage or capacity error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import io
from .baselines import BASELINES, random_pricing
from .collab import AggregatedValuation, brute_force_collab, solve_collab, solve_collab_budgeted
from .instances import (
    SyntheticSpec,
    gen_3sat_fixture,
    gen_harmonic,
    gen_hidden_set_fixture,
    gen_partition_fixture,
    gen_synthetic,
    gen_x3c_fixture,
    random_3sat_clauses,
)
from .multi import Buyer, Instance, UnsupportedConfigurationError, solve_multi
from .single import brute_force_single, solve_single, solve_single_budgeted
from .valuation import CapacityError, CoverageValuation, curvature_profile
from .verify import (
    check_curvature_bound,
    check_monotone_submodular,
    check_stable,
    exhaustive_multi_search,
    welfare_profit_gap,
)

CSV_COMPARE_HEADER = ["instance", "proposed", "sellall", "random", "scaled", "ascending"]
CSV_SWEEP_HEADER = ["param", "value", "mode", "profit", "assigned", "seconds"]
QMAX_GRID = [round(0.05 * k, 2) for k in range(1, 20)]
VERIFY_MAX_ITEMS = 14


class UsageError(Exception):
    pass


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SUBMOD_PRICING_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    items = list(items)
    workers = min(_threads(), max(1, len(items)))
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return repr(round(float(x), 10))


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()]


def _read_triples(path: str) -> list[list]:
    text = Path(path).read_text(encoding="utf-8").strip()
    if text.startswith("["):
        return json.loads(text)
    out = []
    for line in text.splitlines():
        line = line.split("#")[0].strip()
        if line:
            out.append([int(t) if t.lstrip("-").isdigit() else t for t in line.replace(",", " ").split()])
    return out


def _emit(doc: dict, out: str | None) -> None:
    if out:
        io.save_json(doc, out)
    else:
        print(io.dumps(doc))


def _cert_path(out: str) -> str:
    p = Path(out)
    return str(p.with_name(p.stem + ".cert.json"))


# ---- gen --------------------------------------------------------------------

def cmd_gen(args) -> int:
    cert = None
    kind = args.kind
    if kind in ("uniform", "powerlaw"):
        if args.v is None or args.w is None or args.d is None:
            raise UsageError("--v, --w and --d are required for synthetic networks")
        spec = SyntheticSpec(args.v, args.w, args.d, args.qmax, kind, args.seed, args.buyers)
        inst = gen_synthetic(spec)
        if args.collab:
            inst.mode = "collaborating"
    elif kind == "3sat":
        if args.clauses:
            clauses = _read_triples(args.clauses)
            inst = gen_3sat_fixture(clauses)
        else:
            if args.v is None or args.w is None:
                raise UsageError("3sat needs --clauses FILE or --v VARS --w CLAUSES")
            clauses, witness = random_3sat_clauses(args.v, args.w, args.seed, args.planted)
            inst = gen_3sat_fixture(clauses, range(1, args.v + 1))
            if witness is not None:
                cert = {"one_in_three_true_variables": witness, "max_profit": len(clauses)}
    elif kind == "x3c":
        if args.universe is None or not args.triples:
            raise UsageError("x3c needs --universe 3L and --triples FILE")
        inst, assignment, prices = gen_x3c_fixture(args.universe, _read_triples(args.triples))
        cert = {
            "assignment": [sorted(part) for part in assignment],
            "prices": prices.to_dict(),
            "note": "these prices are stable iff the triples contain no exact cover",
        }
    elif kind == "partition":
        if not args.values:
            raise UsageError("partition needs --values a1,a2,...")
        inst, prices = gen_partition_fixture(_int_list(args.values))
        cert = {"prices": prices.to_dict()}
    elif kind == "harmonic":
        if args.v is None:
            raise UsageError("harmonic needs --v")
        inst = Instance.of([gen_harmonic(args.v)])
    elif kind == "hidden":
        if args.v is None or args.hidden is None:
            raise UsageError("hidden needs --v and --hidden i,j,...")
        hidden = _int_list(args.hidden)
        f = gen_hidden_set_fixture(range(args.v), hidden)
        inst = Instance.of([f])
        cert = {"hidden_set": sorted(hidden), "max_profit": 2.0 * len(hidden)}
    else:
        raise UsageError(f"unknown kind {kind!r}")

    _emit(io.instance_to_dict(inst), args.out)
    if cert is not None and args.out:
        io.save_json(cert, _cert_path(args.out))
    return 0


# ---- solve ------------------------------------------------------------------

def _resolve_mode(inst: Instance, mode: str | None) -> str:
    if mode:
        return mode
    if inst.mode == "collaborating":
        return "collab"
    return "single" if inst.n == 1 else "multi"


def run_solver(inst: Instance, mode: str, algo: str = "proposed", budget: float | None = None, seed: int = 0):
    if mode == "single":
        if inst.n != 1:
            raise UsageError("single mode needs a one-buyer instance")
        f = inst.buyers[0].valuation
        if budget is None and math.isfinite(inst.buyers[0].budget):
            budget = inst.buyers[0].budget
        if algo == "proposed":
            return solve_single(f) if budget is None else solve_single_budgeted(f, budget)
        if budget is not None:
            raise UsageError("budgets are only supported by the proposed algorithm")
        if algo == "bruteforce":
            return brute_force_single(f)
        if algo == "random":
            return random_pricing(f, seed)
        return BASELINES[algo](f)
    if mode == "multi":
        if budget is not None:
            raise UnsupportedConfigurationError("independent buyers with finite budgets are not supported")
        if algo == "proposed":
            return solve_multi(inst)
        if algo == "bruteforce":
            from .solution import PricingSolution

            profit, prices, assignment = exhaustive_multi_search(inst)
            return PricingSolution(prices, assignment, profit, len(frozenset().union(*assignment)), 1.0,
                                   {"algorithm": "bruteforce"})
        raise UsageError("baselines are single-buyer algorithms")
    if mode == "collab":
        unlimited = Instance(inst.ground, [Buyer(b.valuation) for b in inst.buyers], "collaborating")
        if algo == "proposed":
            if budget is None:
                finite = [b for b in inst.budgets if math.isfinite(b)]
                budget = sum(finite) if finite else None
            return solve_collab(unlimited) if budget is None else solve_collab_budgeted(unlimited, budget)
        if algo == "bruteforce":
            return brute_force_collab(unlimited)
        raise UsageError("baselines are single-buyer algorithms")
    raise UsageError(f"unknown mode {mode!r}")


def _verify_solution(inst: Instance, mode: str, sol, budget=None):
    if len(inst.ground) > VERIFY_MAX_ITEMS:
        return None
    if mode == "multi":
        return check_stable(inst, sol.prices, sol.assignment)
    if mode == "collab":
        return check_stable(AggregatedValuation(inst.valuations), sol.prices, sol.assignment, budget)
    b = budget if budget is not None else inst.buyers[0].budget
    return check_stable(inst.buyers[0].valuation, sol.prices, sol.assignment, b)


def cmd_solve(args) -> int:
    inst = io.load_instance(args.instance)
    mode = _resolve_mode(inst, args.mode)
    sol = run_solver(inst, mode, args.algo, args.budget, args.seed)
    doc = sol.to_dict()
    code = 0
    if args.verify:
        report = _verify_solution(inst, mode, sol, sol.info.get("budget"))
        if report is None:
            doc["verification"] = {"skipped": f"more than {VERIFY_MAX_ITEMS} items"}
        else:
            doc["verification"] = report.to_dict()
            ok = report.passed
            if mode == "multi":
                # the guarantee for independent buyers is approximate stability
                ok = report.alpha >= sol.alpha - 1e-9
                doc["verification"]["pass"] = bool(ok)
                doc["verification"]["claimed_alpha"] = sol.alpha
            code = 0 if ok else 1
    _emit(doc, args.out)
    return code


# ---- compare ----------------------------------------------------------------

def compare_row(f, seed: int = 0, random_repeats: int = 1) -> dict:
    proposed = solve_single(f).profit
    profits = {
        "sellall": BASELINES["sellall"](f).profit,
        "random": statistics.fmean(random_pricing(f, seed + r).profit for r in range(random_repeats)),
        "scaled": BASELINES["scaled"](f).profit,
        "ascending": BASELINES["ascending"](f).profit,
    }

    def ratio(x):
        if proposed > 0:
            return x / proposed
        return 1.0 if x == 0 else math.inf

    row = {"proposed": 1.0}
    row.update({k: ratio(v) for k, v in profits.items()})
    return row


def cmd_compare(args) -> int:
    jobs = []
    for path in args.instances:
        inst = io.load_instance(path)
        jobs.append((Path(path).stem, inst.buyers[0].valuation))
    for r in range(args.generate):
        spec = SyntheticSpec(args.v, args.w, args.d, args.qmax, args.kind, args.seed + r)
        jobs.append((f"{args.kind}-{args.seed + r}", gen_synthetic(spec).buyers[0].valuation))
    if not jobs:
        raise UsageError("give instance files or --generate N")
    rows = _map(lambda job: compare_row(job[1], args.seed, args.random_repeats), jobs)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_COMPARE_HEADER)
        for (name, _), row in zip(jobs, rows):
            writer.writerow([name] + [f"{row[k]:.{args.precision}f}" for k in CSV_COMPARE_HEADER[1:]])
    finally:
        if args.out:
            out.close()
    return 0


# ---- sweep ------------------------------------------------------------------

def _timed(fn, repeats: int = 3):
    times = []
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return result, statistics.median(times)


def sweep_points(args) -> list[tuple]:
    if args.values:
        raw = [float(t) for t in args.values.replace(",", " ").split()]
    elif args.param == "qmax":
        raw = QMAX_GRID
    elif args.param in ("v", "w"):
        start = args.v if args.param == "v" else args.w
        raw = [start * 2 ** k for k in range(args.steps)]
    else:
        raw = [1, 2, 4, 8]
    points = []
    for x in raw:
        spec = SyntheticSpec(args.v, args.w, args.d, args.qmax, args.kind, args.seed, 1)
        if args.param == "qmax":
            spec.q_max = float(x)
        elif args.param == "v":
            spec.num_channels = int(x)
        elif args.param == "w":
            spec.num_customers = int(x)
        elif args.param == "buyers":
            spec.num_buyers = int(x)
        else:
            raise UsageError(f"unknown sweep parameter {args.param!r}")
        points.append((x, spec))
    return points


def sweep_point(param: str, value, spec: SyntheticSpec, repeats: int = 3) -> list[list]:
    inst = gen_synthetic(spec)
    rows = []
    if param == "buyers":
        for mode, fn in (("multi", solve_multi), ("collab", solve_collab)):
            sol, secs = _timed(lambda: fn(inst), repeats)
            rows.append([param, value, mode, sol.profit, len(sol.items), secs])
    else:
        sol, secs = _timed(lambda: solve_single(inst.buyers[0].valuation), repeats)
        rows.append([param, value, "single", sol.profit, len(sol.items), secs])
    return rows


def cmd_sweep(args) -> int:
    points = sweep_points(args)
    results = _map(lambda pt: sweep_point(args.param, pt[0], pt[1], args.repeats), points)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_SWEEP_HEADER)
        for rows in results:
            for param, value, mode, profit, assigned, secs in rows:
                writer.writerow([param, _fmt(value), mode, _fmt(profit), assigned, f"{secs:.6f}"])
    finally:
        if args.out:
            out.close()
    return 0


# ---- verify -----------------------------------------------------------------

def cmd_verify(args) -> int:
    inst = io.load_instance(args.instance)
    check = args.check
    if check == "submodular":
        if inst.mode == "collaborating" and inst.n > 1:
            targets = [("aggregate", AggregatedValuation(inst.valuations))]
        else:
            targets = [(f"buyer{i}", v) for i, v in enumerate(inst.valuations)]
        reports = {name: check_monotone_submodular(v).to_dict() for name, v in targets}
        passed = all(r["pass"] for r in reports.values())
        doc = {"pass": passed, "reports": reports}
    elif check == "stable":
        if not args.solution:
            raise UsageError("--check stable needs --solution FILE")
        sol = io.solution_from_dict(io.load_json(args.solution), inst.ground)
        mode = _resolve_mode(inst, args.mode)
        report = _verify_solution(inst, mode, sol, args.budget)
        if report is None:
            raise CapacityError(f"stability check supports at most {VERIFY_MAX_ITEMS} items")
        doc = report.to_dict()
        passed = report.passed
    elif check == "curvature":
        reports = {}
        for i, v in enumerate(inst.valuations):
            if not isinstance(v, CoverageValuation):
                raise UsageError("curvature bound applies to coverage valuations")
            reports[f"buyer{i}"] = check_curvature_bound(v).to_dict()
        passed = all(r["pass"] for r in reports.values())
        doc = {"pass": passed, "reports": reports}
    elif check == "gap":
        reports = {}
        passed = True
        for i, v in enumerate(inst.valuations):
            gap = welfare_profit_gap(v)
            k_full = curvature_profile(v)(v.n)
            bound = math.inf if k_full >= 1 else 1.0 / (1.0 - k_full)
            # f == 0 has no welfare to lose; its ratio is 0/0
            ok = bool(gap <= bound + 1e-9) or v(v.ground.items) <= 0
            passed = passed and ok
            reports[f"buyer{i}"] = {"pass": ok, "gap": _fmt(gap), "bound": _fmt(bound)}
        doc = {"pass": passed, "reports": reports}
    else:
        raise UsageError(f"unknown check {check!r}")
    _emit(doc, args.out)
    return 0 if passed else 1


# ---- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="submod-pricing", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--kind", required=True,
                   choices=["uniform", "powerlaw", "3sat", "x3c", "partition", "harmonic", "hidden"])
    g.add_argument("--v", type=int, help="channels (or variables / items)")
    g.add_argument("--w", type=int, help="customers (or clauses)")
    g.add_argument("--d", type=int, help="customer degree")
    g.add_argument("--qmax", type=float, default=0.3)
    g.add_argument("--buyers", type=int, default=1)
    g.add_argument("--collab", action="store_true", help="mark a multi-buyer instance as collaborating")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--clauses", help="3sat: file of clauses, one triple per line or a JSON list")
    g.add_argument("--planted", action="store_true", help="3sat: plant a one-in-three assignment")
    g.add_argument("--universe", type=int, help="x3c: universe size 3L")
    g.add_argument("--triples", help="x3c: file of triples")
    g.add_argument("--values", help="partition: comma-separated positive integers")
    g.add_argument("--hidden", help="hidden: comma-separated item indices")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="price an instance")
    s.add_argument("instance")
    s.add_argument("--mode", choices=["single", "multi", "collab"])
    s.add_argument("--algo", default="proposed",
                   choices=["proposed", "sellall", "random", "scaled", "ascending", "bruteforce"])
    s.add_argument("--budget", type=float)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("compare", help="profit ratios of the baselines to the proposed algorithm")
    c.add_argument("instances", nargs="*")
    c.add_argument("--generate", type=int, default=0, help="also generate N synthetic instances")
    c.add_argument("--kind", choices=["uniform", "powerlaw"], default="uniform")
    c.add_argument("--v", type=int, default=100)
    c.add_argument("--w", type=int, default=10000)
    c.add_argument("--d", type=int, default=10)
    c.add_argument("--qmax", type=float, default=0.3)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--random-repeats", type=int, default=1)
    c.add_argument("--precision", type=int, default=4)
    c.add_argument("--out")
    c.set_defaults(func=cmd_compare)

    w = sub.add_parser("sweep", help="profit, assigned items and runtime along one parameter")
    w.add_argument("--param", required=True, choices=["qmax", "v", "w", "buyers"])
    w.add_argument("--values", help="explicit grid, comma-separated")
    w.add_argument("--steps", type=int, default=4, help="doubling steps for --param v/w")
    w.add_argument("--kind", choices=["uniform", "powerlaw"], default="uniform")
    w.add_argument("--v", type=int, default=100)
    w.add_argument("--w", type=int, default=10000)
    w.add_argument("--d", type=int, default=10)
    w.add_argument("--qmax", type=float, default=0.3)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--repeats", type=int, default=3)
    w.add_argument("--out")
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run an exhaustive check")
    v.add_argument("--check", required=True, choices=["submodular", "stable", "curvature", "gap"])
    v.add_argument("--instance", required=True)
    v.add_argument("--solution")
    v.add_argument("--mode", choices=["single", "multi", "collab"])
    v.add_argument("--budget", type=float)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, UnsupportedConfigurationError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
