"""Exhaustive checkers used as ground truth on small instances."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .multi import Instance
from .solution import PriceVector
from .valuation import (
    CapacityError,
    CoverageValuation,
    Valuation,
    _check_table_size,
    bits,
    curvature_profile,
    curvature_upper_bound,
    profit_potential_table,
)

MAX_CHECK_ITEMS = 14
MAX_MULTI_OPT_ITEMS = 6
MAX_MULTI_OPT_BUYERS = 2
CHECK_RTOL = 1e-9


@dataclass
class CheckReport:
    passed: bool
    alpha: float | None = None
    witness: dict = field(default_factory=dict)
    worst_deviation: float = 0.0

    def to_dict(self) -> dict:
        alpha = None if self.alpha is None else float(self.alpha)
        return {"pass": bool(self.passed), "alpha": alpha, "witness": self.witness}


def _table(f: Valuation) -> np.ndarray:
    _check_table_size(f.n, MAX_CHECK_ITEMS)
    return f.table()


def _tol(table: np.ndarray) -> float:
    return CHECK_RTOL * max(1.0, float(np.max(np.abs(table))))


def check_monotone_submodular(f: Valuation) -> CheckReport:
    """Exhaustive check of monotonicity and the lattice inequality.

    Uses the local form f(X+a) + f(X+b) >= f(X) + f(X+a+b), which is equivalent;
    a violation is reported as the pair (X+a, X+b).
    """
    T = _table(f)
    n = f.n
    tol = _tol(T)
    masks = np.arange(1 << n)
    items = f.ground

    for k in range(n):
        bit = 1 << k
        base = masks[(masks & bit) == 0]
        bad = base[T[base | bit] < T[base] - tol]
        if bad.size:
            m = int(bad[0])
            return CheckReport(False, witness={
                "kind": "monotone",
                "X": items.ordered(items.subset(m)),
                "Y": items.ordered(items.subset(m | bit)),
                "f(X)": float(T[m]),
                "f(Y)": float(T[m | bit]),
            })

    found = None
    for a, b in itertools.combinations(range(n), 2):
        ba, bb = 1 << a, 1 << b
        base = masks[(masks & (ba | bb)) == 0]
        lhs = T[base | ba] + T[base | bb]
        rhs = T[base] + T[base | ba | bb]
        bad = np.flatnonzero(lhs < rhs - tol)
        if bad.size:
            cand = (int(base[bad[0]]), a, b)
            if found is None or cand < found:
                found = cand
    if found is not None:
        m, a, b = found
        A, B = m | 1 << a, m | 1 << b
        return CheckReport(False, witness={
            "kind": "submodular",
            "X": items.ordered(items.subset(A)),
            "Y": items.ordered(items.subset(B)),
            "lhs": float(T[A] + T[B]),
            "rhs": float(T[A & B] + T[A | B]),
        })
    return CheckReport(True)


def _price_sums(prices: np.ndarray) -> np.ndarray:
    n = len(prices)
    P = np.zeros(1 << n)
    for k in range(n):
        lo = 1 << k
        P[lo:2 * lo] = P[:lo] + prices[k]
    return P


def check_stable(target, prices: PriceVector, assignment, budgets=None) -> CheckReport:
    """Enumerate every deviation of every buyer, honoring budgets.

    ``target`` is a Valuation (with ``assignment`` an item set and ``budgets`` a
    number or None) or an Instance (with one item set per buyer). ``alpha`` is
    the largest a <= 1 with f_i(X_i) - p(X_i) >= a f_i(Y) - p(Y) for all
    affordable Y with f_i(Y) > 0.
    """
    if isinstance(target, Instance):
        valuations = target.valuations
        parts = list(assignment)
        caps = list(budgets) if budgets is not None else target.budgets
    else:
        valuations = [target]
        parts = [assignment]
        caps = [math.inf if budgets is None else budgets]
    if len(parts) != len(valuations):
        raise ValueError("need one item set per buyer")
    ground = valuations[0].ground
    _check_table_size(len(ground), MAX_CHECK_ITEMS)
    P = _price_sums(prices.values)

    masks = [ground.mask(part) for part in parts]
    for i, j in itertools.combinations(range(len(masks)), 2):
        if masks[i] & masks[j]:
            raise ValueError("assignment parts overlap")

    alpha = 1.0
    worst = 0.0
    witness: dict = {}
    passed = True
    for i, (f, mask, cap) in enumerate(zip(valuations, masks, caps)):
        T = f.table()
        tol = _tol(T)
        slack = 1e-12 * max(1.0, cap) if math.isfinite(cap) else 0.0
        feasible = P <= cap + slack
        if not feasible[mask]:
            return CheckReport(False, -math.inf, {"buyer": i, "reason": "over budget"}, math.inf)
        current = T[mask] - P[mask]
        utility = np.where(feasible, T - P, -np.inf)
        best = int(np.argmax(utility))
        dev = float(utility[best] - current)
        if dev > tol:
            passed = False
        dev = max(dev, 0.0)
        if dev > worst:
            worst = dev
            witness = {
                "buyer": i,
                "deviation": ground.ordered(ground.subset(best)),
                "gain": dev,
            }
        consider = feasible & (T > 0) & np.isfinite(P)
        if consider.any():
            ratios = (current + P[consider]) / T[consider]
            alpha = min(alpha, float(ratios.min()))
    return CheckReport(passed, alpha, witness, worst)


def demand_masks(f: Valuation, prices: PriceVector, budget: float = math.inf) -> list[int]:
    """All subsets in the buyer's demand set."""
    T = _table(f)
    P = _price_sums(prices.values)
    utility = np.where(P <= budget, T - P, -np.inf)
    top = utility.max()
    return np.flatnonzero(utility >= top - _tol(T)).tolist()


def find_stable_assignment(inst: Instance, prices: PriceVector):
    """A disjoint assignment with every buyer in their demand set, or None."""
    options = [demand_masks(b.valuation, prices, b.budget) for b in inst.buyers]

    def search(i: int, used: int, chosen: list[int]):
        if i == len(options):
            return chosen
        for m in options[i]:
            if not m & used:
                found = search(i + 1, used | m, chosen + [m])
                if found is not None:
                    return found
        return None

    found = search(0, 0, [])
    if found is None:
        return None
    return tuple(inst.ground.subset(m) for m in found)


def _stable_lp(tables: list[np.ndarray], parts: list[int], sold: int, n: int):
    ks = bits(sold)
    col = {k: c for c, k in enumerate(ks)}
    rows, rhs = [], []
    subs = []
    sub = sold
    while True:
        subs.append(sub)
        if not sub:
            break
        sub = (sub - 1) & sold
    for T, Xi in zip(tables, parts):
        for Y in subs:
            if Y == Xi:
                continue
            row = np.zeros(len(ks))
            for k in bits(Xi):
                row[col[k]] += 1.0
            for k in bits(Y):
                row[col[k]] -= 1.0
            rows.append(row)
            rhs.append(T[Xi] - T[Y])
    res = linprog(
        -np.ones(len(ks)), A_ub=np.array(rows), b_ub=np.array(rhs), bounds=(0, None),
        method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.status != 0:
        return None
    prices = np.full(n, np.inf)
    for k, c in col.items():
        prices[k] = max(res.x[c], 0.0)
    return prices


def exhaustive_multi_search(inst: Instance):
    """Best certified-stable (profit, prices, assignment) over all assignments.

    For a fixed assignment, withheld items are priced at +inf and the stable
    prices of sold items form a polytope; its profit-maximal vertex is found by
    linear programming, then re-certified by :func:`check_stable`.
    """
    n = len(inst.ground)
    if n > MAX_MULTI_OPT_ITEMS or inst.n > MAX_MULTI_OPT_BUYERS:
        raise CapacityError(
            f"exhaustive search supports |V| <= {MAX_MULTI_OPT_ITEMS}, n <= {MAX_MULTI_OPT_BUYERS}"
        )
    if any(math.isfinite(b) for b in inst.budgets):
        raise ValueError("exhaustive search assumes unlimited budgets")
    tables = [v.table() for v in inst.valuations]
    potentials = [profit_potential_table(T, n) for T in tables]
    best = (0.0, PriceVector.withheld(inst.ground), tuple(frozenset() for _ in inst.buyers))
    for owners in itertools.product(range(-1, inst.n), repeat=n):
        parts = [0] * inst.n
        for k, o in enumerate(owners):
            if o >= 0:
                parts[o] |= 1 << k
        sold = sum(parts)
        if not sold:
            continue
        # each owner pays at most their own removal marginals
        if sum(h[m] for h, m in zip(potentials, parts)) <= best[0]:
            continue
        prices = _stable_lp(tables, parts, sold, n)
        if prices is None:
            continue
        profit = float(sum(prices[k] for k in bits(sold)))
        if profit <= best[0]:
            continue
        p = PriceVector(inst.ground, prices)
        assignment = tuple(inst.ground.subset(m) for m in parts)
        if check_stable(inst, p, assignment).passed:
            best = (profit, p, assignment)
    return best


def exhaustive_multi_opt(inst: Instance) -> float:
    return exhaustive_multi_search(inst)[0]


def welfare_profit_gap(f: Valuation) -> float:
    """max_X f(X) / max_X h(X): how much welfare exceeds the best stable profit."""
    T = _table(f)
    top_h = float(profit_potential_table(T, f.n).max())
    if top_h <= 0:
        return math.inf
    return float(T.max()) / top_h


def check_curvature_bound(v: CoverageValuation) -> CheckReport:
    _check_table_size(v.n, MAX_CHECK_ITEMS)
    exact = curvature_profile(v).kappa
    rows = []
    passed = True
    for s in range(1, v.n + 1):
        bound = curvature_upper_bound(v, s)
        ok = bool(bound >= exact[s - 1] - 1e-12)
        passed &= ok
        rows.append({"s": s, "exact": float(exact[s - 1]), "bound": bound, "ok": bool(ok)})
    return CheckReport(passed, witness={"profile": rows})
