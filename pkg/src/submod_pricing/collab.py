"""Pricing for collaborating buyers who share one aggregated valuation."""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Sequence

import numpy as np

from .multi import Buyer, Instance, UnsupportedConfigurationError
from .single import discount_to_budget, ranked_items
from .solution import PriceVector, PricingSolution, improves
from .valuation import (
    CapacityError,
    Item,
    Valuation,
    _check_table_size,
    bits,
    mask_to_bool,
)

MAX_ASSIGNMENTS = 1 << 22
MAX_AGGREGATE_TABLE_ITEMS = 14


class AggregatedValuation(Valuation):
    """Best split of a set among the component buyers: max over partitions of sum f_i(X_i).

    Monotone, but not submodular in general. Evaluation is exponential in |X|.
    """

    def __init__(self, components: Sequence[Valuation]):
        if not components:
            raise ValueError("need at least one component valuation")
        self.components = list(components)
        self.ground = self.components[0].ground
        for v in self.components[1:]:
            if v.ground != self.ground:
                raise ValueError("components must share a ground set")
        self._tables = None

    def _component_tables(self) -> list[np.ndarray]:
        if self._tables is None:
            self._tables = [v.table() for v in self.components]
        return self._tables

    def value(self, mask: int) -> float:
        ks = bits(mask)
        n_buyers = len(self.components)
        if not ks:
            return 0.0
        if n_buyers == 1:
            return self.components[0].value(mask)
        if n_buyers ** len(ks) > MAX_ASSIGNMENTS:
            raise CapacityError(
                f"{n_buyers}^{len(ks)} assignments exceeds the limit of {MAX_ASSIGNMENTS}"
            )
        # every assignment of the items in X to buyers, in mixed-radix order
        owners = np.array(list(itertools.product(range(n_buyers), repeat=len(ks))), dtype=np.int64)
        weights = np.array([1 << k for k in ks], dtype=np.int64)
        total = np.zeros(owners.shape[0])
        tables = self._component_tables()
        for i in range(n_buyers):
            part = ((owners == i) * weights).sum(axis=1)
            total += tables[i][part]
        return float(total.max())

    def singletons(self) -> np.ndarray:
        return np.vstack([v.singletons() for v in self.components]).max(axis=0)

    def table(self) -> np.ndarray:
        """All aggregate values via max-plus subset convolution, O(n 3^|V|)."""
        _check_table_size(self.n, MAX_AGGREGATE_TABLE_ITEMS)
        tables = self._component_tables()
        acc = tables[0].copy()
        size = 1 << self.n
        for t in tables[1:]:
            nxt = acc.copy()
            for m in range(1, size):
                sub = m
                best = nxt[m]
                while sub:
                    cand = acc[m ^ sub] + t[sub]
                    if cand > best:
                        best = cand
                    sub = (sub - 1) & m
                nxt[m] = best
            acc = nxt
        return acc


def aggregate_value(av: AggregatedValuation, X: Iterable[Item]) -> float:
    return av(X)


def _min_ratio_prices(valuations: Sequence[Valuation], singles: np.ndarray, mask: int) -> np.ndarray:
    """p(x) = min_i (f_i(X) - f_i(X \\ x)) / f_i(x) * max_i f_i(x), over buyers with f_i(x) > 0."""
    n_items = singles.shape[1]
    selected = mask_to_bool(mask, n_items)
    marg = np.vstack([v.marginals(mask) for v in valuations])
    top = singles.max(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(singles > 0, marg / singles, np.inf)
    prices = np.full(n_items, np.inf)
    prices[selected] = np.maximum(ratios.min(axis=0)[selected] * top[selected], 0.0)
    return prices


def solve_collab(inst: Instance) -> PricingSolution:
    """Collaborating buyers with no budget: stable for the aggregated valuation and within
    1 - kappa(|X*|) of the optimal profit, where kappa is the worst component curvature."""
    if any(math.isfinite(b) for b in inst.budgets):
        raise UnsupportedConfigurationError(
            "use solve_collab_budgeted for a shared budget"
        )
    valuations = inst.valuations
    singles = np.vstack([v.singletons() for v in valuations])
    order = ranked_items(singles.max(axis=0))
    n_items = len(inst.ground)

    best = PricingSolution(PriceVector.withheld(inst.ground), frozenset(), 0.0, 0)
    mask = 0
    for s, k in enumerate(order, start=1):
        mask |= 1 << k
        prices = _min_ratio_prices(valuations, singles, mask)
        selected = mask_to_bool(mask, n_items)
        profit = float(np.sum(prices[selected]))
        if improves(profit, best.profit):
            best = PricingSolution(
                PriceVector(inst.ground, prices), inst.ground.subset(mask), profit, s
            )
    best.info["algorithm"] = "proposed"
    return best


def solve_collab_budgeted(inst: Instance, budget: float) -> PricingSolution:
    unlimited = Instance(
        inst.ground, [Buyer(b.valuation) for b in inst.buyers], "collaborating", inst.meta
    )
    return discount_to_budget(solve_collab(unlimited), budget)


def _exact_prices_from_table(table: np.ndarray, n: int, mask: int) -> np.ndarray:
    prices = np.full(n, np.inf)
    for k in bits(mask):
        bit = 1 << k
        best = math.inf
        # every Y with x in Y and Y within X
        rest = mask & ~bit
        sub = rest
        while True:
            y = sub | bit
            best = min(best, table[y] - table[sub])
            if not sub:
                break
            sub = (sub - 1) & rest
        prices[k] = max(best, 0.0)
    return prices


def exact_collab_prices(av: Valuation, X: Iterable[Item]) -> PriceVector:
    """Profit-maximal stable prices for selling exactly X to a (possibly non-submodular)
    valuation: p(x) = min over Y within X containing x of f(Y) - f(Y \\ x)."""
    mask = av.ground.mask(X)
    ks = bits(mask)
    if len(ks) > MAX_AGGREGATE_TABLE_ITEMS:
        raise CapacityError("set too large for exact price enumeration")
    # local table over subsets of X only
    sub_table = {}
    rest_positions = ks
    for local in range(1 << len(ks)):
        m = 0
        for t, k in enumerate(rest_positions):
            if local >> t & 1:
                m |= 1 << k
        sub_table[m] = av.value(m)
    prices = np.full(av.n, np.inf)
    for k in ks:
        bit = 1 << k
        best = math.inf
        for m, val in sub_table.items():
            if m & bit:
                best = min(best, val - sub_table[m ^ bit])
        prices[k] = max(best, 0.0)
    return PriceVector(av.ground, prices)


def brute_force_collab(inst: Instance) -> PricingSolution:
    """Exact optimum for collaborating buyers by enumerating every sold set."""
    av = AggregatedValuation(inst.valuations)
    n = len(inst.ground)
    table = av.table()
    best = PricingSolution(PriceVector.withheld(inst.ground), frozenset(), 0.0, 0)
    for mask in range(1, 1 << n):
        prices = _exact_prices_from_table(table, n, mask)
        profit = float(np.sum(prices[mask_to_bool(mask, n)]))
        if improves(profit, best.profit):
            best = PricingSolution(
                PriceVector(inst.ground, prices), inst.ground.subset(mask), profit, len(bits(mask))
            )
    best.info["algorithm"] = "bruteforce"
    return best
