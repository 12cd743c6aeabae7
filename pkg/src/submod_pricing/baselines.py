"""Comparison pricing heuristics for a single buyer."""

from __future__ import annotations

import math

import numpy as np

from .solution import PriceVector, PricingSolution, improves
from .valuation import Valuation, bool_to_mask

SCALE_GRID = tuple(k / 10 for k in range(1, 11))
DIAGNOSTIC_MAX_ITEMS = 12


def greedy_demand(f: Valuation, p: PriceVector, budget: float = math.inf) -> frozenset:
    """Buyer-side greedy: repeatedly add the item with the largest utility gain.

    A step is taken when its gain is positive, or zero on a positively priced
    item (an indifferent buyer settles in the seller's favor). Items that
    would break the budget are skipped.
    """
    prices = p.values
    n = f.n
    selected = np.zeros(n, dtype=bool)
    spent = 0.0
    mask = 0
    while True:
        gain = f.gains(mask) - prices
        ok = ~selected & np.isfinite(prices) & (spent + prices <= budget)
        ok &= (gain > 0) | ((gain == 0) & (prices > 0))
        if not ok.any():
            break
        cand = np.where(ok, gain, -np.inf)
        k = int(np.argmax(cand))
        selected[k] = True
        spent += prices[k]
        mask |= 1 << k
    return f.ground.subset(mask)


def _diagnostic_alpha(f: Valuation, p: PriceVector, X: frozenset) -> float | None:
    if f.n > DIAGNOSTIC_MAX_ITEMS:
        return None
    from .verify import check_stable

    return check_stable(f, p, X).alpha


def _greedy_solution(f: Valuation, prices: np.ndarray, name: str) -> PricingSolution:
    p = PriceVector(f.ground, prices)
    X = greedy_demand(f, p)
    return PricingSolution(p, X, p.total(X), len(X), None, {"algorithm": name})


def sell_all(f: Valuation) -> PricingSolution:
    """Sell every item at its removal marginal in V. Always stable for submodular f."""
    mask = f.ground.full_mask
    prices = np.maximum(f.marginals(mask), 0.0)
    return PricingSolution(
        PriceVector(f.ground, prices), frozenset(f.ground), float(np.sum(prices)), f.n, 1.0,
        {"algorithm": "sellall"},
    )


def random_pricing(f: Valuation, seed: int = 0) -> PricingSolution:
    rng = np.random.default_rng(seed)
    prices = rng.uniform(0.0, 1.0, size=f.n) * f.singletons()
    sol = _greedy_solution(f, prices, "random")
    sol.alpha = _diagnostic_alpha(f, sol.prices, sol.assignment)
    sol.info["seed"] = seed
    return sol


def scaled_pricing(f: Valuation) -> PricingSolution:
    """Price every item at a fixed fraction of its singleton value; best fraction on a 0.1 grid."""
    singles = f.singletons()
    best = None
    for scale in SCALE_GRID:
        sol = _greedy_solution(f, scale * singles, "scaled")
        sol.info["scale"] = scale
        if best is None or improves(sol.profit, best.profit):
            best = sol
    best.alpha = _diagnostic_alpha(f, best.prices, best.assignment)
    return best


def ascending_pricing(f: Valuation) -> PricingSolution:
    """Start from V and repeatedly withdraw the cheapest item, pricing the rest at their
    removal marginals; return the most profitable snapshot (larger set on ties)."""
    n = f.n
    selected = np.ones(n, dtype=bool)
    best = None
    while selected.any():
        mask = bool_to_mask(selected)
        marg = np.maximum(f.marginals(mask), 0.0)
        prices = np.where(selected, marg, np.inf)
        profit = float(np.sum(marg[selected]))
        if best is None or improves(profit, best.profit):
            best = PricingSolution(
                PriceVector(f.ground, prices), f.ground.subset(mask), profit,
                int(selected.sum()), 1.0, {"algorithm": "ascending"},
            )
        k = int(np.argmin(np.where(selected, marg, np.inf)))
        selected[k] = False
    return best


BASELINES = {
    "sellall": sell_all,
    "random": random_pricing,
    "scaled": scaled_pricing,
    "ascending": ascending_pricing,
}

