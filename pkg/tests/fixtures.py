"""Small named instances shared across the tests."""

import random

from submod_pricing import CoverageValuation, ExplicitValuation, gen_harmonic

FIX_B_F1 = {"": 0, "a": 1, "b": 1, "c": 1, "ab": 2, "bc": 1, "ac": 2, "abc": 2}
FIX_B_F2 = {"": 0, "a": 2, "b": 2, "c": 2, "ab": 3, "bc": 4, "ac": 3, "abc": 4}
FIX_B_F = {"a": 2, "b": 2, "c": 2, "ab": 3, "bc": 4, "ac": 3, "abc": 5}


def fix_a():
    """Two channels reaching one customer with probability 0.9 each."""
    return CoverageValuation(["u", "v"], ["w"], [("u", "w", 0.9), ("v", "w", 0.9)])


def fix_a_edges():
    return [("u", "w", 0.9), ("v", "w", 0.9)]


def _explicit(table):
    return ExplicitValuation.from_function(
        ["a", "b", "c"], lambda X: table["".join(sorted(X))], submodular=True
    )


def fix_b():
    return _explicit(FIX_B_F1), _explicit(FIX_B_F2)


def fix_c(n=3):
    return gen_harmonic(n, "abcdefghij"[:n])


def modular(values, items=None):
    items = list(items) if items is not None else list(range(len(values)))
    weight = dict(zip(items, values))
    return ExplicitValuation.from_function(items, lambda X: float(sum(weight[x] for x in X)), True)


def random_edges(rng: random.Random, n_items, n_customers, q_max, density=0.5):
    edges = []
    for w in range(n_customers):
        for x in range(n_items):
            if rng.random() < density:
                edges.append((x, w, rng.uniform(0.0, q_max)))
    return edges


def random_coverage(rng: random.Random, n_items=None, n_customers=None, q_max=None):
    n_items = n_items or rng.randint(1, 8)
    n_customers = n_customers or rng.randint(1, 12)
    q_max = q_max if q_max is not None else rng.choice([k / 10 for k in range(1, 10)])
    edges = random_edges(rng, n_items, n_customers, q_max)
    return CoverageValuation(range(n_items), range(n_customers), edges), edges


def random_submodular_explicit(rng: random.Random, n_items, n_customers=4):
    """Explicit table of a random weighted coverage function (submodular by construction)."""
    edges = random_edges(rng, n_items, n_customers, 1.0)
    gamma = rng.uniform(0.5, 3.0)
    f = CoverageValuation(range(n_items), range(n_customers), edges, gamma)
    return ExplicitValuation.from_valuation(f)
