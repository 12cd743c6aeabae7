"""Synthetic networks, event-log ingestion, and reduction fixtures."""

from __future__ import annotations

import csv
import logging
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .multi import Buyer, Instance
from .solution import PriceVector
from .valuation import CoverageValuation, ExplicitValuation, GroundSet, Item, harmonic

log = logging.getLogger(__name__)

MAX_MALFORMED_FRACTION = 0.10


@dataclass
class SyntheticSpec:
    num_channels: int
    num_customers: int
    degree: int
    q_max: float
    distribution: str = "uniform"
    seed: int = 0
    num_buyers: int = 1
    gamma: float = 1.0


@dataclass
class EventLogSpec:
    path: str | Path
    top_k: int
    slope: float = 0.01
    intercept: float = 0.0
    gamma: float = 1.0


def channel_weights(num_channels: int, distribution: str) -> np.ndarray:
    if distribution == "uniform":
        return np.ones(num_channels)
    if distribution == "powerlaw":
        return 1.0 / np.arange(1, num_channels + 1) ** 2
    raise ValueError(f"unknown degree distribution {distribution!r}")


def _sample_neighbors(rng: np.random.Generator, weights: np.ndarray, rows: int, d: int) -> np.ndarray:
    """Each row draws d distinct channels, without replacement, proportional to weight.

    Exponential-clock sampling: the d smallest Exp(1)/w keys.
    """
    n = len(weights)
    out = np.empty((rows, d), dtype=np.int64)
    block = max(1, (1 << 20) // n)
    for start in range(0, rows, block):
        stop = min(rows, start + block)
        keys = rng.exponential(size=(stop - start, n)) / weights
        if d < n:
            part = np.argpartition(keys, d - 1, axis=1)[:, :d]
        else:
            part = np.tile(np.arange(n), (stop - start, 1))
        out[start:stop] = np.sort(part, axis=1)
    return out


def gen_synthetic(spec: SyntheticSpec) -> Instance:
    """Random bipartite network; every customer has exactly ``degree`` channels.

    Buyers share the edge structure and draw their own probabilities q ~ U[0, q_max].
    """
    if spec.degree > spec.num_channels:
        raise ValueError("customer degree exceeds the number of channels")
    if spec.degree < 1 or spec.num_customers < 0 or spec.num_buyers < 1:
        raise ValueError("invalid synthetic network size")
    if not 0.0 <= spec.q_max <= 1.0:
        raise ValueError("q_max must lie in [0, 1]")
    rng = np.random.default_rng(spec.seed)
    weights = channel_weights(spec.num_channels, spec.distribution)
    nbrs = _sample_neighbors(rng, weights, spec.num_customers, spec.degree)
    ground = GroundSet(range(spec.num_channels))
    customers = range(spec.num_customers)
    buyers = []
    for _ in range(spec.num_buyers):
        qs = rng.uniform(0.0, spec.q_max, size=nbrs.shape)
        v = CoverageValuation.from_padded(ground, customers, nbrs, qs, spec.gamma)
        buyers.append(Buyer(v))
    inst = Instance(ground, buyers)
    inst.meta = {"kind": spec.distribution, "seed": spec.seed}
    return inst


def ingest_event_log(spec: EventLogSpec) -> Instance:
    """Build a single-buyer coverage instance from a ``user,item[,weight]`` CSV.

    The top_k most frequent items become channels and users become customers.
    Repeated (user, item) events are merged by summing their weights (weight
    defaults to 1), then mapped to q = clamp(slope * weight + intercept, 0, 1).
    """
    if spec.top_k < 1:
        raise ValueError("top_k must be at least 1")
    weights: dict[tuple[str, str], float] = {}
    counts: Counter = Counter()
    malformed = total = 0
    with open(spec.path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = [h.strip().lower() for h in next(reader, [])]
        if header[:2] != ["user", "item"]:
            raise ValueError("event log must start with a user,item[,weight] header")
        has_weight = len(header) >= 3 and header[2] == "weight"
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            total += 1
            try:
                if len(row) != len(header):
                    raise ValueError(f"expected {len(header)} fields, got {len(row)}")
                user, item = row[0].strip(), row[1].strip()
                if not user or not item:
                    raise ValueError("empty user or item")
                w = float(row[2]) if has_weight else 1.0
                if not math.isfinite(w):
                    raise ValueError("non-finite weight")
            except ValueError as exc:
                malformed += 1
                log.warning("%s:%d: skipping malformed row (%s)", spec.path, lineno, exc)
                continue
            counts[item] += 1
            weights[user, item] = weights.get((user, item), 0.0) + w
    if total and malformed / total > MAX_MALFORMED_FRACTION:
        raise ValueError(f"{malformed} of {total} rows malformed")
    if not counts:
        raise ValueError("event log has no usable rows")

    ranked = sorted(counts, key=lambda it: (-counts[it], it))[: spec.top_k]
    keep = set(ranked)
    users: dict[str, None] = {}
    edges = []
    for (user, item), w in weights.items():
        if item in keep:
            users.setdefault(user)
            q = min(1.0, max(0.0, spec.slope * w + spec.intercept))
            edges.append((item, user, q))
    v = CoverageValuation(ranked, list(users), edges, spec.gamma)
    inst = Instance(v.ground, [Buyer(v)])
    inst.meta = {"kind": "eventlog", "source": str(spec.path)}
    return inst


def gen_3sat_fixture(clauses: Sequence[Sequence[Item]], variables: Iterable[Item] | None = None) -> Instance:
    """Coverage instance for one-in-three positive 3-SAT: variables are channels,
    clauses are customers, q = 1. Max profit equals the clause count iff satisfiable."""
    clauses = [tuple(c) for c in clauses]
    for c in clauses:
        if len(c) != 3 or len(set(c)) != 3:
            raise ValueError(f"clause {c!r} must have three distinct variables")
    if variables is None:
        seen: dict = {}
        for c in clauses:
            for x in c:
                seen.setdefault(x)
        variables = list(seen)
    ground = GroundSet(variables)
    edges = [(x, j, 1.0) for j, c in enumerate(clauses) for x in c]
    v = CoverageValuation(ground, range(len(clauses)), edges, 1.0)
    inst = Instance(ground, [Buyer(v)])
    inst.meta = {"kind": "3sat", "clauses": [list(c) for c in clauses]}
    return inst


def random_3sat_clauses(num_vars: int, num_clauses: int, seed: int = 0, planted: bool = False):
    """Random positive 3-clauses over variables 1..num_vars.

    With ``planted=True`` every clause contains exactly one variable of a hidden
    truth assignment, which is returned as the second element (else None).
    """
    if num_vars < 3:
        raise ValueError("need at least three variables")
    rng = np.random.default_rng(seed)
    variables = np.arange(1, num_vars + 1)
    truth = None
    if planted:
        truth = np.zeros(num_vars, dtype=bool)
        num_true = int(rng.integers(1, num_vars - 1))
        truth[rng.choice(num_vars, size=num_true, replace=False)] = True
    clauses = []
    for _ in range(num_clauses):
        if truth is None:
            c = rng.choice(variables, size=3, replace=False)
        else:
            t = rng.choice(variables[truth])
            rest = rng.choice(variables[~truth], size=2, replace=False)
            c = np.array([t, *rest])
        clauses.append(tuple(int(x) for x in sorted(c)))
    witness = None if truth is None else [int(x) for x in variables[truth]]
    return clauses, witness


def gen_x3c_fixture(universe_size: int, triples: Sequence[Sequence[int]]):
    """Two-buyer instance in which the assignment ({0}, {1..m}) has a stable price
    vector iff the triples contain no exact cover of {0..3l-1}.

    Returns (instance, assignment, candidate prices). Buyer 1 values the number of
    covered elements (channel 0 covers everything); buyer 2 is additive with weight
    l + 1 on channel 0 and 1 elsewhere.
    """
    if universe_size % 3 or universe_size <= 0:
        raise ValueError("universe size must be a positive multiple of 3")
    l = universe_size // 3
    triples = [tuple(t) for t in triples]
    for t in triples:
        if len(set(t)) != 3 or not all(0 <= e < universe_size for e in t):
            raise ValueError(f"bad triple {t!r}")
    m = len(triples)
    ground = GroundSet(range(m + 1))
    sets = [tuple(range(universe_size))] + triples
    cover_edges = [(i, e, 1.0) for i, c in enumerate(sets) for e in c]
    f1 = CoverageValuation(ground, range(universe_size), cover_edges)
    # additive buyer as coverage with private customers
    private = [(0, f"bonus{j}", 1.0) for j in range(l + 1)]
    private += [(i, f"own{i}", 1.0) for i in range(1, m + 1)]
    f2 = CoverageValuation(ground, [w for _, w, _ in private], private)
    inst = Instance(ground, [Buyer(f1), Buyer(f2)])
    inst.meta = {"kind": "x3c", "universe_size": universe_size, "triples": [list(t) for t in triples]}
    assignment = (frozenset([0]), frozenset(range(1, m + 1)))
    prices = PriceVector(ground, [l + 1.0] + [1.0] * m)
    return inst, assignment, prices


def gen_partition_fixture(a: Sequence[int]):
    """Two identical buyers valuing min(T, sum of a over X) at zero prices; a stable
    assignment exists iff a splits into two halves of equal sum."""
    a = [int(x) for x in a]
    if not a or any(x <= 0 for x in a):
        raise ValueError("need positive integers")
    if sum(a) % 2:
        raise ValueError("sum must be even")
    T = sum(a) // 2
    ground = GroundSet(range(1, len(a) + 1))
    weight = dict(zip(ground.items, a))
    f = ExplicitValuation.from_function(ground, lambda X: min(T, sum(weight[x] for x in X)), True)
    inst = Instance(ground, [Buyer(f), Buyer(f)])
    inst.meta = {"kind": "partition", "a": a}
    return inst, PriceVector(ground, np.zeros(len(a)))


def gen_hidden_set_fixture(ground: Iterable[Item], hidden: Iterable[Item]) -> ExplicitValuation:
    """Valuation whose only profit-optimal set is ``hidden``, indistinguishable from its
    same-size peers except by querying it directly."""
    ground = ground if isinstance(ground, GroundSet) else GroundSet(ground)
    hidden = frozenset(hidden)
    for x in hidden:
        ground.index(x)
    k = len(hidden)

    def value(X: frozenset) -> float:
        if len(X) < k:
            return 2.0 * len(X)
        if len(X) == k and X != hidden:
            return 2.0 * k - 1
        return 2.0 * k

    return ExplicitValuation.from_function(ground, value, submodular=True)


def gen_harmonic(n: int, items: Iterable[Item] | None = None) -> ExplicitValuation:
    """f(X) = H(|X|). Every nonempty set has profit potential exactly 1."""
    if n < 1:
        raise ValueError("n must be at least 1")
    items = list(range(n)) if items is None else list(items)
    if len(items) != n:
        raise ValueError("need n item ids")
    H = [harmonic(k) for k in range(n + 1)]
    return ExplicitValuation.from_function(items, lambda X: H[len(X)], submodular=True)
