"""Set-function valuations over a finite ground set.

Item sets are passed around publicly as iterables of item ids and internally
as integer bitmasks, where bit ``k`` stands for ``ground.items[k]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

Item = Hashable

MAX_EXPLICIT_ITEMS = 24
MAX_TABLE_ITEMS = 24


class CapacityError(ValueError):
    """Raised when an exhaustive computation would be too large."""


class GroundSet:
    """Ordered collection of distinct items. Position defines the tie-break order."""

    def __init__(self, items: Iterable[Item]):
        items = tuple(items)
        if not items:
            raise ValueError("ground set must be nonempty")
        index = {}
        for k, item in enumerate(items):
            if item in index:
                raise ValueError(f"duplicate item {item!r} in ground set")
            index[item] = k
        self.items = items
        self._index = index

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __contains__(self, item) -> bool:
        return item in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, GroundSet) and self.items == other.items

    def __hash__(self) -> int:
        return hash(self.items)

    def __repr__(self) -> str:
        return f"GroundSet({list(self.items)!r})"

    def index(self, item: Item) -> int:
        try:
            return self._index[item]
        except KeyError:
            raise ValueError(f"unknown item {item!r}") from None

    def mask(self, items: Iterable[Item]) -> int:
        m = 0
        for item in items:
            m |= 1 << self.index(item)
        return m

    def subset(self, mask: int) -> frozenset:
        return frozenset(self.items[k] for k in bits(mask))

    def ordered(self, items: Iterable[Item]) -> list:
        """Items sorted by ground-set position."""
        return [self.items[k] for k in bits(self.mask(items))]

    @property
    def full_mask(self) -> int:
        return (1 << len(self.items)) - 1


def mask_to_bool(mask: int, n: int) -> np.ndarray:
    if mask >> n:
        raise ValueError("mask has bits outside the ground set")
    raw = np.frombuffer(mask.to_bytes((n + 7) // 8 or 1, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def bits(mask: int) -> list[int]:
    return np.flatnonzero(mask_to_bool(mask, mask.bit_length())).tolist()


def bool_to_mask(selected: np.ndarray) -> int:
    packed = np.packbits(np.asarray(selected, dtype=bool), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def popcounts(n: int) -> np.ndarray:
    """Popcount of every mask in range(2**n)."""
    pc = np.zeros(1 << n, dtype=np.int64)
    for k in range(n):
        pc[1 << k:1 << (k + 1)] = pc[:1 << k] + 1
    return pc


class Valuation:
    """Base class. Subclasses implement :meth:`value`; the rest has generic fallbacks."""

    ground: GroundSet

    @property
    def n(self) -> int:
        return len(self.ground)

    def value(self, mask: int) -> float:
        raise NotImplementedError

    def __call__(self, items: Iterable[Item]) -> float:
        return self.value(self.ground.mask(items))

    def singletons(self) -> np.ndarray:
        return np.array([self.value(1 << k) for k in range(self.n)])

    def marginals(self, mask: int) -> np.ndarray:
        """f(X) - f(X \\ x) for x in X; zero for items outside X."""
        out = np.zeros(self.n)
        fx = self.value(mask)
        for k in bits(mask):
            out[k] = fx - self.value(mask & ~(1 << k))
        return out

    def gains(self, mask: int) -> np.ndarray:
        """f(X + x) - f(X) for x outside X; zero for items in X."""
        out = np.zeros(self.n)
        fx = self.value(mask)
        for k in range(self.n):
            if not mask >> k & 1:
                out[k] = self.value(mask | 1 << k) - fx
        return out

    def table(self) -> np.ndarray:
        """Values of all 2**n subsets, indexed by bitmask."""
        _check_table_size(self.n)
        return np.array([self.value(m) for m in range(1 << self.n)])

    def gain_table(self) -> np.ndarray:
        """G[k, m] = f(m + k) - f(m) for every mask m without bit k (other entries are 0)."""
        return gains_from_table(self.table(), self.n)


def _check_table_size(n: int, limit: int = MAX_TABLE_ITEMS) -> None:
    if n > limit:
        raise CapacityError(f"{n} items exceeds the enumeration limit of {limit}")


class CoverageValuation(Valuation):
    """Bipartite influence valuation: gamma * sum_w (1 - prod_{x in X, (x,w) in E} (1 - q(x, w))).

    Parallel edges between the same channel and customer are merged into a
    single edge with the combined activation probability.
    """

    def __init__(
        self,
        channels: Iterable[Item],
        customers: Iterable[Hashable],
        edges: Iterable[tuple],
        gamma: float = 1.0,
    ):
        self.ground = channels if isinstance(channels, GroundSet) else GroundSet(channels)
        self.customers = tuple(customers)
        if gamma < 0:
            raise ValueError("gamma must be nonnegative")
        self.gamma = float(gamma)
        cust_index = {w: j for j, w in enumerate(self.customers)}
        if len(cust_index) != len(self.customers):
            raise ValueError("duplicate customer ids")

        probs: dict[tuple[int, int], list[float]] = {}
        for channel, customer, q in edges:
            q = float(q)
            if not 0.0 <= q <= 1.0:
                raise ValueError(f"probability {q} outside [0, 1]")
            try:
                j = cust_index[customer]
            except KeyError:
                raise ValueError(f"unknown customer {customer!r}") from None
            k = self.ground.index(channel)
            probs.setdefault((j, k), []).append(q)

        n_cust = len(self.customers)
        keys = sorted(probs)
        degree = np.zeros(n_cust, dtype=np.int64)
        for j, _ in keys:
            degree[j] += 1
        width = int(degree.max()) if n_cust and len(keys) else 0
        self._chan = np.full((n_cust, width), -1, dtype=np.int64)
        self._q = np.zeros((n_cust, width))
        slot = np.zeros(n_cust, dtype=np.int64)
        for j, k in keys:
            self._chan[j, slot[j]] = k
            qs = probs[j, k]
            self._q[j, slot[j]] = qs[0] if len(qs) == 1 else 1.0 - math.prod(1.0 - q for q in qs)
            slot[j] += 1
        self._degree = degree
        self._valid = self._chan >= 0
        self._safe_chan = np.where(self._valid, self._chan, 0)

    @classmethod
    def from_padded(
        cls,
        ground: GroundSet,
        customers: Iterable[Hashable],
        channels: np.ndarray,
        probs: np.ndarray,
        gamma: float = 1.0,
    ) -> "CoverageValuation":
        """Fast path: row j lists customer j's distinct channel indices (-1 pads)."""
        channels = np.asarray(channels, dtype=np.int64)
        probs = np.asarray(probs, dtype=float)
        if channels.shape != probs.shape or channels.ndim != 2:
            raise ValueError("channel and probability arrays must have one shared 2-D shape")
        valid = channels >= 0
        if np.any(channels >= len(ground)):
            raise ValueError("channel index outside the ground set")
        if np.any((probs[valid] < 0) | (probs[valid] > 1)):
            raise ValueError("probability outside [0, 1]")
        safe = np.where(valid, channels, np.iinfo(np.int64).max)
        order = np.argsort(safe, axis=1, kind="stable")
        srt = np.take_along_axis(safe, order, axis=1)
        if np.any((srt[:, 1:] == srt[:, :-1]) & (srt[:, 1:] != np.iinfo(np.int64).max)):
            raise ValueError("duplicate channel within a customer row")
        self = cls.__new__(cls)
        self.ground = ground
        self.customers = tuple(customers)
        if len(self.customers) != channels.shape[0]:
            raise ValueError("need one row per customer")
        self.gamma = float(gamma)
        self._valid = np.take_along_axis(valid, order, axis=1)
        self._chan = np.where(self._valid, srt, -1)
        self._q = np.where(self._valid, np.take_along_axis(probs, order, axis=1), 0.0)
        self._degree = self._valid.sum(axis=1)
        self._safe_chan = np.where(self._valid, self._chan, 0)
        return self

    @property
    def edges(self) -> list[tuple]:
        rows, slots = np.nonzero(self._valid)
        chans = self._chan[rows, slots]
        order = np.lexsort((rows, chans))
        return [
            (self.ground.items[chans[t]], self.customers[rows[t]], float(self._q[rows[t], slots[t]]))
            for t in order
        ]

    @property
    def max_probability(self) -> float:
        return float(self._q.max()) if self._q.size else 0.0

    @property
    def max_degree(self) -> int:
        return int(self._degree.max()) if self._degree.size else 0

    def _factors(self, selected: np.ndarray) -> np.ndarray:
        # per-edge (1 - q) if the channel is in X, else 1; padding slots are 1
        chosen = selected[self._safe_chan] & self._valid
        return np.where(chosen, 1.0 - self._q, 1.0)

    def value(self, mask: int) -> float:
        selected = mask_to_bool(mask, self.n)
        if not self._q.size:
            return 0.0
        miss = np.prod(self._factors(selected), axis=1)
        return self.gamma * float(np.sum(1.0 - miss))

    def singletons(self) -> np.ndarray:
        return self.gains(0)

    def gains(self, mask: int) -> np.ndarray:
        out = np.zeros(self.n)
        if not self._q.size:
            return out
        selected = mask_to_bool(mask, self.n)
        miss = np.prod(self._factors(selected), axis=1)
        contrib = self._q * miss[:, None]
        np.add.at(out, self._safe_chan[self._valid], contrib[self._valid])
        out *= self.gamma
        out[selected] = 0.0
        return out

    def marginals(self, mask: int) -> np.ndarray:
        out = np.zeros(self.n)
        if not self._q.size or not mask:
            return out
        selected = mask_to_bool(mask, self.n)
        factors = self._factors(selected)
        # leave-one-out products from prefix/suffix products, no division
        ones = np.ones((factors.shape[0], 1))
        prefix = np.cumprod(np.hstack([ones, factors[:, :-1]]), axis=1)
        suffix = np.cumprod(np.hstack([ones, factors[:, :0:-1]]), axis=1)[:, ::-1]
        loo = prefix * suffix
        chosen = selected[self._safe_chan] & self._valid
        np.add.at(out, self._safe_chan[chosen], (self._q * loo)[chosen])
        out *= self.gamma
        return out

    def dense_miss(self) -> np.ndarray:
        """(n_channels, n_customers) matrix of 1 - q, with 1 where no edge exists."""
        dense = np.ones((self.n, len(self.customers)))
        rows, slots = np.nonzero(self._valid)
        dense[self._chan[rows, slots], rows] = 1.0 - self._q[rows, slots]
        return dense

    def table(self) -> np.ndarray:
        _check_table_size(self.n)
        size = 1 << self.n
        total = np.zeros(size)
        dense = self.dense_miss()
        block = max(1, (1 << 22) // size)
        for start in range(0, dense.shape[1], block):
            cols = dense[:, start:start + block]
            miss = np.ones((size, cols.shape[1]))
            for k in range(self.n):
                lo = 1 << k
                miss[lo:2 * lo] = miss[:lo] * cols[k]
            total += np.sum(1.0 - miss, axis=1)
        return self.gamma * total

    def gain_table(self) -> np.ndarray:
        """Gains as gamma * sum_w q(k, w) * prod_{y in m} (1 - q(y, w)); no cancellation."""
        _check_table_size(self.n)
        size = 1 << self.n
        dense = self.dense_miss()
        q = 1.0 - dense
        out = np.zeros((self.n, size))
        block = max(1, (1 << 22) // size)
        for start in range(0, dense.shape[1], block):
            cols = dense[:, start:start + block]
            miss = np.ones((size, cols.shape[1]))
            for k in range(self.n):
                lo = 1 << k
                miss[lo:2 * lo] = miss[:lo] * cols[k]
            out += q[:, start:start + block] @ miss.T
        masks = np.arange(size)
        for k in range(self.n):
            out[k, (masks >> k) & 1 == 1] = 0.0
        return self.gamma * out


class ExplicitValuation(Valuation):
    """Valuation given by a full table over all subsets (bitmask-indexed)."""

    def __init__(
        self,
        items: Iterable[Item],
        values: Mapping[int, float] | Sequence[float] | np.ndarray,
        submodular: bool = False,
    ):
        self.ground = items if isinstance(items, GroundSet) else GroundSet(items)
        if self.n > MAX_EXPLICIT_ITEMS:
            raise CapacityError(f"explicit valuations support at most {MAX_EXPLICIT_ITEMS} items")
        size = 1 << self.n
        if isinstance(values, Mapping):
            keys = {int(k) for k in values}
            if keys != set(range(size)):
                raise ValueError(f"explicit table must have exactly {size} entries")
            arr = np.array([float(values[k] if k in values else values[str(k)]) for k in range(size)])
        else:
            arr = np.asarray(values, dtype=float)
            if arr.shape != (size,):
                raise ValueError(f"explicit table must have exactly {size} entries")
        if arr[0] != 0.0:
            raise ValueError("value of the empty set must be 0")
        self._table = arr
        self._table.setflags(write=False)
        self.submodular = submodular

    @classmethod
    def from_function(
        cls, items: Iterable[Item], fn: Callable[[frozenset], float], submodular: bool = False
    ) -> "ExplicitValuation":
        ground = items if isinstance(items, GroundSet) else GroundSet(items)
        _check_table_size(len(ground), MAX_EXPLICIT_ITEMS)
        values = [fn(ground.subset(m)) for m in range(1 << len(ground))]
        return cls(ground, values, submodular=submodular)

    @classmethod
    def from_valuation(cls, v: Valuation) -> "ExplicitValuation":
        return cls(v.ground, v.table())

    def value(self, mask: int) -> float:
        return float(self._table[mask])

    def singletons(self) -> np.ndarray:
        return self._table[1 << np.arange(self.n)].copy()

    def marginals(self, mask: int) -> np.ndarray:
        out = np.zeros(self.n)
        ks = bits(mask)
        if ks:
            rest = np.array([mask & ~(1 << k) for k in ks])
            out[ks] = self._table[mask] - self._table[rest]
        return out

    def gains(self, mask: int) -> np.ndarray:
        out = np.zeros(self.n)
        ks = [k for k in range(self.n) if not mask >> k & 1]
        if ks:
            more = np.array([mask | 1 << k for k in ks])
            out[ks] = self._table[more] - self._table[mask]
        return out

    def table(self) -> np.ndarray:
        return self._table.copy()

    def values_dict(self) -> dict[int, float]:
        return {m: float(v) for m, v in enumerate(self._table)}


@dataclass(frozen=True)
class CurvatureProfile:
    """kappa[s - 1] is the curvature at size s."""

    kappa: np.ndarray
    kind: str = "exact"

    def __call__(self, s: int) -> float:
        if s == 0:
            return 0.0
        return float(self.kappa[s - 1])


def evaluate(v: Valuation, X: Iterable[Item]) -> float:
    return v(X)


def marginal(v: Valuation, X: Iterable[Item], x: Item) -> float:
    """f(X) - f(X \\ x)."""
    mask = v.ground.mask(X)
    bit = 1 << v.ground.index(x)
    if not mask & bit:
        raise ValueError(f"item {x!r} is not in X")
    return v.value(mask) - v.value(mask & ~bit)


def profit_potential(v: Valuation, X: Iterable[Item]) -> float:
    """Sum of removal marginals over X: the best stable profit for selling exactly X."""
    return float(np.sum(v.marginals(v.ground.mask(X))))


def profit_potential_table(table: np.ndarray, n: int) -> np.ndarray:
    """Profit potential of every subset, from a full value table."""
    masks = np.arange(1 << n)
    h = np.zeros(1 << n)
    for k in range(n):
        bit = 1 << k
        has = (masks & bit) != 0
        h[has] += table[has] - table[masks[has] ^ bit]
    return h


def gains_from_table(table: np.ndarray, n: int) -> np.ndarray:
    masks = np.arange(1 << n)
    out = np.zeros((n, 1 << n))
    for k in range(n):
        bit = 1 << k
        without = masks[(masks & bit) == 0]
        out[k, without] = table[without | bit] - table[without]
    return out


def curvature_from_gains(gains: np.ndarray, n: int) -> np.ndarray:
    """Exact curvature for every size s = 1..n; singletons with value 0 are skipped."""
    masks = np.arange(1 << n)
    pc = popcounts(n)
    ratio_min = np.full(n + 1, np.inf)
    for k in range(n):
        fx = gains[k, 0]
        if fx <= 0:
            continue
        without = masks[(masks >> k) & 1 == 0]
        np.minimum.at(ratio_min, pc[without] + 1, gains[k, without] / fx)
    kappa = np.where(np.isfinite(ratio_min), 1.0 - ratio_min, 0.0)
    return np.maximum(kappa, 0.0)[1:]


def curvature_from_table(table: np.ndarray, n: int) -> np.ndarray:
    return curvature_from_gains(gains_from_table(table, n), n)


def curvature_profile(v: Valuation) -> CurvatureProfile:
    _check_table_size(v.n, 16)
    return CurvatureProfile(curvature_from_gains(v.gain_table(), v.n), "exact")


def exact_curvature(v: Valuation, s: int) -> float:
    if not 1 <= s <= v.n:
        raise ValueError(f"size {s} outside 1..{v.n}")
    return curvature_profile(v)(s)


def curvature_upper_bound(v: CoverageValuation, s: int) -> float:
    """Closed-form bound 1 - (1 - q)^(min(s, d) - 1) for coverage valuations."""
    if not 1 <= s <= v.n:
        raise ValueError(f"size {s} outside 1..{v.n}")
    q = v.max_probability
    d = v.max_degree
    return 1.0 - (1.0 - q) ** max(min(s, d) - 1, 0)


def curvature_upper_profile(v: CoverageValuation) -> CurvatureProfile:
    return CurvatureProfile(
        np.array([curvature_upper_bound(v, s) for s in range(1, v.n + 1)]), "upper_bound"
    )


def harmonic(k: int) -> float:
    return math.fsum(1.0 / i for i in range(1, k + 1))
