"""JSON encoding of valuations, instances and solutions."""

from __future__ import annotations

import json
import math
from pathlib import Path

from .collab import AggregatedValuation
from .multi import Buyer, Instance
from .solution import PriceVector, PricingSolution
from .valuation import CoverageValuation, ExplicitValuation, GroundSet, Valuation


def _num(x: float):
    return "inf" if math.isinf(x) else x


def _parse_num(x) -> float:
    if isinstance(x, str):
        if x.lower() in ("inf", "+inf", "infinity"):
            return math.inf
        raise ValueError(f"bad number {x!r}")
    return float(x)


def valuation_to_dict(v: Valuation) -> dict:
    if isinstance(v, CoverageValuation):
        return {
            "type": "coverage",
            "channels": list(v.ground.items),
            "customers": list(v.customers),
            "edges": [[c, w, q] for c, w, q in v.edges],
            "gamma": v.gamma,
        }
    if isinstance(v, ExplicitValuation):
        d = {
            "type": "explicit",
            "items": list(v.ground.items),
            "values": {str(m): val for m, val in v.values_dict().items()},
        }
        if v.submodular:
            d["submodular"] = True
        return d
    if isinstance(v, AggregatedValuation):
        raise TypeError("aggregated valuations are stored as their components")
    return valuation_to_dict(ExplicitValuation.from_valuation(v))


def valuation_from_dict(d: dict, ground: GroundSet | None = None) -> Valuation:
    kind = d.get("type")
    if kind == "coverage":
        channels = d["channels"]
        g = ground if ground is not None and list(ground.items) == list(channels) else GroundSet(channels)
        return CoverageValuation(g, d.get("customers", []), d.get("edges", []), d.get("gamma", 1.0))
    if kind == "explicit":
        items = d["items"]
        g = ground if ground is not None and list(ground.items) == list(items) else GroundSet(items)
        values = {int(k): float(v) for k, v in d["values"].items()}
        return ExplicitValuation(g, values, bool(d.get("submodular", False)))
    raise ValueError(f"unknown valuation type {kind!r}")


def instance_to_dict(inst: Instance) -> dict:
    return {
        "mode": inst.mode,
        "items": list(inst.ground.items),
        "buyers": [
            {"valuation": valuation_to_dict(b.valuation), "budget": _num(b.budget)}
            for b in inst.buyers
        ],
        "meta": inst.meta,
    }


def instance_from_dict(d: dict) -> Instance:
    """Accepts an instance document or a bare valuation document (one buyer)."""
    if "type" in d:
        v = valuation_from_dict(d)
        return Instance(v.ground, [Buyer(v)])
    ground = GroundSet(d["items"])
    buyers = [
        Buyer(valuation_from_dict(b["valuation"], ground), _parse_num(b.get("budget", "inf")))
        for b in d["buyers"]
    ]
    return Instance(ground, buyers, d.get("mode", "independent"), d.get("meta", {}))


def solution_to_dict(sol: PricingSolution) -> dict:
    return sol.to_dict()


def solution_from_dict(d: dict, ground: GroundSet) -> PricingSolution:
    by_name = {str(x): x for x in ground.items}

    def item(name):
        if name in ground:
            return name
        return by_name[str(name)]

    prices = PriceVector.from_dict(
        ground, {item(k): _parse_num(v) for k, v in d["prices"].items()}
    )
    raw = d["assignment"]
    if raw and isinstance(raw[0], list):
        assignment = tuple(frozenset(item(x) for x in part) for part in raw)
    else:
        assignment = frozenset(item(x) for x in raw)
    alpha = d.get("alpha")
    return PricingSolution(prices, assignment, float(d["profit"]), int(d.get("s", 0)), alpha)


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def save_json(obj: dict, path: str | Path) -> None:
    Path(path).write_text(dumps(obj) + "\n", encoding="utf-8")


def load_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def load_instance(path: str | Path) -> Instance:
    return instance_from_dict(load_json(path))


def save_instance(inst: Instance, path: str | Path) -> None:
    save_json(instance_to_dict(inst), path)
