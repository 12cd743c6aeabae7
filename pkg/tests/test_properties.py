import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from submod_pricing import (
    AggregatedValuation,
    CoverageValuation,
    Instance,
    PriceVector,
    brute_force_single,
    check_stable,
    curvature_profile,
    curvature_upper_bound,
    greedy_demand,
    solve_collab,
    solve_multi,
    solve_single,
    solve_single_budgeted,
)
from submod_pricing.io import valuation_from_dict, valuation_to_dict

probability = st.floats(0.0, 1.0, allow_nan=False)


@st.composite
def coverage(draw, max_items=6, max_customers=6):
    n = draw(st.integers(1, max_items))
    m = draw(st.integers(1, max_customers))
    pairs = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, m - 1)), max_size=n * m))
    edges = [(x, w, draw(probability)) for x, w in sorted(pairs)]
    gamma = draw(st.floats(0.1, 5.0))
    return CoverageValuation(range(n), range(m), edges, gamma), edges, gamma


@given(coverage())
def test_value_matches_oracle(case):
    f, edges, gamma = case
    for X in oracles.subsets(range(f.n)):
        assert f(X) == pytest.approx(oracles.coverage_value(edges, X, gamma), abs=1e-12)


@given(coverage())
def test_single_is_stable_and_within_bound(case):
    f = case[0]
    sol = solve_single(f)
    assert check_stable(f, sol.prices, sol.assignment).passed
    opt = brute_force_single(f)
    kappa = curvature_profile(f)(len(opt.assignment))
    assert sol.profit >= (1 - kappa) * opt.profit - 1e-9
    assert sol.profit <= opt.profit + 1e-9


@given(coverage(), st.floats(0.0, 1.5))
def test_budget_respected(case, frac):
    f = case[0]
    P = solve_single(f).profit
    B = frac * P
    sol = solve_single_budgeted(f, B)
    assert sol.prices.total(sol.assignment) <= B + 1e-12
    assert check_stable(f, sol.prices, sol.assignment, B).passed


@given(coverage())
def test_upper_bound_dominates_curvature(case):
    f = case[0]
    prof = curvature_profile(f)
    for s in range(1, f.n + 1):
        assert curvature_upper_bound(f, s) >= prof(s) - 1e-12


@given(coverage(), st.lists(st.floats(0.0, 2.0), min_size=6, max_size=6))
def test_greedy_nonnegative_utility(case, raw):
    f = case[0]
    p = PriceVector(f.ground, raw[: f.n])
    X = greedy_demand(f, p)
    assert f(X) - p.total(X) >= -1e-12


@given(coverage())
def test_json_roundtrip(case):
    f = case[0]
    g = valuation_from_dict(json.loads(json.dumps(valuation_to_dict(f))))
    assert list(g.table()) == pytest.approx(list(f.table()), abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_multi_alpha_and_collab_stability(data):
    f, _, _ = data.draw(coverage(5, 5))
    others = [data.draw(coverage(5, 5)) for _ in range(data.draw(st.integers(1, 2)))]
    vals = [f] + [
        CoverageValuation(range(f.n), g.customers, [(x, w, q) for x, w, q in g.edges if x < f.n])
        for g, _, _ in others
    ]
    inst = Instance.of(vals)
    sol = solve_multi(inst)
    kappa = max(curvature_profile(v)(sol.s) for v in vals)
    assert check_stable(inst, sol.prices, sol.assignment).alpha >= 1 - kappa - 1e-9

    csol = solve_collab(Instance.of(vals, mode="collaborating"))
    av = AggregatedValuation(vals)
    assert check_stable(av, csol.prices, csol.assignment).passed
    T = av.table()
    top = av.singletons()
    for mask in range(1, 1 << f.n):
        for k in range(f.n):
            if mask >> k & 1:
                assert T[mask] - T[mask ^ (1 << k)] <= top[k] + 1e-9
