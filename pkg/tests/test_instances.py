import itertools
import logging
import random

import numpy as np
import pytest

import oracles
from submod_pricing import (
    EventLogSpec,
    SyntheticSpec,
    brute_force_single,
    check_monotone_submodular,
    find_stable_assignment,
    gen_3sat_fixture,
    gen_harmonic,
    gen_hidden_set_fixture,
    gen_partition_fixture,
    gen_synthetic,
    gen_x3c_fixture,
    ingest_event_log,
    random_3sat_clauses,
)
from submod_pricing.io import dumps, instance_to_dict
from submod_pricing.verify import check_stable


def test_synthetic_degrees_and_range():
    inst = gen_synthetic(SyntheticSpec(4, 10, 2, 0.3, "uniform", 7))
    f = inst.buyers[0].valuation
    edges = f.edges
    per_customer = {}
    for _, w, q in edges:
        per_customer[w] = per_customer.get(w, 0) + 1
        assert 0.0 <= q <= 0.3
    assert sorted(per_customer.values()) == [2] * 10


def test_synthetic_deterministic():
    spec = SyntheticSpec(20, 50, 3, 0.5, "powerlaw", 3, num_buyers=2)
    a = dumps(instance_to_dict(gen_synthetic(spec)))
    b = dumps(instance_to_dict(gen_synthetic(spec)))
    assert a == b
    c = dumps(instance_to_dict(gen_synthetic(SyntheticSpec(20, 50, 3, 0.5, "powerlaw", 4, num_buyers=2))))
    assert a != c


def test_synthetic_zero_qmax():
    inst = gen_synthetic(SyntheticSpec(5, 20, 2, 0.0, seed=1))
    f = inst.buyers[0].valuation
    assert f(range(5)) == 0.0


def test_synthetic_rejects_large_degree():
    with pytest.raises(ValueError):
        gen_synthetic(SyntheticSpec(3, 5, 4, 0.3))


def test_multi_buyer_synthetic_share_edges():
    inst = gen_synthetic(SyntheticSpec(6, 30, 3, 0.4, seed=2, num_buyers=3))
    structures = [{(x, w) for x, w, _ in b.valuation.edges} for b in inst.buyers]
    assert structures[0] == structures[1] == structures[2]
    qs = [[q for _, _, q in b.valuation.edges] for b in inst.buyers]
    assert qs[0] != qs[1]


def test_powerlaw_favours_low_ranks():
    inst = gen_synthetic(SyntheticSpec(30, 3000, 2, 0.3, "powerlaw", 0))
    counts = np.bincount([x for x, _, _ in inst.buyers[0].valuation.edges], minlength=30)
    assert counts[0] > counts[5] > counts[29]


def test_generated_coverage_is_submodular():
    for seed in range(5):
        inst = gen_synthetic(SyntheticSpec(8, 12, 3, 0.9, "uniform", seed))
        assert check_monotone_submodular(inst.buyers[0].valuation).passed


def _write(tmp_path, text):
    path = tmp_path / "log.csv"
    path.write_text(text, encoding="utf-8")
    return path


def test_event_log_small(tmp_path):
    path = _write(tmp_path, "user,item,weight\nu1,a,5\nu2,a,3\nu2,b,1\n")
    inst = ingest_event_log(EventLogSpec(path, top_k=2, slope=0.02))
    f = inst.buyers[0].valuation
    assert list(f.ground.items) == ["a", "b"]
    edges = {(x, w): q for x, w, q in f.edges}
    assert edges == {("a", "u1"): pytest.approx(0.10), ("a", "u2"): pytest.approx(0.06),
                     ("b", "u2"): pytest.approx(0.02)}


def test_event_log_affine_map(tmp_path):
    path = _write(tmp_path, "user,item,weight\nu1,a,10\n")
    inst = ingest_event_log(EventLogSpec(path, top_k=1, slope=0.01, intercept=0.01))
    assert inst.buyers[0].valuation.edges[0][2] == pytest.approx(0.11, abs=1e-12)


def test_event_log_top_k_and_default_weight(tmp_path):
    path = _write(tmp_path, "user,item\nu1,a\nu2,a\nu3,b\nu1,c\nu1,a\n")
    inst = ingest_event_log(EventLogSpec(path, top_k=1, slope=0.1))
    f = inst.buyers[0].valuation
    assert list(f.ground.items) == ["a"]
    edges = {(x, w): q for x, w, q in f.edges}
    assert edges[("a", "u1")] == pytest.approx(0.2)


def test_event_log_malformed(tmp_path, caplog):
    rows = "".join(f"u{i},a,1\n" for i in range(20))
    path = _write(tmp_path, "user,item,weight\n" + rows + "bad,row\n")
    with caplog.at_level(logging.WARNING):
        ingest_event_log(EventLogSpec(path, top_k=1))
    assert "malformed" in caplog.text
    path = _write(tmp_path, "user,item,weight\nu1,a,1\nbad\nu2,a,x\n")
    with pytest.raises(ValueError):
        ingest_event_log(EventLogSpec(path, top_k=1))


def test_3sat_examples():
    f = gen_3sat_fixture([(1, 2, 3)]).buyers[0].valuation
    sol = brute_force_single(f)
    assert sol.profit == pytest.approx(1.0)
    assert len(sol.assignment) == 1
    f = gen_3sat_fixture([(1, 2, 3), (1, 2, 4)]).buyers[0].valuation
    assert brute_force_single(f).profit == pytest.approx(2.0)
    with pytest.raises(ValueError):
        gen_3sat_fixture([(1, 2)])
    with pytest.raises(ValueError):
        gen_3sat_fixture([(1, 1, 2)])


def test_3sat_empty_formula():
    inst = gen_3sat_fixture([], variables=[1, 2, 3])
    assert brute_force_single(inst.buyers[0].valuation).profit == 0.0


def test_3sat_agrees_with_enumerator():
    for seed in range(30):
        n_vars = 3 + seed % 5
        clauses, witness = random_3sat_clauses(n_vars, 2 + seed % 4, seed, planted=seed % 2 == 0)
        variables = list(range(1, n_vars + 1))
        f = gen_3sat_fixture(clauses, variables).buyers[0].valuation
        sat = oracles.one_in_three_satisfiable(clauses, variables)
        full = abs(brute_force_single(f).profit - len(clauses)) <= 1e-9
        assert sat == full
        if witness is not None:
            assert sat
            t = set(witness)
            assert all(sum(v in t for v in c) == 1 for c in clauses)


def _x3c_stable(l, triples):
    inst, assignment, prices = gen_x3c_fixture(3 * l, triples)
    return check_stable(inst, prices, assignment), inst, prices


def test_x3c_examples():
    report, inst, prices = _x3c_stable(1, [(0, 1, 2)])
    assert not report.passed
    assert report.witness["buyer"] == 0
    f1 = inst.buyers[0].valuation
    assert f1({1}) - prices.total({1}) == pytest.approx(2.0)
    assert f1({0}) - prices.total({0}) == pytest.approx(1.0)
    report, _, _ = _x3c_stable(1, [])
    assert report.passed


def test_x3c_agrees_with_enumerator():
    rng = random.Random(5)
    for _ in range(25):
        l = rng.choice([1, 2])
        universe = list(range(3 * l))
        triples = [tuple(rng.sample(universe, 3)) for _ in range(rng.randint(0, 4))]
        report, _, _ = _x3c_stable(l, triples)
        assert report.passed == (not oracles.has_exact_cover(3 * l, triples))


def test_partition_examples():
    inst, p = gen_partition_fixture([1, 1, 2])
    assert find_stable_assignment(inst, p) is not None
    inst, p = gen_partition_fixture([1, 1, 4])
    assert find_stable_assignment(inst, p) is None
    inst, p = gen_partition_fixture([2, 2])
    assert find_stable_assignment(inst, p) == (frozenset({1}), frozenset({2}))
    with pytest.raises(ValueError):
        gen_partition_fixture([1, 2])


def test_partition_example_with_equal_split():
    # (1,1,1,3) does split evenly: {1,1,1} against {3}
    inst, p = gen_partition_fixture([1, 1, 1, 3])
    assert find_stable_assignment(inst, p) is not None
    assert oracles.has_equal_partition([1, 1, 1, 3])


def test_partition_agrees_with_enumerator():
    rng = random.Random(6)
    done = 0
    while done < 25:
        a = [rng.randint(1, 6) for _ in range(rng.randint(2, 6))]
        if sum(a) % 2:
            continue
        inst, p = gen_partition_fixture(a)
        assert (find_stable_assignment(inst, p) is not None) == oracles.has_equal_partition(a)
        done += 1


def test_hidden_set():
    f = gen_hidden_set_fixture("abcd", "ab")
    assert f({"a", "c"}) == 3
    assert f({"a", "b"}) == 4
    assert f(set()) == 0
    sol = brute_force_single(f)
    assert sol.profit == 4
    assert sol.assignment == frozenset("ab")
    assert sol.prices["a"] == 2 and sol.prices["b"] == 2


def test_harmonic_values():
    f = gen_harmonic(3)
    assert f({0}) == 1.0
    assert f({0, 1, 2}) == pytest.approx(11 / 6, abs=1e-15)
    for X in oracles.subsets(range(3)):
        if X:
            h = sum(f(X) - f(X - {x}) for x in X)
            assert h == pytest.approx(1.0, abs=1e-12)


def test_generators_are_submodular():
    assert check_monotone_submodular(gen_harmonic(6)).passed
    assert check_monotone_submodular(gen_hidden_set_fixture(range(6), [1, 3, 4])).passed
    inst, _ = gen_partition_fixture([3, 1, 2, 2])
    assert check_monotone_submodular(inst.buyers[0].valuation).passed
    inst, _, _ = gen_x3c_fixture(6, [(0, 1, 2), (3, 4, 5), (0, 3, 4)])
    for b in inst.buyers:
        assert check_monotone_submodular(b.valuation).passed
    for combo in itertools.islice(itertools.combinations(range(1, 7), 3), 5):
        f = gen_3sat_fixture([combo]).buyers[0].valuation
        assert check_monotone_submodular(f).passed
