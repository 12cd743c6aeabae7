"""
Collaborating advertisers
=========================

Two buyers over channels a, b, c pool their purchases. The pool values a set
by the best split between them, which need not be submodular even though each
buyer is. The solver prices for the pool and still returns a stable set.
"""

from submod_pricing import (
    AggregatedValuation,
    ExplicitValuation,
    Instance,
    brute_force_collab,
    check_monotone_submodular,
    check_stable,
    solve_collab,
)

f1 = {"": 0, "a": 1, "b": 1, "c": 1, "ab": 2, "bc": 1, "ac": 2, "abc": 2}
f2 = {"": 0, "a": 2, "b": 2, "c": 2, "ab": 3, "bc": 4, "ac": 3, "abc": 4}


def explicit(table):
    return ExplicitValuation.from_function("abc", lambda X: table["".join(sorted(X))], submodular=True)


inst = Instance.of([explicit(f1), explicit(f2)], mode="collaborating")
pool = AggregatedValuation(inst.valuations)

for X in ["a", "ab", "bc", "abc"]:
    print(f"pool value of {{{','.join(X)}}}: {pool(X)}")

# the pool breaks submodularity: adding c helps {a,b} more than it helps {a}
print("pool submodular:", check_monotone_submodular(pool).to_dict())

sol = solve_collab(inst)
print("sold", sorted(sol.assignment), "profit", sol.profit)
print("stable for the pool:", check_stable(pool, sol.prices, sol.assignment).passed)
print("best stable profit:", brute_force_collab(inst).profit)
