"""
Instances behind the hardness results
=====================================

Small generators whose answers encode NP-hard questions: one-in-three 3-SAT,
exact cover by 3-sets, and equal-sum partition. Each is checked directly.
"""

from submod_pricing import (
    brute_force_single,
    check_stable,
    find_stable_assignment,
    gen_3sat_fixture,
    gen_harmonic,
    gen_partition_fixture,
    gen_x3c_fixture,
    random_3sat_clauses,
    welfare_profit_gap,
)

# planted one-in-three formula: max profit equals the clause count
clauses, truth = random_3sat_clauses(6, 5, seed=1, planted=True)
f = gen_3sat_fixture(clauses).valuations[0]
print("3-SAT clauses", clauses, "truth", truth, "max profit", brute_force_single(f).profit)

# exact cover exists, so the designated assignment admits no stable prices
inst, assignment, prices = gen_x3c_fixture(6, [(0, 1, 2), (3, 4, 5), (1, 2, 3)])
print("X3C candidate prices stable:", check_stable(inst, prices, assignment).passed)

# partition: zero prices are stable only if the numbers split evenly
for a in ([1, 1, 1, 3], [1, 1, 4]):
    inst, zero = gen_partition_fixture(a)
    print("partition", a, "stable assignment:", find_stable_assignment(inst, zero))

# harmonic valuation: welfare exceeds the best stable profit by H(n)
for n in (1, 2, 4, 8):
    print(f"n={n}: welfare / profit = {welfare_profit_gap(gen_harmonic(n)):.6f}")
