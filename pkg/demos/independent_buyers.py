"""
Several independent advertisers
===============================

Each buyer gets a disjoint share of the channels. Prices are set to the
largest removal marginal among buyers; the guarantee is approximate stability,
where every buyer keeps at least an alpha fraction of their best utility.
"""

from submod_pricing import Instance, SyntheticSpec, check_stable, exhaustive_multi_search, gen_synthetic, solve_multi

inst = gen_synthetic(SyntheticSpec(num_channels=5, num_customers=40, degree=2, q_max=0.5, seed=3, num_buyers=2))
sol = solve_multi(inst)
for i, share in enumerate(sol.assignment):
    print(f"buyer {i}: {sorted(share)}")
print("profit", round(sol.profit, 4), " certified alpha", round(sol.alpha, 4))

report = check_stable(inst, sol.prices, sol.assignment)
print("achieved alpha by enumeration:", round(report.alpha, 4))

# small enough to search every assignment for the best exactly stable pricing
opt, _, _ = exhaustive_multi_search(inst)
print("exact optimum:", round(opt, 4))
