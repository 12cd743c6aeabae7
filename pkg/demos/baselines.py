"""
Comparing against simple pricing rules
======================================

A synthetic advertising network: every customer is linked to a few channels
with random reach. The curvature-based solver is compared with selling
everything, random prices, scaled singleton prices and an ascending auction.
"""

from submod_pricing import BASELINES, SyntheticSpec, gen_synthetic, solve_single

for dist in ("uniform", "powerlaw"):
    inst = gen_synthetic(SyntheticSpec(num_channels=100, num_customers=2000, degree=10, q_max=0.3,
                                       distribution=dist, seed=0))
    f = inst.valuations[0]
    ours = solve_single(f)
    print(f"{dist}: proposed profit {ours.profit:.2f} selling {ours.s} channels")
    for name, rule in BASELINES.items():
        other = rule(f)
        print(f"  {name:10s} {other.profit:9.2f}  ratio {other.profit / ours.profit:.3f}")
