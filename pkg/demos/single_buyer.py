"""
Pricing channels for one advertiser
===================================

Two channels each reach the same customer with probability 0.9. Selling both
is worth only 0.99 to the buyer, so any stable price on the pair is capped by
the tiny removal marginals. Selling one channel at its full value does better.
"""

import numpy as np

from submod_pricing import (
    CoverageValuation,
    brute_force_single,
    check_stable,
    curvature_profile,
    solve_single,
    solve_single_budgeted,
)

f = CoverageValuation(["u", "v"], ["w"], [("u", "w", 0.9), ("v", "w", 0.9)])
print("f({u}) =", f(["u"]), " f({u,v}) =", f(["u", "v"]))

# curvature per set size: how much the second channel is worth less
kappa = curvature_profile(f)
print("kappa(1), kappa(2) =", kappa(1), kappa(2))

sol = solve_single(f)
print("sold", sorted(sol.assignment), "prices", sol.prices.values, "profit", sol.profit)

# independent check: enumerate every deviation of the buyer
report = check_stable(f, sol.prices, sol.assignment)
print("stable:", report.passed, " alpha:", report.alpha)

best = brute_force_single(f)
print("optimum over all stable pricings:", best.profit)

# a budget scales the prices down proportionally
for B in (1.0, 0.5, 0.1):
    b = solve_single_budgeted(f, B)
    print(f"budget {B}: profit {b.profit:.3f}, prices {np.round(b.prices.values, 3)}")
