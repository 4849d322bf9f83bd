"""
How the closed-form bounds move with the dataset size
=====================================================

The achievable delta falls like 1/m once the generalization budget eps_F is
small; the converse shows a one-sample release cannot do much better than
Delta'/(2m) at eps = 0.
"""

import math

from privbound.bounds import (BoundInputs, c_xi, dp_delta_achievable, dp_delta_converse,
                              epsilon_f, kl_to_pdp_delta)

print("C_xi(p=1, L=1, Delta=1, xi=1) =", c_xi(1, 1, 1, 1))
print("eps_F with k=10^6 samples     =", epsilon_f(10**6, 0.0, 0.0, c_xi(1, 1, 1, 1)))

for m in (10, 100, 1000, 10**4, 10**5, 10**6):
    ach = dp_delta_achievable(1.0, BoundInputs(m=m, n=1, eps_f=1e-4))
    con = dp_delta_converse(0.0, BoundInputs(m=m, delta_sup=1, delta_prime=2, eps_f=0.0))
    print(f"m={m:>8d}  achievable delta={ach.value:.3e}{' (clamped)' if ach.vacuous else ''}"
          f"  converse delta={con.value:.3e}")

# releasing n samples costs n times as much
for n in (1, 10, 100):
    print("n =", n, dp_delta_achievable(1.0, BoundInputs(m=10**5, n=n, eps_f=0.0)).value)

# symmetric KL budget -> probabilistic DP
s = 0.4 * math.log(1.5)
for eps in (0.25, 0.5, 1.0, 2.0):
    print(f"s={s:.5f} eps={eps}: pdp delta={kl_to_pdp_delta(s, eps):.5f}")
