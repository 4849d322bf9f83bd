"""
Exhaustive privacy audit of small mechanisms
============================================

Every neighboring pair of datasets is enumerated and the exact
delta(eps) = sum max(p - e^eps q, 0) is maximized over them.
"""

import math

from privbound.audit import audit_mechanism, n_of_m_release, randomized_response
from privbound.bounds import dp_to_tv_bound
from privbound.divergence import tv

universe = ("a", "b")

# releasing n of m records leaks delta(0) = n/m
for m, n in [(5, 1), (4, 2), (8, 3)]:
    prof = audit_mechanism(n_of_m_release(universe, m, n), [0.0, 1.0])
    print(f"n_of_m m={m} n={n}: delta(0)={prof.delta_at(0.0):.6f}  n/m={n / m:.6f}")

# randomized response with flip f is pure eps-DP at eps = log((1-f)/f)
rr = randomized_response(universe, 1, 0.25)
prof = audit_mechanism(rr, [0.0, 0.5, math.log(3), 1.5])
for e, d in zip(prof.epsilons, prof.deltas):
    print(f"rr eps={e:.4f} delta={d:.4f}")

# the worst pair is always inside the TV ceiling implied by (eps, delta)
rr2 = randomized_response(universe, 2, 0.1)
prof = audit_mechanism(rr2)
for e, d, (d0, d1) in list(zip(prof.epsilons, prof.deltas, prof.worst_pairs))[::20]:
    print(f"eps={e:.2f} tv={tv(rr2.output(d0), rr2.output(d1)):.4f} <= {dp_to_tv_bound(e, d):.4f}")

print(prof.to_csv().splitlines()[1])
