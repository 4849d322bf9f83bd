"""
Distances between discrete laws
===============================

Total variation, KL, symmetric KL and an IPM over a small even
discriminator class, plus the Pinsker ceiling on TV.
"""

import numpy as np

from privbound.dist import DiscreteDistribution
from privbound.divergence import ipm, kl, pinsker_tv_bound, sym_kl, tv
from privbound.fclass import FunctionClass, delta_bound

support = ("a", "b", "c")
p = DiscreteDistribution(support, [0.5, 0.3, 0.2])
q = DiscreteDistribution(support, [0.2, 0.3, 0.5])

print("tv      ", tv(p, q))
print("kl(p|q) ", kl(p, q))
print("sym kl  ", sym_kl(p, q))

# TV is never above sqrt(KL / 2)
print("pinsker ", pinsker_tv_bound(kl(p, q)))

# one discriminator plus its negation; the IPM sees only what F can tell apart
F = FunctionClass.from_arrays(support, np.array([[1.0], [0.0], [-1.0]]))
print("ipm_F   ", ipm(p, q, F), "<= 2*Delta*tv =", 2 * delta_bound(F) * tv(p, q))

# a class that only looks at outcome 'b' cannot separate p from q at all
blind = FunctionClass.from_arrays(support, [[0.0], [1.0], [0.0]])
print("ipm_blind", ipm(p, q, blind))
