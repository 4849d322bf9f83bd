"""
Representing log-ratios with a discriminator class
==================================================

The F-variation norm is the cheapest L1 weight that writes a function as a
constant plus a combination of discriminators.  Gamma takes the worst case
over log-density ratios of a generator family.
"""

import numpy as np

from privbound.dist import DiscreteDistribution
from privbound.divergence import ipm, sym_kl
from privbound.fclass import FunctionClass, GeneratorFamily, f_variation_norm, gamma, represent

support = ("a", "b", "c")
f1 = np.array([1.0, -1.0, 0.0])
f2 = np.array([0.0, 1.0, -1.0])
F = FunctionClass.from_arrays(support, np.column_stack([f1, f2]))

g = 2 * f1 + 3 * f2 + 7.0
sol = represent(g, F)
print("norm", sol.objective, "weights", sol.weights, "intercept", sol.intercept)

# something outside the span has no finite norm
print("outside span:", f_variation_norm([1.0, 0.0, 1.0], FunctionClass.from_arrays(support, f1)))

# tilt a base law along the class so the log-ratio is representable
base = DiscreteDistribution(support, [0.2, 0.3, 0.5])
w = base.probs * np.exp(-(0.4 * f1 - 0.7 * f2))
other = DiscreteDistribution(support, w / w.sum())
G = GeneratorFamily(support, {"base": base, "tilted": other})
res = gamma(F, G)
print("gamma", res.value, "attained by", res.pair)

# symmetric KL is controlled by gamma times the IPM
print(sym_kl(base, other), "<=", res.value * ipm(base, other, F))
