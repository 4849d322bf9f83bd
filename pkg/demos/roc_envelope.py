"""
Membership-inference ROC under a TV budget
==========================================

Any test of p against q has TP <= FP + tv(p, q).  A three-point pair meets
that envelope exactly, and finite-sample attacks converge to it.
"""

import numpy as np

from privbound.bounds import auc_bound
from privbound.dist import DiscreteDistribution
from privbound.mia import (auc, check_envelope, empirical_roc, gan_mia_report, np_roc,
                           roc_distance, roc_envelope, tight_pair)

r = 0.3
print(roc_envelope(r).to_csv())

p, q = tight_pair(r)
curve = np_roc(p, q)
print("tight pair ROC:", curve.vertices.tolist())
print("auc", auc(curve), "bound", auc_bound(r))

# a generic pair stays strictly inside
rng = np.random.default_rng(0)
support = tuple("abcdef")
g = DiscreteDistribution(support, rng.dirichlet(np.ones(6)))
mu = DiscreteDistribution(support, rng.dirichlet(np.ones(6)))
ok, tv_gm = check_envelope(g, mu)
print(f"random pair: tv={tv_gm:.4f} auc={auc(np_roc(g, mu)):.4f} <= {auc_bound(tv_gm):.4f} ({ok})")

# sampling error of a likelihood-ratio attacker
for n in (10**3, 10**4, 10**5):
    print(n, "samples/side: sup gap", roc_distance(empirical_roc(p, q, n, 42), curve))

# end-to-end ceiling for a trained GAN
print(gan_mia_report(gamma_mu=1.0, eps_f_value=0.5).to_dict())
