"""
A Gibbs-posterior model of training
===================================

Parameters are drawn with weight prod g_alpha(x)/mu(x) over the training set.
Conditioned on the parameter, a training record is distributed exactly as
the generator g_alpha, so membership inference faces the TV ceiling.
"""

from privbound.dist import Dataset, DiscreteDistribution
from privbound.posterior import GibbsModel, model_mia_report, param_posterior, train_posterior

universe = ("a", "b")
mu = DiscreteDistribution(universe, [0.5, 0.5])
gens = {"g1": DiscreteDistribution(universe, [0.8, 0.2]),
        "g2": DiscreteDistribution(universe, [0.2, 0.8])}
model = GibbsModel(universe, mu, gens, m=2)

print("posterior on [a, a]:", param_posterior(model, Dataset(universe, ("a", "a"))).to_dict())

for alpha in model.labels:
    res = train_posterior(model, alpha)
    print(alpha, "training-record law", res.dist.probs, "deviation", res.deviation)
    rep = model_mia_report(model, alpha)
    print("   tv", rep.tv, "attack auc", rep.auc)
