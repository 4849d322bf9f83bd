"""Finite Gibbs posterior over generator parameters.

With KL loss and temperature 1 the parameter posterior is taken to be

    P(alpha | x_1..x_m) = (1/|A|) * prod_i g_alpha(x_i) / mu(x_i)

i.e. a data-independent normalizer 1/|A|.  Under that reading the law of a
training sample given alpha can be enumerated exactly over universe**m.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from privbound import bounds
from privbound.dist import ENUMERATION_CAP, DiscreteDistribution, Dataset
from privbound.divergence import tv
from privbound.errors import ResourceError, ValidationError, VerificationError
from privbound.mia import RocCurve, auc, np_roc


@dataclass(frozen=True, eq=False)
class GibbsModel:
    """Population law ``mu``, generator table and training-set size ``m``.

    Zero densities are accepted so that membership tests can be run on
    boundary constructions; the posterior operations reject them.
    """

    universe: tuple
    mu: DiscreteDistribution
    generators: Mapping[str, DiscreteDistribution]
    m: int
    cap: int = ENUMERATION_CAP

    def __post_init__(self):
        universe = tuple(self.universe)
        generators = dict(self.generators)
        if not generators:
            raise ValidationError("model needs at least one generator")
        if self.m < 1:
            raise ValidationError("m must be >= 1")
        for name, dist in [("mu", self.mu), *generators.items()]:
            if dist.support != universe:
                raise ValidationError(f"{name!r} is not defined on the model universe")
        if len(universe) ** self.m > self.cap:
            raise ResourceError(
                f"|universe|**m = {len(universe)}**{self.m} exceeds the cap {self.cap}")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "generators", generators)

    @property
    def labels(self) -> tuple:
        return tuple(self.generators)

    def require_positive(self) -> None:
        """Posterior computations need finite log-ratios everywhere."""
        for name, dist in [("mu", self.mu), *self.generators.items()]:
            if np.any(dist.probs <= 0):
                raise ValidationError(f"{name!r} must be strictly positive")

    @classmethod
    def from_dict(cls, data: dict) -> GibbsModel:
        try:
            universe = tuple(data["universe"])
            mu = _dist_on(universe, data["mu"])
            gens = {k: _dist_on(universe, v) for k, v in data["generators"].items()}
            return cls(universe, mu, gens, int(data["m"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad model object: {exc}") from exc


def _dist_on(universe, obj) -> DiscreteDistribution:
    if isinstance(obj, dict):
        return DiscreteDistribution.from_dict({"support": obj.get("support", universe),
                                               "probs": obj["probs"]})
    return DiscreteDistribution(universe, obj)


def _log_likelihood_ratio(model: GibbsModel, label: str) -> np.ndarray:
    return np.log(model.generators[label].probs) - np.log(model.mu.probs)


def param_posterior(model: GibbsModel, dataset: Dataset) -> DiscreteDistribution:
    """Normalized posterior weights over generator labels for one dataset."""
    if dataset.size != model.m:
        raise ValidationError(f"dataset has {dataset.size} items, model expects {model.m}")
    if tuple(dataset.universe) != model.universe:
        raise ValidationError("dataset universe differs from the model universe")
    model.require_positive()
    idx = np.array([model.universe.index(x) for x in dataset.items])
    logw = np.array([_log_likelihood_ratio(model, a)[idx].sum() for a in model.labels])
    w = np.exp(logw - logw.max())
    return DiscreteDistribution(model.labels, w / w.sum())


@dataclass(frozen=True, eq=False)
class TrainPosterior:
    dist: DiscreteDistribution
    deviation: float


def train_posterior(model: GibbsModel, alpha: str) -> TrainPosterior:
    """Law of a training sample given the parameter is ``alpha``, by full enumeration.

    The joint weight of (D, alpha) is mu(D) * P(alpha | D); the first
    coordinate of D is marginalized and divided by P(alpha).  ``deviation``
    is the sup-distance of the result from g_alpha.
    """
    if alpha not in model.generators:
        raise ValidationError(f"unknown generator label {alpha!r}")
    model.require_positive()
    u, m = len(model.universe), model.m
    grid = np.indices((u,) * m).reshape(m, -1)
    log_mu = np.log(model.mu.probs)
    log_prior = -np.log(len(model.generators))
    log_post = log_prior + _log_likelihood_ratio(model, alpha)[grid].sum(axis=0)
    log_joint = log_mu[grid].sum(axis=0) + log_post
    joint = np.exp(log_joint).reshape(u, -1)
    # rows are shards by first coordinate, reduced in fixed order
    by_first = joint.sum(axis=1)
    marginal = by_first.sum()
    dist = DiscreteDistribution(model.universe, by_first / marginal)
    deviation = float(np.max(np.abs(dist.probs - model.generators[alpha].probs)))
    return TrainPosterior(dist, deviation)


@dataclass(frozen=True, eq=False)
class ModelMiaReport:
    curve: RocCurve
    auc: float
    tv: float


def model_mia_report(model: GibbsModel, alpha: str, tol: float = 1e-12) -> ModelMiaReport:
    """Optimal membership test of g_alpha against mu, checked against the AUC ceiling."""
    if alpha not in model.generators:
        raise ValidationError(f"unknown generator label {alpha!r}")
    g = model.generators[alpha]
    curve = np_roc(g, model.mu)
    area = auc(curve)
    r = tv(g, model.mu)
    if area > bounds.auc_bound(r) + tol:
        raise VerificationError(f"AUC {area} exceeds the bound {bounds.auc_bound(r)} at tv={r}")
    return ModelMiaReport(curve, area, r)
