"""Distances between discrete distributions.

All logarithms are natural.  KL values are plain floats where ``math.inf``
marks a failure of absolute continuity.
"""

from __future__ import annotations

import math

import numpy as np

from privbound.dist import DiscreteDistribution, check_aligned
from privbound.errors import ValidationError


def tv(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    check_aligned(p, q)
    return float(0.5 * np.abs(p.probs - q.probs).sum())


def kl(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    check_aligned(p, q)
    pp, qq = p.probs, q.probs
    mask = pp > 0
    if np.any(qq[mask] == 0):
        return math.inf
    value = float(np.sum(pp[mask] * (np.log(pp[mask]) - np.log(qq[mask]))))
    # round-off can leave tiny negatives when p ~ q
    return max(value, 0.0)


def sym_kl(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    return kl(p, q) + kl(q, p)


def ipm(p: DiscreteDistribution, q: DiscreteDistribution, fclass) -> float:
    """sup over the even closure of ``fclass`` of E_p[f] - E_q[f]."""
    check_aligned(p, q)
    if tuple(fclass.support) != p.support:
        raise ValidationError("function class is not defined on the distributions' support")
    diffs = fclass.matrix.T @ (p.probs - q.probs)
    # the even closure contributes -diffs as well
    return float(np.max(np.abs(diffs)))


def pinsker_tv_bound(kl_value: float) -> float:
    if kl_value < 0 or math.isnan(kl_value):
        raise ValidationError(f"KL value must be >= 0, got {kl_value}")
    if math.isinf(kl_value):
        return 1.0
    return min(1.0, math.sqrt(kl_value / 2.0))
