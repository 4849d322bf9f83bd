"""Finite discrete distributions, datasets and the operations on them.

Outcomes are hashable labels: plain strings for base supports and tuples of
labels for product supports built by :func:`iid_power`.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from privbound.errors import ResourceError, ValidationError

Outcome = Hashable

PROB_TOL = 1e-9
ENUMERATION_CAP = 10**6


def _check_support(support: Sequence[Outcome]) -> tuple:
    support = tuple(support)
    if not support:
        raise ValidationError("support must be non-empty")
    for label in support:
        if label == "" or label is None:
            raise ValidationError("outcome labels must be non-empty")
    if len(set(support)) != len(support):
        raise ValidationError(f"duplicate outcome labels in support {support!r}")
    return support


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    """Probability vector over an ordered, finite support."""

    support: tuple
    probs: np.ndarray

    def __post_init__(self):
        support = _check_support(self.support)
        probs = np.array(self.probs, dtype=float).reshape(-1)
        if probs.shape[0] != len(support):
            raise ValidationError(
                f"{len(support)} outcomes but {probs.shape[0]} probabilities")
        if not np.all(np.isfinite(probs)):
            raise ValidationError("probabilities must be finite")
        if np.any(probs < 0):
            raise ValidationError("probabilities must be non-negative")
        total = probs.sum()
        if abs(total - 1.0) > PROB_TOL:
            raise ValidationError(f"probabilities sum to {total!r}, not 1")
        probs = probs / total
        probs.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)

    def __len__(self):
        return len(self.support)

    def __repr__(self):
        pairs = ", ".join(f"{s!r}: {p:.6g}" for s, p in zip(self.support, self.probs))
        return f"DiscreteDistribution({{{pairs}}})"

    def prob(self, outcome: Outcome) -> float:
        try:
            return float(self.probs[self.support.index(outcome)])
        except ValueError:
            return 0.0

    def index(self, outcome: Outcome) -> int:
        return self.support.index(outcome)

    def allclose(self, other: DiscreteDistribution, atol: float = 1e-12) -> bool:
        return (self.support == other.support
                and bool(np.allclose(self.probs, other.probs, rtol=0, atol=atol)))

    @classmethod
    def from_dict(cls, data: dict) -> DiscreteDistribution:
        try:
            return cls(data["support"], data["probs"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad distribution object: {exc}") from exc

    def to_dict(self) -> dict:
        return {"support": [_label_str(s) for s in self.support],
                "probs": [float(p) for p in self.probs]}

    @classmethod
    def point_mass(cls, support: Sequence[Outcome], outcome: Outcome) -> DiscreteDistribution:
        support = tuple(support)
        probs = np.zeros(len(support))
        probs[support.index(outcome)] = 1.0
        return cls(support, probs)

    @classmethod
    def uniform(cls, support: Sequence[Outcome]) -> DiscreteDistribution:
        support = tuple(support)
        return cls(support, np.full(len(support), 1.0 / len(support)))


def _label_str(label: Outcome) -> str:
    if isinstance(label, tuple):
        return ",".join(_label_str(x) for x in label)
    return str(label)


@dataclass(frozen=True)
class Dataset:
    """Ordered list of items drawn from a declared universe."""

    universe: tuple
    items: tuple

    def __post_init__(self):
        universe = _check_support(self.universe)
        items = tuple(self.items)
        if not items:
            raise ValidationError("dataset must contain at least one item")
        allowed = set(universe)
        for item in items:
            if item not in allowed:
                raise ValidationError(f"item {item!r} not in universe {universe!r}")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "items", items)

    @property
    def size(self) -> int:
        return len(self.items)

    def key(self, multiset: bool = False) -> str:
        return dataset_key(self.items, multiset)

    @classmethod
    def from_dict(cls, data: dict) -> Dataset:
        try:
            return cls(tuple(data["universe"]), tuple(data["items"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad dataset object: {exc}") from exc

    def to_dict(self) -> dict:
        return {"universe": list(self.universe), "items": list(self.items)}


def dataset_key(items: Iterable[Outcome], multiset: bool = False) -> str:
    """Canonical string key; multiset keys sort labels lexicographically."""
    labels = [str(x) for x in items]
    if multiset:
        labels.sort()
    return "|".join(labels)


def empirical(dataset: Dataset) -> DiscreteDistribution:
    counts = Counter(dataset.items)
    m = dataset.size
    return DiscreteDistribution(
        dataset.universe, [counts[u] / m for u in dataset.universe])


def iid_power(dist: DiscreteDistribution, n: int,
              cap: int = ENUMERATION_CAP) -> DiscreteDistribution:
    """Law of ``n`` independent draws, over ordered ``n``-tuples."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    s = len(dist)
    if s ** n > cap:
        raise ResourceError(
            f"support of size {s}**{n} exceeds the enumeration cap {cap}")
    support = tuple(itertools.product(dist.support, repeat=n))
    probs = dist.probs
    for _ in range(n - 1):
        probs = np.multiply.outer(probs, dist.probs).reshape(-1)
    return DiscreteDistribution(support, probs)


def sample(dist: DiscreteDistribution, count: int, seed: int) -> list:
    """Draw ``count`` outcomes by inverse CDF.

    Uniforms come from numpy's Philox counter-based generator keyed by
    ``seed``, so the result is a pure function of (dist, count, seed).
    """
    if count < 0:
        raise ValidationError(f"count must be >= 0, got {count}")
    idx = sample_indices(dist.probs, count, seed)
    return [dist.support[i] for i in idx]


def sample_indices(probs: np.ndarray, count: int, seed: int,
                   stream: int | None = None) -> np.ndarray:
    """Inverse-CDF indices; ``stream`` selects an independent sub-seed (seed, stream)."""
    key = seed if stream is None else np.random.SeedSequence([seed, stream])
    rng = np.random.Generator(np.random.Philox(key))
    u = rng.random(count)
    cdf = np.cumsum(probs)
    # pin the CDF to 1 from the last positive outcome on so zero-mass tails are never hit
    last = int(np.flatnonzero(np.asarray(probs) > 0)[-1])
    cdf[last:] = 1.0
    return np.searchsorted(cdf, u, side="right")


def neighbors(dataset: Dataset) -> list[Dataset]:
    """All same-size datasets differing from ``dataset`` in exactly one position."""
    if len(dataset.universe) < 2:
        raise ValidationError("neighbors need a universe with at least 2 outcomes")
    out = []
    items = list(dataset.items)
    for pos, current in enumerate(items):
        for u in dataset.universe:
            if u == current:
                continue
            replaced = items.copy()
            replaced[pos] = u
            out.append(Dataset(dataset.universe, tuple(replaced)))
    return out


def align(p: DiscreteDistribution, q: DiscreteDistribution):
    """Re-express ``p`` and ``q`` on the union of their supports, zero-filling."""
    support = list(p.support)
    seen = set(support)
    for s in q.support:
        if s not in seen:
            support.append(s)
            seen.add(s)
    return (DiscreteDistribution(support, [p.prob(s) for s in support]),
            DiscreteDistribution(support, [q.prob(s) for s in support]))


def check_aligned(p: DiscreteDistribution, q: DiscreteDistribution) -> None:
    if p.support != q.support:
        raise ValidationError(
            "distributions have different supports; call align() first")
