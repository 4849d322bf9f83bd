"""Exhaustive (epsilon, delta) auditing of finite mechanisms.

A mechanism maps every size-``m`` dataset over a finite universe to an
output distribution.  Auditing enumerates every ordered pair of neighboring
datasets (single-position replacement) and takes the worst exact delta.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from privbound.dist import (DiscreteDistribution, check_aligned, dataset_key,
                            iid_power)
from privbound.errors import ResourceError, ValidationError

PAIR_CAP = 10**7
SUBSAMPLE_CAP = 10**6


def exact_delta(p: DiscreteDistribution, q: DiscreteDistribution, epsilon: float) -> float:
    """Smallest delta with P[p in S] <= e^eps P[q in S] + delta for every S."""
    check_aligned(p, q)
    if epsilon < 0:
        raise ValidationError(f"epsilon must be >= 0, got {epsilon}")
    return float(np.maximum(p.probs - math.exp(epsilon) * q.probs, 0.0).sum())


def eps_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic grid; values rounded to 12 decimals to keep CSVs tidy."""
    if step <= 0:
        raise ValidationError("grid step must be positive")
    if start < 0 or stop < start:
        raise ValidationError("grid needs 0 <= start <= stop")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


DEFAULT_EPS_GRID = tuple(eps_grid(0.0, 5.0, 0.05))


@dataclass(frozen=True, eq=False)
class Mechanism:
    """Finite mechanism; ``law`` maps an item tuple to its output distribution.

    With ``multiset_invariant`` set, ``law`` is only ever called on item
    tuples in canonical (universe) order.
    """

    universe: tuple
    dataset_size: int
    output_support: tuple
    law: Callable[[tuple], DiscreteDistribution]
    multiset_invariant: bool = False
    kind: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "output_support", tuple(self.output_support))
        if len(self.universe) < 1 or len(set(self.universe)) != len(self.universe):
            raise ValidationError("universe must be non-empty with distinct labels")
        if self.dataset_size < 1:
            raise ValidationError("dataset_size must be >= 1")
        object.__setattr__(self, "_cache", {})

    def canonical(self, items: Sequence) -> tuple:
        items = tuple(items)
        if self.multiset_invariant:
            rank = {u: i for i, u in enumerate(self.universe)}
            items = tuple(sorted(items, key=rank.__getitem__))
        return items

    def output(self, items: Sequence) -> DiscreteDistribution:
        items = tuple(items)
        if len(items) != self.dataset_size:
            raise ValidationError(
                f"mechanism expects {self.dataset_size} items, got {len(items)}")
        items = self.canonical(items)
        cache = self._cache
        if items not in cache:
            out = self.law(items)
            if out.support != self.output_support:
                raise ValidationError("mechanism output is not on the declared output support")
            cache[items] = out
        return cache[items]

    def datasets(self) -> list[tuple]:
        if self.multiset_invariant:
            return list(itertools.combinations_with_replacement(self.universe, self.dataset_size))
        return list(itertools.product(self.universe, repeat=self.dataset_size))

    def neighbor_items(self, items: tuple) -> list[tuple]:
        out, seen = [], set()
        for pos, current in enumerate(items):
            for u in self.universe:
                if u == current:
                    continue
                nb = self.canonical(items[:pos] + (u,) + items[pos + 1:])
                if nb not in seen:
                    seen.add(nb)
                    out.append(nb)
        return out


def table_mechanism(universe, m, table: Mapping[str, DiscreteDistribution],
                    multiset_invariant: bool = False) -> Mechanism:
    """Mechanism given by an explicit dataset-key -> output-distribution table."""
    universe = tuple(universe)
    support, seen = [], set()
    for dist in table.values():
        for s in dist.support:
            if s not in seen:
                seen.add(s)
                support.append(s)
    support = tuple(support)
    padded = {k: DiscreteDistribution(support, [d.prob(s) for s in support])
              for k, d in table.items()}

    def law(items):
        key = dataset_key(items, multiset_invariant)
        try:
            return padded[key]
        except KeyError:
            raise ValidationError(f"table has no entry for dataset {key!r}") from None

    mech = Mechanism(universe, m, support, law, multiset_invariant,
                     {"table": {k: d.to_dict() for k, d in table.items()}})
    for items in mech.datasets():
        mech.output(items)
    return mech


def n_of_m_release(universe, m: int, n: int) -> Mechanism:
    """Release n of the m records chosen uniformly without replacement, as a sorted tuple."""
    universe = tuple(universe)
    if not 1 <= n <= m:
        raise ValidationError(f"need 1 <= n <= m, got n={n}, m={m}")
    rank = {u: i for i, u in enumerate(universe)}
    support = tuple(itertools.combinations_with_replacement(universe, n))
    index = {s: i for i, s in enumerate(support)}
    subsets = list(itertools.combinations(range(m), n))

    def law(items):
        probs = np.zeros(len(support))
        for pos in subsets:
            probs[index[tuple(sorted((items[i] for i in pos), key=rank.__getitem__))]] += 1
        return DiscreteDistribution(support, probs / len(subsets))

    return Mechanism(universe, m, support, law, True,
                     {"builtin": {"n_of_m_release": {"n": n}}})


def randomized_response(universe, m: int, flip_prob: float) -> Mechanism:
    """Each record is reported truthfully w.p. 1 - f, else as a uniform other label."""
    universe = tuple(universe)
    if not 0.0 <= flip_prob <= 1.0:
        raise ValidationError("flip_prob must lie in [0, 1]")
    if len(universe) < 2:
        raise ValidationError("randomized response needs at least two labels")
    u = len(universe)
    if u ** m > SUBSAMPLE_CAP:
        raise ResourceError(f"output support {u}**{m} exceeds the cap {SUBSAMPLE_CAP}")
    support = tuple(itertools.product(universe, repeat=m))
    other = flip_prob / (u - 1)

    def law(items):
        probs = np.ones(1)
        for x in items:
            row = np.full(u, other)
            row[universe.index(x)] = 1.0 - flip_prob
            probs = np.multiply.outer(probs, row).reshape(-1)
        return DiscreteDistribution(support, probs)

    return Mechanism(universe, m, support, law, False,
                     {"builtin": {"randomized_response": {"flip_prob": flip_prob}}})


def table_generator(universe, m: int, generators: Mapping[str, DiscreteDistribution],
                    n: int = 1, multiset_invariant: bool = True) -> Mechanism:
    """Release ``n`` i.i.d. samples from a per-dataset generator table (the 'trained model')."""
    base = table_mechanism(universe, m, generators, multiset_invariant)
    first = base.output(base.datasets()[0])
    out_support = iid_power(first, n).support

    def law(items):
        return iid_power(base.output(items), n)

    return Mechanism(universe, m, out_support, law, multiset_invariant,
                     {"builtin": {"table_generator": {"n": n, **base.kind}}})


def subsample_compose(mech: Mechanism, k: int, m: int) -> Mechanism:
    """Run ``mech`` on k records drawn i.i.d. with replacement from a size-m dataset.

    The output law is the exact average over all m**k index draws.
    """
    if mech.dataset_size != k:
        raise ValidationError(f"inner mechanism takes {mech.dataset_size} records, not k={k}")
    if m < 1:
        raise ValidationError("m must be >= 1")
    if m ** k > SUBSAMPLE_CAP:
        raise ResourceError(f"m**k = {m}**{k} exceeds the subsampling cap {SUBSAMPLE_CAP}")
    draws = list(itertools.product(range(m), repeat=k))

    def law(items):
        acc = np.zeros(len(mech.output_support))
        for idx in draws:
            acc += mech.output(tuple(items[i] for i in idx)).probs
        return DiscreteDistribution(mech.output_support, acc / len(draws))

    # averaging over every index draw makes the composition order-free
    return Mechanism(mech.universe, m, mech.output_support, law, True,
                     {"subsample": {"k": k, "inner": dict(mech.kind)}})


@dataclass(frozen=True, eq=False)
class PrivacyProfile:
    epsilons: np.ndarray
    deltas: np.ndarray
    worst_pairs: tuple

    def delta_at(self, epsilon: float) -> float:
        i = int(np.flatnonzero(np.isclose(self.epsilons, epsilon, rtol=0, atol=1e-12))[0])
        return float(self.deltas[i])

    def to_csv(self) -> str:
        from privbound.report import fmt
        rows = ["epsilon,delta,worst_d0,worst_d1"]
        for e, d, (d0, d1) in zip(self.epsilons, self.deltas, self.worst_pairs):
            rows.append(f"{fmt(e)},{fmt(d)},{dataset_key(d0)},{dataset_key(d1)}")
        return "\n".join(rows) + "\n"


def _audit_shard(mech, shard, exp_eps):
    best = np.full(exp_eps.shape[0], -1.0)
    pairs = [None] * exp_eps.shape[0]
    for d0 in shard:
        p = mech.output(d0).probs
        nbs = mech.neighbor_items(d0)
        Q = np.stack([mech.output(d1).probs for d1 in nbs])
        deltas = np.maximum(p[None, None, :] - exp_eps[:, None, None] * Q[None, :, :], 0.0).sum(axis=2)
        arg = deltas.argmax(axis=1)
        top = deltas[np.arange(len(exp_eps)), arg]
        for e in np.flatnonzero(top > best):
            best[e] = top[e]
            pairs[e] = (d0, nbs[arg[e]])
    return best, pairs


def audit_mechanism(mech: Mechanism, eps_values: Sequence[float] = DEFAULT_EPS_GRID,
                    cap: int = PAIR_CAP, threads: int = 1) -> PrivacyProfile:
    """delta(eps) = max over ordered neighboring pairs of exact_delta(M(D0), M(D1), eps).

    Work is split by D0 across ``threads``; ties keep the first pair in
    enumeration order, so the result does not depend on the thread count.
    """
    eps = np.array(sorted(set(float(e) for e in eps_values)))
    if eps.size == 0 or np.any(eps < 0):
        raise ValidationError("epsilon grid must be non-empty and non-negative")
    if len(mech.universe) < 2:
        raise ValidationError("auditing needs a universe with at least 2 outcomes")
    datasets = mech.datasets()
    per = mech.dataset_size * (len(mech.universe) - 1)
    if len(datasets) * per > cap:
        raise ResourceError(
            f"{len(datasets)} datasets x {per} neighbors exceeds the pair cap {cap}; "
            "declare the mechanism multiset_invariant or shrink the universe")
    exp_eps = np.exp(eps)

    for d in datasets:
        mech.output(d)
    threads = max(1, int(threads))
    size = math.ceil(len(datasets) / threads)
    shards = [datasets[i:i + size] for i in range(0, len(datasets), size)]
    if len(shards) == 1:
        results = [_audit_shard(mech, shards[0], exp_eps)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda s: _audit_shard(mech, s, exp_eps), shards))

    best, pairs = results[0]
    best = best.copy()
    for other, other_pairs in results[1:]:
        for e in np.flatnonzero(other > best):
            best[e] = other[e]
            pairs[e] = other_pairs[e]
    return PrivacyProfile(eps, np.clip(best, 0.0, 1.0), tuple(pairs))


@dataclass(frozen=True)
class PdpReport:
    passed: bool
    bad_set: tuple
    bad_mass: float
    mass_margin: float
    ratio_margin: float

    def to_dict(self) -> dict:
        return {"passed": self.passed, "bad_set": [str(x) for x in self.bad_set],
                "bad_mass": self.bad_mass, "mass_margin": self.mass_margin,
                "ratio_margin": self.ratio_margin}


def verify_pdp(p: DiscreteDistribution, q: DiscreteDistribution,
               epsilon: float, delta: float, tol: float = 1e-12) -> PdpReport:
    """Check (eps, delta)-probabilistic DP of p against q with the bad set

    S0 = {x : log p(x) - log q(x) >= eps}; passes when p(S0) <= delta and
    p(x) <= e^eps q(x) off S0.
    """
    check_aligned(p, q)
    if not epsilon > 0:
        raise ValidationError(f"epsilon must be > 0, got {epsilon}")
    pp, qq = p.probs, q.probs
    with np.errstate(divide="ignore", invalid="ignore"):
        log_gap = np.log(pp) - np.log(qq)
    in_bad = (pp > 0) & ((qq == 0) | (log_gap >= epsilon))
    bad_mass = float(pp[in_bad].sum())
    slack = math.exp(epsilon) * qq[~in_bad] - pp[~in_bad]
    ratio_margin = float(slack.min()) if slack.size else math.inf
    mass_margin = delta - bad_mass
    passed = mass_margin >= -tol and ratio_margin >= -tol
    bad_set = tuple(x for x, b in zip(p.support, in_bad) if b)
    return PdpReport(bool(passed), bad_set, bad_mass, mass_margin, ratio_margin)
