"""Finite discriminator classes and their representation constants.

A class is stored as a dense ``s x n`` matrix of function values on an
ordered support.  Evenness is realized at construction: with
``symmetrize=True`` the negation of every function is implied, and with
``symmetrize=False`` the given functions must already be closed under
negation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from privbound import l1solve
from privbound.dist import DiscreteDistribution
from privbound.errors import ValidationError

FEAS_TOL = 1e-8


@dataclass(frozen=True)
class BoundedFunction:
    name: str
    values: Mapping

    def on(self, support: Sequence) -> np.ndarray:
        missing = [x for x in support if x not in self.values]
        if missing:
            raise ValidationError(f"function {self.name!r} undefined on {missing!r}")
        return np.array([float(self.values[x]) for x in support])


@dataclass(frozen=True, eq=False)
class FunctionClass:
    support: tuple
    functions: tuple
    symmetrize: bool = True

    def __post_init__(self):
        support = tuple(self.support)
        functions = tuple(self.functions)
        if not support:
            raise ValidationError("function class needs a non-empty support")
        if not functions:
            raise ValidationError("function class must contain at least one function")
        matrix = np.column_stack([f.on(support) for f in functions])
        if not np.all(np.isfinite(matrix)):
            raise ValidationError("function values must be finite")
        if not self.symmetrize and not _is_even(matrix):
            raise ValidationError(
                "class is not closed under negation; load it with symmetrize=True")
        matrix.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "functions", functions)
        object.__setattr__(self, "matrix", matrix)

    @property
    def closure(self) -> np.ndarray:
        """Values of the even closure, one column per member."""
        if self.symmetrize:
            return np.hstack([self.matrix, -self.matrix])
        return self.matrix

    @classmethod
    def from_arrays(cls, support, columns, names=None, symmetrize=True) -> FunctionClass:
        support = tuple(support)
        columns = np.asarray(columns, dtype=float)
        if columns.ndim == 1:
            columns = columns[:, None]
        names = names or [f"f{i + 1}" for i in range(columns.shape[1])]
        funcs = tuple(BoundedFunction(nm, dict(zip(support, columns[:, i].tolist())))
                      for i, nm in enumerate(names))
        return cls(support, funcs, symmetrize)

    @classmethod
    def from_dict(cls, data: dict) -> FunctionClass:
        try:
            support = tuple(data["support"])
            funcs = tuple(BoundedFunction(f["name"], dict(f["values"]))
                          for f in data["functions"])
            return cls(support, funcs, bool(data.get("symmetrize", True)))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad function-class object: {exc}") from exc

    def to_dict(self) -> dict:
        return {"support": list(self.support), "symmetrize": self.symmetrize,
                "functions": [{"name": f.name,
                               "values": {str(x): float(f.values[x]) for x in self.support}}
                              for f in self.functions]}


def _is_even(matrix: np.ndarray) -> bool:
    cols = {tuple(c) for c in matrix.T.tolist()}
    return all(tuple(-v for v in c) in cols for c in cols)


@dataclass(frozen=True, eq=False)
class GeneratorFamily:
    """Named generator densities, all strictly positive on a common support."""

    support: tuple
    members: Mapping

    def __post_init__(self):
        support = tuple(self.support)
        members = dict(self.members)
        if not members:
            raise ValidationError("generator family must be non-empty")
        for label, dist in members.items():
            if dist.support != support:
                raise ValidationError(f"generator {label!r} is on a different support")
            if np.any(dist.probs <= 0):
                raise ValidationError(
                    f"generator {label!r} must be strictly positive (log-ratios finite)")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "members", members)

    @classmethod
    def from_dict(cls, data: dict) -> GeneratorFamily:
        try:
            support = tuple(data["support"])
            members = {k: DiscreteDistribution(support, v["probs"] if isinstance(v, dict) else v)
                       for k, v in data["members"].items()}
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"bad generator-family object: {exc}") from exc
        return cls(support, members)


@dataclass(frozen=True)
class GammaResult:
    """Worst-case F-variation norm and the pair attaining it.

    ``value`` is ``inf`` when some log-ratio lies outside Span(F); ``pair``
    then names the first offending pair.
    """

    value: float
    pair: tuple | None

    @property
    def feasible(self) -> bool:
        return math.isfinite(self.value)


def delta_bound(fclass: FunctionClass) -> float:
    return float(np.max(np.abs(fclass.matrix)))


def delta_prime(fclass: FunctionClass) -> float:
    m = fclass.matrix
    return float(np.max(m.max(axis=0) - m.min(axis=0)))


def _values(g, fclass: FunctionClass) -> np.ndarray:
    if isinstance(g, BoundedFunction):
        return g.on(fclass.support)
    g = np.asarray(g, dtype=float).reshape(-1)
    if g.shape[0] != len(fclass.support):
        raise ValidationError("target function does not match the class support")
    return g


def represent(g, fclass: FunctionClass, tol: float = FEAS_TOL) -> l1solve.L1Solution:
    """Minimum-L1 representation of ``g`` as an affine combination of the class.

    Weights index the class's own functions; members added by the even
    closure never lower the optimum since w*f + w'*(-f) = (w - w')*f.
    """
    return l1solve.solve(l1solve.L1Problem(fclass.matrix, _values(g, fclass)), tol=tol)


def f_variation_norm(g, fclass: FunctionClass, tol: float = FEAS_TOL) -> float:
    """``||g||_{F,1}``; ``inf`` when ``g`` is not in Span(F) plus constants."""
    sol = represent(g, fclass, tol)
    return sol.objective if sol.optimal else math.inf


def log_ratio(a: DiscreteDistribution, b: DiscreteDistribution) -> np.ndarray:
    return np.log(a.probs) - np.log(b.probs)


def gamma(fclass: FunctionClass, family: GeneratorFamily, tol: float = FEAS_TOL) -> GammaResult:
    """Worst F-variation norm of log(rho_1 / rho_2) over generator pairs."""
    _check_support(fclass, family.support)
    best = GammaResult(0.0, None)
    # ||-g|| = ||g||, so unordered pairs cover the ordered supremum
    for a, b in itertools.combinations(family.members, 2):
        value = f_variation_norm(log_ratio(family.members[a], family.members[b]), fclass, tol)
        if not math.isfinite(value):
            return GammaResult(math.inf, (a, b))
        if best.pair is None or value > best.value:
            best = GammaResult(value, (a, b))
    return best


def gamma_mu(fclass: FunctionClass, family: GeneratorFamily, mu: DiscreteDistribution,
             tol: float = FEAS_TOL) -> GammaResult:
    """Worst F-variation norm of log(rho_mu / rho_nu) over the family."""
    _check_support(fclass, family.support)
    if mu.support != family.support:
        raise ValidationError("mu is on a different support from the family")
    if np.any(mu.probs <= 0):
        raise ValidationError("mu must be strictly positive")
    best = GammaResult(0.0, None)
    for label, nu in family.members.items():
        value = f_variation_norm(log_ratio(mu, nu), fclass, tol)
        if not math.isfinite(value):
            return GammaResult(math.inf, ("mu", label))
        if best.pair is None or value > best.value:
            best = GammaResult(value, ("mu", label))
    return best


def _check_support(fclass: FunctionClass, support) -> None:
    if tuple(fclass.support) != tuple(support):
        raise ValidationError("function class and generators use different supports")
