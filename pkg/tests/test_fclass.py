import math

import numpy as np
import pytest

from oracles import grid_l1, random_simplex
from privbound.dist import DiscreteDistribution
from privbound.divergence import ipm, sym_kl
from privbound.errors import ValidationError
from privbound.fclass import (BoundedFunction, FunctionClass, GeneratorFamily, delta_bound,
                              delta_prime, f_variation_norm, gamma, gamma_mu)

ABC = ("a", "b", "c")


def fc(*columns, support=None, **kw):
    columns = np.column_stack(columns)
    support = support or tuple("abcdefgh"[:columns.shape[0]])
    return FunctionClass.from_arrays(support, columns, **kw)


def tilt(base, weights_by_outcome):
    """Distribution proportional to base * exp(-g)."""
    w = np.asarray(base.probs) * np.exp(-np.asarray(weights_by_outcome))
    return DiscreteDistribution(base.support, w / w.sum())


class TestClassConstants:
    def test_zero_class(self):
        assert delta_bound(fc([0.0, 0.0])) == 0
        assert delta_prime(fc([0.0, 0.0])) == 0

    def test_single_pm_one(self):
        F = fc([1.0, -1.0])
        assert delta_bound(F) == 1
        assert delta_prime(F) == 2

    def test_max_abs(self):
        assert delta_bound(fc([0.3, -2.0], [1.5, 0.0])) == 2.0

    def test_range(self):
        assert delta_prime(fc([4.0, 4.0, 4.0])) == 0
        assert delta_prime(fc([0.3, -2.0, 1.1])) == pytest.approx(3.1, abs=1e-15)


class TestSchema:
    def test_symmetrization_closes_class(self):
        F = FunctionClass.from_dict({"support": ["a", "b"], "symmetrize": True,
                                     "functions": [{"name": "f1", "values": {"a": 1.0, "b": -1.0}}]})
        assert F.closure.shape == (2, 2)
        np.testing.assert_array_equal(F.closure[:, 1], -F.closure[:, 0])

    def test_unsymmetrized_odd_class_rejected(self):
        with pytest.raises(ValidationError, match="negation"):
            FunctionClass(("a", "b"), [BoundedFunction("f", {"a": 1.0, "b": 0.0})], symmetrize=False)

    def test_unsymmetrized_even_class_accepted(self):
        F = FunctionClass(("a", "b"), [BoundedFunction("f", {"a": 1.0, "b": 0.0}),
                                       BoundedFunction("g", {"a": -1.0, "b": 0.0})], symmetrize=False)
        assert delta_bound(F) == 1

    def test_function_missing_outcome(self):
        with pytest.raises(ValidationError):
            FunctionClass(("a", "b"), [BoundedFunction("f", {"a": 1.0})])

    def test_round_trip(self):
        F = fc([1.0, -1.0, 0.5], [0.0, 2.0, 0.0])
        G = FunctionClass.from_dict(F.to_dict())
        np.testing.assert_array_equal(G.matrix, F.matrix)


class TestVariationNorm:
    def test_constant_absorbed(self):
        assert f_variation_norm([2.0, 2.0, 2.0], fc([1.0, 0.0, -1.0])) == 0

    def test_member(self):
        f1 = [1.0, 0.0, -1.0]
        assert f_variation_norm(f1, fc(f1)) == pytest.approx(1.0, abs=1e-12)

    def test_two_independent(self):
        f1 = np.array([1.0, -1.0, 0.0])
        f2 = np.array([0.0, 1.0, -1.0])
        g = 2 * f1 + 3 * f2
        assert f_variation_norm(g, fc(f1, f2)) == pytest.approx(5.0, abs=1e-8)
        assert grid_l1(np.column_stack([f1, f2]), g) == 5.0

    def test_infeasible_is_inf(self):
        assert f_variation_norm([0.0, 1.0, 5.0], fc([0.0, 1.0, 2.0])) == math.inf

    def test_bounded_function_target(self):
        g = BoundedFunction("g", {"a": 3.0, "b": 0.0, "c": -3.0})
        assert f_variation_norm(g, fc([1.0, 0.0, -1.0])) == pytest.approx(3.0, abs=1e-12)

    def test_homogeneity_and_triangle(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            s, n = int(rng.integers(2, 6)), int(rng.integers(1, 4))
            F = fc(*rng.normal(size=(n, s)))
            g1 = F.matrix @ rng.normal(size=n) + rng.normal()
            g2 = F.matrix @ rng.normal(size=n)
            c = rng.normal() * 3
            n1 = f_variation_norm(g1, F)
            assert f_variation_norm(c * g1, F) == pytest.approx(abs(c) * n1, abs=1e-8)
            assert f_variation_norm(g1 + g2, F) <= n1 + f_variation_norm(g2, F) + 1e-8


class TestGamma:
    def test_singleton(self):
        nu = DiscreteDistribution(ABC, [0.2, 0.3, 0.5])
        res = gamma(fc([1.0, 0.0, -1.0]), GeneratorFamily(ABC, {"nu": nu}))
        assert res.value == 0 and res.feasible

    def test_identical_members(self):
        nu = DiscreteDistribution(ABC, [0.2, 0.3, 0.5])
        res = gamma(fc([1.0, 0.0, -1.0]), GeneratorFamily(ABC, {"x": nu, "y": nu}))
        assert res.value == pytest.approx(0.0, abs=1e-12)

    def test_constructed_pair(self):
        f1 = np.array([1.0, 0.0, -1.0])
        nu1 = DiscreteDistribution(ABC, [0.2, 0.3, 0.5])
        nu2 = tilt(nu1, f1)
        res = gamma(fc(f1), GeneratorFamily(ABC, {"nu1": nu1, "nu2": nu2}))
        assert res.value == pytest.approx(1.0, abs=1e-9)
        assert res.pair == ("nu1", "nu2")

    def test_infeasible_names_pair(self):
        nu1 = DiscreteDistribution(ABC, [0.2, 0.3, 0.5])
        nu2 = DiscreteDistribution(ABC, [0.5, 0.3, 0.2])
        nu3 = DiscreteDistribution(ABC, [0.1, 0.1, 0.8])
        # constants only: any non-constant log-ratio is outside the span
        res = gamma(fc([1.0, 1.0, 1.0]), GeneratorFamily(ABC, {"p": nu1, "q": nu2, "r": nu3}))
        assert not res.feasible
        assert res.pair == ("p", "q")

    def test_family_requires_positive_members(self):
        with pytest.raises(ValidationError):
            GeneratorFamily(ABC, {"z": DiscreteDistribution(ABC, [0.5, 0.5, 0.0])})

    def test_kl_base_inequality_on_constructed_families(self):
        rng = np.random.default_rng(99)
        for _ in range(50):
            s, n = int(rng.integers(2, 7)), int(rng.integers(1, 4))
            support = tuple(f"x{i}" for i in range(s))
            F = fc(*rng.uniform(-1, 1, size=(n, s)), support=support)
            base = DiscreteDistribution(support, random_simplex(rng, s))
            members = {"g0": base}
            for j in range(1, int(rng.integers(2, 5))):
                members[f"g{j}"] = tilt(base, F.matrix @ rng.normal(size=n))
            G = GeneratorFamily(support, members)
            Gam = gamma(F, G).value
            labels = list(members)
            for a in labels:
                for b in labels:
                    if a != b:
                        assert sym_kl(members[a], members[b]) <= Gam * ipm(members[a], members[b], F) + 1e-9


class TestGammaMu:
    def test_mu_in_family(self):
        mu = DiscreteDistribution(ABC, [0.2, 0.3, 0.5])
        assert gamma_mu(fc([1.0, 0.0, -1.0]), GeneratorFamily(ABC, {"mu": mu}), mu).value == 0

    def test_half_tilt(self):
        f1 = np.array([1.0, 0.0, -1.0])
        mu = DiscreteDistribution(ABC, [0.2, 0.3, 0.5])
        nu = tilt(mu, 0.5 * f1)
        res = gamma_mu(fc(f1), GeneratorFamily(ABC, {"nu": nu}), mu)
        assert res.value == pytest.approx(0.5, abs=1e-9)
        assert res.pair == ("mu", "nu")

    def test_outside_span(self):
        mu = DiscreteDistribution(ABC, [0.2, 0.3, 0.5])
        nu = DiscreteDistribution(ABC, [0.3, 0.3, 0.4])
        res = gamma_mu(fc([1.0, 1.0, 1.0]), GeneratorFamily(ABC, {"nu": nu}), mu)
        assert not res.feasible

    def test_tv_variant_inequality(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            s, n = int(rng.integers(2, 6)), int(rng.integers(1, 4))
            support = tuple(f"x{i}" for i in range(s))
            F = fc(*rng.uniform(-1, 1, size=(n, s)), support=support)
            mu = DiscreteDistribution(support, random_simplex(rng, s))
            members = {f"a{j}": tilt(mu, F.matrix @ rng.normal(size=n)) for j in range(3)}
            GT = gamma_mu(F, GeneratorFamily(support, members), mu).value
            for g in members.values():
                assert sym_kl(g, mu) <= GT * ipm(mu, g, F) + 1e-9
