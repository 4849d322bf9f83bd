import numpy as np
import pytest

from oracles import random_simplex, trapezoid_area
from privbound.bounds import auc_bound
from privbound.dist import DiscreteDistribution
from privbound.divergence import tv
from privbound.errors import ValidationError
from privbound.mia import (RocCurve, auc, check_envelope, empirical_roc, gan_mia_report,
                           np_roc, roc_distance, roc_envelope, tight_pair, tp_upper_bound)


def D(*probs):
    return DiscreteDistribution(tuple("abcdefghijkl"[:len(probs)]), probs)


class TestEnvelope:
    def test_zero_is_diagonal(self):
        np.testing.assert_array_equal(roc_envelope(0).vertices, [[0, 0], [1, 1]])

    def test_one_jumps_to_perfect(self):
        np.testing.assert_array_equal(roc_envelope(1).vertices, [[0, 0], [0, 1], [1, 1]])

    def test_point_three(self):
        np.testing.assert_allclose(roc_envelope(0.3).vertices,
                                   [[0, 0], [0, 0.3], [0.7, 1], [1, 1]], atol=1e-15)

    def test_value_at_zero_is_r(self):
        for r in (0.1, 0.3, 0.9):
            assert roc_envelope(r).value_at(0.0)[1] == pytest.approx(r)

    def test_rejects_bad_r(self):
        with pytest.raises(ValidationError):
            roc_envelope(-0.1)

    @pytest.mark.parametrize("r", np.round(np.arange(0, 1.0001, 0.01), 2))
    def test_auc_formula(self, r):
        area = auc(roc_envelope(r))
        assert area == pytest.approx(-0.5 * r * r + r + 0.5, abs=1e-12)
        assert area == pytest.approx(trapezoid_area(roc_envelope(r).vertices), abs=1e-15)


class TestNeymanPearson:
    def test_identical_is_chance(self):
        curve = np_roc(D(0.3, 0.7), D(0.3, 0.7))
        np.testing.assert_array_equal(curve.vertices, [[0, 0], [1, 1]])
        assert auc(curve) == 0.5

    def test_disjoint_is_perfect(self):
        np.testing.assert_array_equal(np_roc(D(1, 0), D(0, 1)).vertices, [[0, 0], [0, 1], [1, 1]])

    @pytest.mark.parametrize("r", [0.0, 0.05, 0.3, 0.5, 0.95, 1.0])
    def test_tight_pair_attains_envelope(self, r):
        p, q = tight_pair(r)
        assert tv(p, q) == pytest.approx(r, abs=1e-15)
        np.testing.assert_allclose(np_roc(p, q).vertices, roc_envelope(r).vertices, atol=1e-12)

    def test_point_four(self):
        p, q = tight_pair(0.4)
        assert auc(np_roc(p, q)) == pytest.approx(0.82, abs=1e-12)
        assert auc_bound(0.4) == pytest.approx(0.82, abs=1e-15)

    def test_tied_ratios_share_a_segment(self):
        # ratios 2, 2, 0.5 -> one segment for the tied pair
        curve = np_roc(D(0.2, 0.4, 0.4), D(0.1, 0.2, 0.7))
        assert len(curve) == 3
        assert curve.is_concave()

    def test_random_pairs_concave_and_dominated(self):
        rng = np.random.default_rng(123)
        for _ in range(300):
            s = int(rng.integers(2, 13))
            support = tuple(f"x{i}" for i in range(s))
            p = DiscreteDistribution(support, random_simplex(rng, s, 0.2))
            q = DiscreteDistribution(support, random_simplex(rng, s, 0.2))
            curve = np_roc(p, q)
            assert curve.is_concave(tol=1e-12)
            ok, r = check_envelope(p, q)
            assert ok
            # max vertical gap of the optimal ROC above the diagonal is the TV distance
            assert np.max(curve.tp - curve.fp) == pytest.approx(r, abs=1e-12)
            assert auc(curve) <= auc_bound(r) + 1e-12


def test_tp_upper_bound():
    assert tp_upper_bound(0.2, 0.3) == 0.5
    assert tp_upper_bound(0.9, 0.3) == 1.0
    with pytest.raises(ValidationError):
        tp_upper_bound(1.2, 0.1)


class TestRocCurve:
    def test_must_start_and_end_at_corners(self):
        with pytest.raises(ValidationError):
            RocCurve([[0, 0], [0.5, 0.5]])
        with pytest.raises(ValidationError):
            RocCurve([[0.1, 0], [1, 1]])

    def test_must_be_monotone(self):
        with pytest.raises(ValidationError):
            RocCurve([[0, 0], [0.5, 0.6], [0.4, 0.8], [1, 1]])

    def test_value_at_jump(self):
        lo, hi = roc_envelope(0.3).value_at(0.0)
        assert (lo, hi) == (0.0, 0.3)
        lo, hi = roc_envelope(0.3).value_at(0.35)
        assert lo == hi == pytest.approx(0.65)

    def test_csv(self):
        assert roc_envelope(0).to_csv() == "fp,tp\n0,0\n1,1\n"


class TestEmpirical:
    def test_deterministic(self):
        p, q = tight_pair(0.3)
        a = empirical_roc(p, q, 1000, 5)
        b = empirical_roc(p, q, 1000, 5)
        np.testing.assert_array_equal(a.vertices, b.vertices)

    def test_golden_distances_seed_42(self):
        p, q = tight_pair(0.3)
        exact = np_roc(p, q)
        got = [roc_distance(empirical_roc(p, q, n, 42), exact) for n in (10**3, 10**4, 10**5)]
        assert got == pytest.approx([0.011, 0.0016, 0.00088], abs=1e-12)
        assert got[0] > got[1] > got[2]
        assert got[2] <= 0.02

    def test_distance_to_self(self):
        c = roc_envelope(0.4)
        assert roc_distance(c, c) == 0


class TestGanReport:
    def test_reference_chain(self):
        rep = gan_mia_report(1.0, 0.5)
        assert rep.r == pytest.approx(0.25, abs=1e-15)
        assert rep.auc_bound == pytest.approx(0.71875, abs=1e-15)
        assert not rep.clamped

    def test_clamped(self):
        rep = gan_mia_report(10.0, 10.0)
        assert rep.r == 1 and rep.clamped and rep.auc_bound == 1

    def test_to_dict(self):
        d = gan_mia_report(1.0, 0.5).to_dict()
        assert d["envelope"][0] == [0.0, 0.0]
        assert d["envelope"][-1] == [1.0, 1.0]
