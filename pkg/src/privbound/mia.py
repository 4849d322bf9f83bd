"""Membership-inference ROC analysis for a single test sample.

The attacker tests H1: x ~ p (training/generated law) against H0: x ~ q
(population law).  FP is the q-mass flagged, TP the p-mass flagged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from privbound import bounds
from privbound.dist import DiscreteDistribution, check_aligned, sample_indices
from privbound.divergence import tv
from privbound.errors import ValidationError

_COORD_TOL = 1e-12
_RATIO_TIE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class RocCurve:
    """Piecewise-linear ROC through ``vertices`` (an ``(k, 2)`` array of (fp, tp))."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float).reshape(-1, 2)
        if v.shape[0] < 2:
            raise ValidationError("an ROC curve needs at least two vertices")
        if np.any(v < -_COORD_TOL) or np.any(v > 1 + _COORD_TOL):
            raise ValidationError("ROC coordinates must lie in [0, 1]")
        if np.any(np.abs(v[0]) > _COORD_TOL) or np.any(np.abs(v[-1] - 1) > _COORD_TOL):
            raise ValidationError("ROC curve must run from (0, 0) to (1, 1)")
        if np.any(np.diff(v, axis=0) < -_COORD_TOL):
            raise ValidationError("ROC vertices must be non-decreasing in fp and tp")
        v = np.clip(v, 0.0, 1.0)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def fp(self) -> np.ndarray:
        return self.vertices[:, 0]

    @property
    def tp(self) -> np.ndarray:
        return self.vertices[:, 1]

    def __len__(self):
        return self.vertices.shape[0]

    def is_concave(self, tol: float = 1e-12) -> bool:
        d = np.diff(self.vertices, axis=0)
        # slopes non-increasing <=> cross products of consecutive segments <= 0
        cross = d[:-1, 0] * d[1:, 1] - d[:-1, 1] * d[1:, 0]
        return bool(np.all(cross <= tol))

    def value_at(self, x: float) -> tuple[float, float]:
        """(lower, upper) TP at FP = ``x``; they differ only on vertical segments."""
        fp, tp = self.fp, self.tp
        i = int(np.searchsorted(fp, x, side="right")) - 1
        j = int(np.searchsorted(fp, x, side="left"))
        return _interp(fp, tp, j - 1, j, x), _interp(fp, tp, i, i + 1, x)

    def to_csv(self) -> str:
        from privbound.report import fmt
        rows = ["fp,tp"] + [f"{fmt(a)},{fmt(b)}" for a, b in self.vertices]
        return "\n".join(rows) + "\n"


def _interp(fp, tp, lo, hi, x):
    n = len(fp)
    if 0 <= lo < n and fp[lo] == x:
        return float(tp[lo])
    if 0 <= hi < n and fp[hi] == x:
        return float(tp[hi])
    lo = max(lo, 0)
    hi = min(hi, n - 1)
    if fp[hi] == fp[lo]:
        return float(tp[hi])
    t = (x - fp[lo]) / (fp[hi] - fp[lo])
    return float(tp[lo] + t * (tp[hi] - tp[lo]))


def _dedupe(points):
    out = [points[0]]
    for pt in points[1:]:
        if pt != out[-1]:
            out.append(pt)
    return out


def roc_envelope(r: float) -> RocCurve:
    """Outer bound min(fp + r, 1) on every ROC when TV(p, q) = r.

    The jump to TP = r at FP = 0 is kept as the vertical segment (0,0)-(0,r);
    it is attainable by randomized tests.
    """
    if not 0.0 <= r <= 1.0:
        raise ValidationError(f"r must lie in [0, 1], got {r}")
    return RocCurve(_dedupe([(0.0, 0.0), (0.0, r), (1.0 - r, 1.0), (1.0, 1.0)]))


def _roc_from_scores(scores, pos_mass, neg_mass) -> RocCurve:
    pos_mass = np.asarray(pos_mass, dtype=float)
    neg_mass = np.asarray(neg_mass, dtype=float)
    live = (pos_mass > 0) | (neg_mass > 0)
    scores, pos_mass, neg_mass = scores[live], pos_mass[live], neg_mass[live]
    order = np.argsort(-scores, kind="stable")
    scores, pos_mass, neg_mass = scores[order], pos_mass[order], neg_mass[order]

    fp, tp = [0.0], [0.0]
    cum_fp = cum_tp = 0.0
    i = 0
    while i < len(scores):
        j = i + 1
        while j < len(scores) and _same_ratio(scores[i], scores[j]):
            j += 1
        cum_fp += float(neg_mass[i:j].sum())
        cum_tp += float(pos_mass[i:j].sum())
        fp.append(cum_fp)
        tp.append(cum_tp)
        i = j
    v = np.column_stack([fp, tp])
    # absorb the ulp-level drift of cumulative sums at the end point
    v[-1] = (1.0, 1.0)
    return RocCurve(v)


def _same_ratio(a: float, b: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= _RATIO_TIE_RTOL * max(abs(a), abs(b))


def likelihood_ratio(p: DiscreteDistribution, q: DiscreteDistribution) -> np.ndarray:
    """p/q per outcome, +inf where q = 0 < p, and 0 where both vanish (those are dropped)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(q.probs > 0, p.probs / np.where(q.probs > 0, q.probs, 1.0), np.inf)
    ratio[(p.probs == 0) & (q.probs == 0)] = 0.0
    return ratio


def np_roc(p: DiscreteDistribution, q: DiscreteDistribution) -> RocCurve:
    """Exact optimal ROC for testing p (positive) against q (null).

    Outcomes are flagged in order of decreasing likelihood ratio; equal
    ratios share one segment, which gives the concave randomized-test hull.
    """
    check_aligned(p, q)
    return _roc_from_scores(likelihood_ratio(p, q), p.probs, q.probs)


def tight_pair(r: float) -> tuple[DiscreteDistribution, DiscreteDistribution]:
    """Three-point pair at TV distance ``r`` whose optimal ROC is the envelope."""
    if not 0.0 <= r <= 1.0:
        raise ValidationError(f"r must lie in [0, 1], got {r}")
    support = ("a", "b", "c")
    return (DiscreteDistribution(support, [r, 1.0 - r, 0.0]),
            DiscreteDistribution(support, [0.0, 1.0 - r, r]))


def auc(curve: RocCurve) -> float:
    fp, tp = curve.fp, curve.tp
    return float(np.sum(np.diff(fp) * (tp[1:] + tp[:-1]) / 2.0))


def tp_upper_bound(fp: float, r: float) -> float:
    if not (0.0 <= fp <= 1.0 and 0.0 <= r <= 1.0):
        raise ValidationError("fp and r must lie in [0, 1]")
    return min(fp + r, 1.0)


def empirical_roc(p: DiscreteDistribution, q: DiscreteDistribution,
                  samples_per_side: int, seed: int) -> RocCurve:
    """ROC of the exact likelihood-ratio attack on finite samples.

    Positives are drawn from ``p`` on sub-seed (seed, 0), negatives from
    ``q`` on sub-seed (seed, 1).
    """
    check_aligned(p, q)
    if samples_per_side < 1:
        raise ValidationError("samples_per_side must be >= 1")
    s = len(p)
    pos = np.bincount(sample_indices(p.probs, samples_per_side, seed, 0), minlength=s)
    neg = np.bincount(sample_indices(q.probs, samples_per_side, seed, 1), minlength=s)
    return _roc_from_scores(likelihood_ratio(p, q), pos / samples_per_side,
                            neg / samples_per_side)


def roc_distance(a: RocCurve, b: RocCurve) -> float:
    """Sup-norm gap between two ROC curves, checking both sides of every jump."""
    xs = np.union1d(a.fp, b.fp)
    gap = 0.0
    for x in xs:
        lo_a, hi_a = a.value_at(x)
        lo_b, hi_b = b.value_at(x)
        gap = max(gap, abs(lo_a - lo_b), abs(hi_a - hi_b))
    return gap


@dataclass(frozen=True, eq=False)
class MiaReport:
    r: float
    auc_bound: float
    envelope: RocCurve
    clamped: bool = False

    def to_dict(self) -> dict:
        return {"r": self.r, "auc_bound": self.auc_bound,
                "envelope": [[float(a), float(b)] for a, b in self.envelope.vertices]}


def gan_mia_report(gamma_mu: float, eps_f_value: float) -> MiaReport:
    """ROC envelope and AUC ceiling for a GAN with the given Gamma_T and eps_F."""
    r = bounds.epsilon_tv(gamma_mu, eps_f_value)
    return MiaReport(r.value, bounds.auc_bound(r.value), roc_envelope(r.value), r.vacuous)


def check_envelope(p: DiscreteDistribution, q: DiscreteDistribution,
                   tol: float = 1e-12) -> tuple[bool, float]:
    """Whether every optimal-ROC vertex sits under the TV envelope; returns (ok, r)."""
    r = tv(p, q)
    curve = np_roc(p, q)
    ok = all(tp <= min(fp + r, 1.0) + tol and tp - fp <= r + tol
             for fp, tp in curve.vertices)
    return ok, r
