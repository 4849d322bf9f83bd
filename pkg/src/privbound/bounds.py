"""Closed-form privacy bounds for sample-releasing GAN mechanisms.

Every function is a pure scalar formula.  Quantities that the theory allows
to leave [0, 1] come back as :class:`BoundValue` so callers see both the raw
number and whether it was clamped or vacuous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from privbound.errors import ValidationError


@dataclass(frozen=True)
class BoundValue:
    value: float
    raw: float
    vacuous: bool

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class BoundInputs:
    """Scalars feeding the achievability/converse bounds.

    ``eps_f`` overrides the generalization budget; when it is ``None`` the
    budget is assembled from ``k, xi, p, L, delta_sup, tau_opt, approx_err``.
    """

    m: int = 1
    n: int = 1
    k: int = 1
    xi: float = 0.0
    delta_sup: float = 1.0
    delta_prime: float = 0.0
    gamma: float = 1.0
    gamma_mu: float = 0.0
    p: float = 0.0
    L: float = 0.0
    tau_opt: float = 0.0
    approx_err: float = 0.0
    eps_f: float | None = None

    def __post_init__(self):
        for name in ("m", "n", "k"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be >= 1")
        if not 0.0 <= self.xi <= 1.0:
            raise ValidationError(f"xi must lie in [0, 1], got {self.xi}")
        for name in ("delta_sup", "delta_prime", "gamma", "gamma_mu", "p", "L",
                     "tau_opt", "approx_err"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0")
        if self.eps_f is not None and self.eps_f < 0:
            raise ValidationError("eps_f must be >= 0")
        if self.delta_prime > 2 * self.delta_sup * (1 + 1e-12):
            raise ValidationError("delta_prime cannot exceed 2 * delta_sup")

    def eps_f_value(self) -> float:
        if self.eps_f is not None:
            return self.eps_f
        return epsilon_f(self.k, self.approx_err, self.tau_opt,
                         c_xi(self.p, self.L, self.delta_sup, self.xi))


def _eps_one_minus_exp(epsilon: float) -> float:
    """epsilon * (1 - e^-epsilon) without cancellation for small epsilon."""
    return epsilon * -math.expm1(-epsilon)


def _check_positive_eps(epsilon: float) -> None:
    if not epsilon > 0:
        raise ValidationError(
            f"epsilon must be > 0 (the bound diverges as epsilon -> 0), got {epsilon}")


def c_xi(p: float, L: float, delta_sup: float, xi: float) -> float:
    """Sampling constant 16 sqrt(2 pi) p L + 2 Delta sqrt(2 log(1/xi)).

    ``xi = 1`` is accepted as the limit where the log term vanishes.
    """
    if not 0.0 < xi <= 1.0:
        raise ValidationError(f"xi must lie in (0, 1], got {xi}")
    return 16.0 * math.sqrt(2.0 * math.pi) * p * L + 2.0 * delta_sup * math.sqrt(2.0 * -math.log(xi))


def epsilon_f(k: int, approx_err: float, tau_opt: float, c_xi_value: float) -> float:
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    return 2.0 * (approx_err + tau_opt + c_xi_value / math.sqrt(k))


def dp_delta_achievable(epsilon: float, inputs: BoundInputs) -> BoundValue:
    """Smallest delta certified for an (epsilon, delta) guarantee of the n-sample release."""
    _check_positive_eps(epsilon)
    ipm_budget = 2.0 * inputs.delta_sup / inputs.m + inputs.eps_f_value()
    raw = inputs.n * inputs.gamma / _eps_one_minus_exp(epsilon) * ipm_budget + 2.0 * inputs.xi
    return BoundValue(min(raw, 1.0), raw, raw > 1.0)


def dp_delta_converse(epsilon: float, inputs: BoundInputs) -> BoundValue:
    """delta below which the one-sample release cannot be (epsilon, delta)-DP.

    Non-positive values carry no information and are flagged vacuous.
    """
    if epsilon < 0:
        raise ValidationError(f"epsilon must be >= 0, got {epsilon}")
    if inputs.delta_sup <= 0:
        raise ValidationError("delta_sup must be > 0 for the converse bound")
    gap = inputs.delta_prime / (2.0 * inputs.m) - inputs.eps_f_value()
    raw = (math.exp(epsilon) + 1.0) / (2.0 * inputs.delta_sup) * gap - math.expm1(epsilon)
    return BoundValue(raw, raw, raw <= 0.0)


def kl_to_pdp_delta(s: float, epsilon: float) -> float:
    """delta of the probabilistic-DP guarantee implied by a symmetric-KL bound ``s``."""
    _check_positive_eps(epsilon)
    if s < 0:
        raise ValidationError(f"s must be >= 0, got {s}")
    if math.isinf(s):
        return 1.0
    return min(1.0, s / _eps_one_minus_exp(epsilon))


def dp_to_tv_bound(epsilon: float, delta: float) -> float:
    if epsilon < 0:
        raise ValidationError(f"epsilon must be >= 0, got {epsilon}")
    if not 0.0 <= delta <= 1.0:
        raise ValidationError(f"delta must lie in [0, 1], got {delta}")
    return (math.expm1(epsilon) + 2.0 * delta) / (math.exp(epsilon) + 1.0)


def epsilon_tv(gamma_mu: float, eps_f_value: float) -> BoundValue:
    """TV radius sqrt(Gamma_T * eps_F) / (2 sqrt 2), clamped to 1."""
    if gamma_mu < 0 or eps_f_value < 0:
        raise ValidationError("gamma_mu and eps_f must be >= 0")
    raw = math.sqrt(gamma_mu * eps_f_value / 8.0)
    return BoundValue(min(raw, 1.0), raw, raw > 1.0)


def auc_bound(r: float) -> float:
    if not 0.0 <= r <= 1.0:
        raise ValidationError(f"r must lie in [0, 1], got {r}")
    return -0.5 * r * r + r + 0.5
