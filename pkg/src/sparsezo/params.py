"""Tunable-parameter bundles and default schedules for the optimizers.

The default schedules follow the analysis shapes: probe radii balance noise
against curvature bias, penalties cover both, batch sizes grow with the
square root of the budget, and step sizes respect the smoothness gate
eta < 1/(2 * spectral curvature bound).  All certified constants are taken
on an operating box inflated by the probe radius, computed in two passes so
the box always contains every probe point.

Bound usage: the Hessian l1 bound (`curvature`) drives probe radii and
penalties, the spectral bound (`smoothness`) gates the mirror step size, and
the combined gradient/Hessian bound (`grad_bound`) sizes mirror-descent
batches.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidConfig
from .lasso import default_lambda
from .mirror import default_norm_exponent

DELTA_FLOOR = 1e-4  # keeps probe radii positive in the noiseless case


@dataclass(frozen=True)
class OptimizerParams:
    """Everything the optimizers can tune, in one bundle.

    budget is the total query allowance; n_probes the per-batch probe count;
    delta the probe radius; lam the l1 penalty; eta the step size (mirror
    descent) or threshold (selection, where eta = omega * lam); radius the
    feasible l1 ball; sparsity the target support size.
    """

    dim: int
    budget: int
    n_probes: int
    delta: float
    lam: float
    eta: float
    radius: float
    sparsity: int
    sigma: float
    curvature: float       # certified Hessian l1 bound
    smoothness: float      # certified spectral bound on the Hessian
    grad_bound: float      # certified max of gradient l1 and Hessian l1 bounds
    hess_lipschitz: float  # certified Hessian Lipschitz modulus
    a: float = 2.0
    omega: float = 2.0
    use_twice: bool = False
    lambda_scale: float = 1.0
    lam_fixed: bool = False  # when set, lambda_for ignores the radius

    def __post_init__(self):
        if self.budget < 1:
            raise InvalidConfig(f"budget must be positive, got {self.budget}")
        if self.delta <= 0:
            raise InvalidConfig(f"probe radius must be positive, got {self.delta}")
        if self.radius <= 0:
            raise InvalidConfig(f"ball radius must be positive, got {self.radius}")
        if self.sigma < 0:
            raise InvalidConfig(f"sigma must be nonnegative, got {self.sigma}")

    def lambda_for(self, delta: float) -> float:
        """Penalty for a batch of n_probes rows at probe radius delta."""
        if self.lam_fixed:
            return self.lam
        return default_lambda(self.sigma, self.n_probes, self.dim, delta,
                              self.curvature, self.lambda_scale)

    def with_overrides(self, **kwargs) -> OptimizerParams:
        return replace(self, **kwargs)


def _log_dim(d: int) -> float:
    return float(np.log(max(d, 2)))


def _two_pass_bounds(objective, radius: float, delta_of_bounds):
    """Certify bounds on a box guaranteed to contain all probe points.

    First pass certifies on the bare feasible ball to size a provisional
    probe radius; the second pass re-certifies on the ball inflated by that
    radius times the dimension.  The final radius never exceeds the
    provisional one, so every probe stays inside the certified box.
    """
    b0 = objective.certified_bounds(radius)
    delta0 = delta_of_bounds(b0)
    b1 = objective.certified_bounds(radius + delta0 * objective.d)
    delta1 = min(delta0, delta_of_bounds(b1))
    return b1, delta1


def selection_params(objective, budget: int, sigma: float, radius: float, *,
                     c_delta: float = 1.0, c_lambda: float = 1.0, omega: float = 2.0,
                     delta: float | None = None, lam: float | None = None,
                     eta: float | None = None) -> OptimizerParams:
    """Schedule for successive component selection.

    delta ~ (sigma^2 s log d / (curvature^2 budget))^(1/4) and
    lam ~ (sigma/delta) sqrt(s log d / budget) + delta * curvature, with the
    selection threshold eta = omega * lam.
    """
    d, s = objective.d, objective.s
    logd = _log_dim(d)

    def delta_of(b):
        if delta is not None:
            return delta
        if sigma == 0 or b.hess_l1 <= 0:
            return DELTA_FLOOR
        val = (sigma**2 * s * logd / (b.hess_l1**2 * budget)) ** 0.25
        return max(c_delta * val, DELTA_FLOOR)

    bounds, dlt = _two_pass_bounds(objective, radius, delta_of)
    if lam is None:
        lam = c_lambda * (sigma / dlt * np.sqrt(s * logd / budget) + dlt * bounds.hess_l1)
    if lam <= 0:
        raise InvalidConfig(f"selection penalty must be positive, got {lam}")
    if eta is None:
        eta = omega * lam
    return OptimizerParams(dim=d, budget=budget, n_probes=budget // (2 * s), delta=float(dlt),
                           lam=float(lam), eta=float(eta), radius=radius, sparsity=s,
                           sigma=sigma, curvature=bounds.hess_l1, smoothness=bounds.spectral,
                           grad_bound=bounds.combined, hess_lipschitz=bounds.hess_lip,
                           omega=omega, lambda_scale=c_lambda)


def _clamp_batch(n_raw: int, budget: int) -> int:
    return max(1, min(int(n_raw), budget // 4))


def _clamp_step(eta: float, spectral: float) -> float:
    if spectral <= 0:
        return eta
    return min(eta, 0.99 / (2.0 * spectral))


def md_params(objective, budget: int, sigma: float, radius: float, *,
              c_eta: float = 1.0, c_delta: float = 1.0, c_lambda: float = 1.0,
              n: int | None = None, delta: float | None = None,
              eta: float | None = None, lam: float | None = None,
              a: float | None = None, omega: float = 2.0) -> OptimizerParams:
    """Schedule for plain mirror descent with de-biased estimates.

    n ~ (1 + grad_bound) sqrt(s * budget) clamped to budget/4,
    delta ~ sqrt(s log d / n), eta ~ radius * sqrt(n log d / budget) clamped
    below 1/(2 * spectral bound).  The penalty is sized for the 2n-row batch
    each epoch actually regresses on.
    """
    d, s = objective.d, objective.s
    logd = _log_dim(d)

    def batch_of(b):
        if n is not None:
            return _clamp_batch(n, budget)
        return _clamp_batch(int((1.0 + b.combined) * np.sqrt(s * budget)), budget)

    def delta_of(b):
        if delta is not None:
            return delta
        return max(c_delta * np.sqrt(s * logd / batch_of(b)), DELTA_FLOOR)

    bounds, dlt = _two_pass_bounds(objective, radius, delta_of)
    n_final = batch_of(bounds)
    if lam is None:
        lam = default_lambda(sigma, 2 * n_final, d, dlt, bounds.hess_l1, c_lambda)
    if eta is None:
        eta = _clamp_step(c_eta * radius * np.sqrt(n_final * logd / budget), bounds.spectral)
    return OptimizerParams(dim=d, budget=budget, n_probes=n_final, delta=float(dlt),
                           lam=float(lam), eta=float(eta), radius=radius, sparsity=s,
                           sigma=sigma, curvature=bounds.hess_l1, smoothness=bounds.spectral,
                           grad_bound=bounds.combined, hess_lipschitz=bounds.hess_lip,
                           a=float(a if a is not None else default_norm_exponent(d)),
                           omega=omega, lambda_scale=c_lambda)


def md_twice_params(objective, budget: int, sigma: float, radius: float, *,
                    c_eta: float = 1.0, c_delta: float = 1.0, c_lambda: float = 1.0,
                    n: int | None = None, delta: float | None = None,
                    eta: float | None = None, lam: float | None = None,
                    a: float | None = None, omega: float = 2.0) -> OptimizerParams:
    """Schedule for mirror descent with twice de-biased estimates.

    n ~ (1 + hess_lipschitz) s^(2/3) sqrt(budget) clamped to budget/4,
    delta ~ (s log d / n)^(1/3), eta ~ radius * n^(2/3) sqrt(log d / budget)
    clamped below 1/(2 * spectral bound).  Each epoch runs two n-row batches,
    so the penalty callback sizes itself for n rows.
    """
    d, s = objective.d, objective.s
    logd = _log_dim(d)

    def batch_of(b):
        if n is not None:
            return _clamp_batch(n, budget)
        return _clamp_batch(int((1.0 + b.hess_lip) * s ** (2.0 / 3.0) * np.sqrt(budget)), budget)

    def delta_of(b):
        if delta is not None:
            return delta
        return max(c_delta * (s * logd / batch_of(b)) ** (1.0 / 3.0), DELTA_FLOOR)

    bounds, dlt = _two_pass_bounds(objective, radius, delta_of)
    n_final = batch_of(bounds)
    if eta is None:
        eta = _clamp_step(c_eta * radius * n_final ** (2.0 / 3.0) * np.sqrt(logd / budget),
                          bounds.spectral)
    params = OptimizerParams(dim=d, budget=budget, n_probes=n_final, delta=float(dlt),
                             lam=0.0, eta=float(eta), radius=radius, sparsity=s,
                             sigma=sigma, curvature=bounds.hess_l1, smoothness=bounds.spectral,
                             grad_bound=bounds.combined, hess_lipschitz=bounds.hess_lip,
                             a=float(a if a is not None else default_norm_exponent(d)),
                             omega=omega, use_twice=True, lambda_scale=c_lambda)
    if lam is not None:
        return params.with_overrides(lam=float(lam), lam_fixed=True)
    return params.with_overrides(lam=params.lambda_for(dlt))
