"""Synthetic sparse convex objectives and the noisy function-query interface.

Every objective depends on its input only through a small support set of
coordinates.  Closed-form gradients, Hessians, and unconstrained optima are
exposed so benchmark regret can be computed exactly, along with certified
curvature bounds over an operating box for parameter schedules.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExhausted, InvalidConfig

FAMILIES = ("IdentityQuadratic", "PolyDecayQuadratic", "QuarticIdentity")


@dataclass(frozen=True)
class ObjectiveSpec:
    """Declarative description of a synthetic objective.

    Args:
        family: one of FAMILIES.
        d: ambient dimension.
        s: support size (number of active coordinates).
        support: optional explicit support indices; drawn at random if None.
        decay_rate: curvature decay exponent, used by PolyDecayQuadratic only.
        shift: optional coefficient vector on the support (linear term for the
            quadratics, minimizer location for the quartic); defaults to ones.
    """

    family: str
    d: int
    s: int
    support: tuple[int, ...] | None = None
    decay_rate: float = 1.0
    shift: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidConfig(f"unknown objective family {self.family!r}")
        if self.d < 1:
            raise InvalidConfig(f"dimension must be positive, got {self.d}")
        if not 1 <= self.s <= self.d:
            raise InvalidConfig(f"support size {self.s} out of range [1, {self.d}]")
        if self.decay_rate < 0:
            raise InvalidConfig(f"decay_rate must be nonnegative, got {self.decay_rate}")
        if self.support is not None:
            idx = tuple(int(i) for i in self.support)
            if len(idx) != self.s:
                raise InvalidConfig(f"support has {len(idx)} entries, expected s={self.s}")
            if len(set(idx)) != len(idx):
                raise InvalidConfig("support indices must be distinct")
            if min(idx) < 0 or max(idx) >= self.d:
                raise InvalidConfig(f"support indices must lie in [0, {self.d})")
        if self.shift is not None and len(self.shift) != self.s:
            raise InvalidConfig(f"shift has {len(self.shift)} entries, expected s={self.s}")


@dataclass(frozen=True)
class Optimum:
    """Unconstrained minimizer: value, location, and its l1 norm."""

    f_star: float
    x_star: np.ndarray
    l1_norm: float


@dataclass(frozen=True)
class CertifiedBounds:
    """Upper bounds on derivative norms, valid over a given l1 box.

    grad_l1 bounds sup ||grad f(x)||_1, hess_l1 bounds the entrywise l1 norm
    of the Hessian, spectral bounds its largest eigenvalue, and hess_lip is a
    Lipschitz modulus of the Hessian in l1 norm per unit sup-norm move.
    """

    grad_l1: float
    hess_l1: float
    spectral: float
    hess_lip: float

    @property
    def combined(self) -> float:
        """Single constant dominating both gradient and Hessian l1 norms."""
        return max(self.grad_l1, self.hess_l1)


class Objective:
    """Base class: a convex function of x restricted to a sparse support."""

    def __init__(self, spec: ObjectiveSpec, support: np.ndarray):
        self.spec = spec
        self.support = np.sort(np.asarray(support, dtype=np.intp))
        shift = spec.shift if spec.shift is not None else np.ones(spec.s)
        # coefficients aligned with the sorted support order
        self.b = np.asarray(shift, dtype=np.float64)

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def s(self) -> int:
        return self.spec.s

    def _active(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.d,):
            raise InvalidConfig(f"expected input of shape ({self.d},), got {x.shape}")
        return x[self.support]

    def eval_true(self, x) -> float:
        raise NotImplementedError

    def grad_true(self, x) -> np.ndarray:
        raise NotImplementedError

    def hessian_true(self, x) -> np.ndarray:
        raise NotImplementedError

    def optimum_value(self) -> Optimum:
        raise NotImplementedError

    def certified_bounds(self, radius: float) -> CertifiedBounds:
        """Derivative bounds valid on {||x||_1 <= radius}."""
        raise NotImplementedError


class QuadraticObjective(Objective):
    """f(x) = sum_i q_i * u_i^2 + sum_i b_i * u_i over u = x[support].

    The curvature vector q is all ones for IdentityQuadratic and decays as
    rank^(-decay_rate) for PolyDecayQuadratic, where rank is the 1-based
    position within the sorted support.
    """

    def __init__(self, spec: ObjectiveSpec, support: np.ndarray):
        super().__init__(spec, support)
        ranks = np.arange(1, spec.s + 1, dtype=np.float64)
        if spec.family == "PolyDecayQuadratic":
            self.q = ranks ** (-spec.decay_rate)
        else:
            self.q = np.ones(spec.s)

    def eval_true(self, x) -> float:
        u = self._active(x)
        return float(np.dot(self.q * u, u) + np.dot(self.b, u))

    def grad_true(self, x) -> np.ndarray:
        u = self._active(x)
        g = np.zeros(self.d)
        g[self.support] = 2.0 * self.q * u + self.b
        return g

    def hessian_true(self, x) -> np.ndarray:
        del x  # constant curvature
        h = np.zeros((self.d, self.d))
        h[self.support, self.support] = 2.0 * self.q
        return h

    def optimum_value(self) -> Optimum:
        x_star = np.zeros(self.d)
        u_star = -self.b / (2.0 * self.q)
        x_star[self.support] = u_star
        f_star = float(-np.sum(self.b**2 / (4.0 * self.q)))
        return Optimum(f_star, x_star, float(np.abs(u_star).sum()))

    def certified_bounds(self, radius: float) -> CertifiedBounds:
        # sum |2 q_i x_i + b_i| is maximized by putting all l1 mass on the
        # stiffest coordinate
        grad_l1 = 2.0 * float(self.q.max()) * radius + float(np.abs(self.b).sum())
        hess_l1 = 2.0 * float(self.q.sum())
        spectral = 2.0 * float(self.q.max())
        return CertifiedBounds(grad_l1, hess_l1, spectral, 0.0)


class QuarticObjective(Objective):
    """f(x) = ||u - b||^4 + ||u - b||^2 over u = x[support], minimized at b."""

    def eval_true(self, x) -> float:
        r = self._active(x) - self.b
        rr = float(np.dot(r, r))
        return rr * rr + rr

    def grad_true(self, x) -> np.ndarray:
        r = self._active(x) - self.b
        rr = float(np.dot(r, r))
        g = np.zeros(self.d)
        g[self.support] = (4.0 * rr + 2.0) * r
        return g

    def hessian_true(self, x) -> np.ndarray:
        r = self._active(x) - self.b
        rr = float(np.dot(r, r))
        block = (4.0 * rr + 2.0) * np.eye(self.s) + 8.0 * np.outer(r, r)
        h = np.zeros((self.d, self.d))
        h[np.ix_(self.support, self.support)] = block
        return h

    def optimum_value(self) -> Optimum:
        x_star = np.zeros(self.d)
        x_star[self.support] = self.b
        return Optimum(0.0, x_star, float(np.abs(self.b).sum()))

    def certified_bounds(self, radius: float) -> CertifiedBounds:
        # u = x_S - b satisfies ||u||_1 <= radius + ||b||_1 =: m on the box
        m = radius + float(np.abs(self.b).sum())
        grad_l1 = (4.0 * m * m + 2.0) * m
        hess_l1 = (4.0 * m * m + 2.0) * self.s + 8.0 * m * m
        spectral = 12.0 * m * m + 2.0
        hess_lip = 24.0 * m * self.s
        return CertifiedBounds(grad_l1, hess_l1, spectral, hess_lip)


def make_objective(spec: ObjectiveSpec, seed: int = 0) -> Objective:
    """Instantiate an objective, drawing a uniform random support if needed."""
    if spec.support is not None:
        support = np.asarray(spec.support, dtype=np.intp)
    else:
        rng = np.random.default_rng(seed)
        support = rng.choice(spec.d, size=spec.s, replace=False)
    if spec.family == "QuarticIdentity":
        return QuarticObjective(spec, support)
    return QuadraticObjective(spec, support)


class NoisyOracle:
    """Budgeted access to f(x) + Gaussian noise from a seeded stream.

    Each query draws one noise variate, so identical (objective, sigma, seed,
    query sequence) triples reproduce identical outputs bit for bit.  With
    sigma = 0 the returned value is exactly f(x).
    """

    def __init__(self, objective, sigma: float = 0.0, seed: int = 0, budget: int | None = None):
        if sigma < 0:
            raise InvalidConfig(f"sigma must be nonnegative, got {sigma}")
        if budget is not None and budget < 0:
            raise InvalidConfig(f"budget must be nonnegative, got {budget}")
        self.objective = objective
        self.sigma = float(sigma)
        self.budget = budget
        self.queries_used = 0
        self.listener = None  # optional per-query observer (regret tracking)
        self._rng = np.random.default_rng(seed)

    @property
    def remaining(self) -> int | None:
        if self.budget is None:
            return None
        return self.budget - self.queries_used

    def query(self, x) -> float:
        if self.budget is not None and self.queries_used >= self.budget:
            raise BudgetExhausted(f"budget of {self.budget} queries exhausted")
        y = float(self.objective.eval_true(x)) + self.sigma * self._rng.standard_normal()
        self.queries_used += 1
        if self.listener is not None:
            self.listener.note_query(x)
        return y
