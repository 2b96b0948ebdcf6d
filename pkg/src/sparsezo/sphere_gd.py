"""Classical one-point zeroth-order gradient descent baseline.

Each step draws a uniform direction on the unit sphere of the active
coordinates, scales a single noisy function value into a gradient surrogate,
and takes a projected gradient step inside a slightly shrunken l1 ball so
probe points stay effectively feasible.  Step size and probe radius decay
polynomially with the step counter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfig
from .mirror import project_l1
from .trace import RegretTracker


@dataclass(frozen=True)
class SphereGDParams:
    """Schedule constants and geometry for the one-point baseline.

    Step size decays as step_coeff * t^(-3/4) and probe radius as
    probe_coeff * t^(-1/4).  Iterates live in the l1 ball of radius
    (1 - shrink) * radius over the active coordinates; inactive coordinates
    pass through untouched.  active = None means all coordinates.
    """

    radius: float
    step_coeff: float
    probe_coeff: float
    shrink: float = 0.1
    active: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.radius <= 0:
            raise InvalidConfig(f"ball radius must be positive, got {self.radius}")
        if self.step_coeff <= 0 or self.probe_coeff <= 0:
            raise InvalidConfig("schedule coefficients must be positive")
        if not 0 <= self.shrink < 1:
            raise InvalidConfig(f"shrink factor must be in [0, 1), got {self.shrink}")


def default_gd_params(radius: float, active=None) -> SphereGDParams:
    """Standard schedule constants: step_coeff = radius, probe_coeff = 0.25*min(1, radius)."""
    return SphereGDParams(radius=radius, step_coeff=radius,
                          probe_coeff=0.25 * min(1.0, radius),
                          active=tuple(int(i) for i in active) if active is not None else None)


def sample_sphere(k: int, rng) -> np.ndarray:
    """Uniform draw from the unit sphere in R^k (normalized Gaussian)."""
    if k < 1:
        raise InvalidConfig(f"sphere dimension must be positive, got {k}")
    while True:
        v = rng.standard_normal(k)
        norm = float(np.linalg.norm(v))
        if norm > 0:
            return v / norm


def sphere_gd_step(oracle, x, params: SphereGDParams, rng,
                   step_size: float | None = None,
                   probe_radius: float | None = None) -> np.ndarray:
    """One query, one projected step on the active coordinates.

    The gradient surrogate is (k / probe_radius) * y * u for a single noisy
    value y at x + probe_radius * u, with u uniform on the k-dimensional
    sphere of the active coordinates.
    """
    x = np.asarray(x, dtype=np.float64)
    eta = params.step_coeff if step_size is None else step_size
    delta = params.probe_coeff if probe_radius is None else probe_radius
    if delta <= 0:
        raise InvalidConfig(f"probe radius must be positive, got {delta}")
    active = np.arange(x.shape[0]) if params.active is None else np.asarray(params.active, dtype=np.intp)
    k = active.shape[0]
    u = sample_sphere(k, rng)
    probe = x.copy()
    probe[active] += delta * u
    y = oracle.query(probe)
    g_hat = (k / delta) * y * u
    x_new = x.copy()
    x_new[active] = project_l1(x[active] - eta * g_hat, (1.0 - params.shrink) * params.radius)
    return x_new


def run_sphere_gd(oracle, budget: int, x_start, params: SphereGDParams, rng, tracker=None):
    """Run the decaying-schedule baseline for exactly `budget` queries.

    The start point is first projected onto the shrunken feasible ball of the
    active coordinates.  Returns (x_out, trace); x_out is the final iterate,
    re-projected onto the unshrunken ball.
    """
    x = np.asarray(x_start, dtype=np.float64).copy()
    if budget < 0:
        raise InvalidConfig(f"budget must be nonnegative, got {budget}")
    active = np.arange(x.shape[0]) if params.active is None else np.asarray(params.active, dtype=np.intp)
    x[active] = project_l1(x[active], (1.0 - params.shrink) * params.radius)

    own = tracker is None
    if own:
        tracker = RegretTracker(oracle.objective)
    tracker.attach(oracle)

    for t in range(1, budget + 1):
        tracker.note_visit(x)
        x = sphere_gd_step(oracle, x, params, rng,
                           step_size=params.step_coeff * t**-0.75,
                           probe_radius=params.probe_coeff * t**-0.25)
        tracker.note_step(x)

    x_out = x.copy()
    x_out[active] = project_l1(x_out[active], params.radius)
    if own:
        tracker.finalize(x_out)
    return x_out, tracker.trace
