"""Mirror descent over the l1 ball with a nearly-l1 norm potential.

The potential psi_a(x) = ||x||_a^2 / (2(a-1)) with a slightly above 1 is
strongly convex with respect to ||.||_a, which keeps dimension dependence
logarithmic.  Updates are computed exactly in the dual: the gradient map of
psi_a is inverted by the gradient map of the conjugate exponent, and the l1
constraint turns into a soft-threshold in the dual with a scalar multiplier
found by bisection.
"""

from __future__ import annotations

import numpy as np

from .errors import InnerSolveFailed, InvalidConfig, NonFinite
from .lasso import estimate_gradient, soft_threshold, twice_debias_estimate
from .trace import RegretTracker


def _norm_ratios(x, a):
    """Max-scaled helpers: (max|x|, |x|/max, ||x||_a / max). Safe for large a."""
    ax = np.abs(x)
    m = float(ax.max()) if ax.size else 0.0
    if m == 0.0:
        return 0.0, ax, 0.0
    r = ax / m
    return m, r, float((r**a).sum() ** (1.0 / a))


def psi_value(x, a: float) -> float:
    """||x||_a^2 / (2(a-1))."""
    x = np.asarray(x, dtype=np.float64)
    m, _, nr = _norm_ratios(x, a)
    return (m * nr) ** 2 / (2.0 * (a - 1.0))


def psi_grad(x, a: float) -> np.ndarray:
    """Gradient of psi_value; maps 0 to 0 and scales safely near underflow."""
    x = np.asarray(x, dtype=np.float64)
    m, r, nr = _norm_ratios(x, a)
    if m == 0.0:
        return np.zeros_like(x)
    # (1/(a-1)) ||x||^(2-a) |x_i|^(a-1), with all powers taken on ratios <= 1
    return (m / (a - 1.0)) * nr ** (2.0 - a) * r ** (a - 1.0) * np.sign(x)


def bregman_div(x, anchor, a: float) -> float:
    """psi(x) - psi(anchor) - <grad psi(anchor), x - anchor>."""
    x = np.asarray(x, dtype=np.float64)
    anchor = np.asarray(anchor, dtype=np.float64)
    return psi_value(x, a) - psi_value(anchor, a) - float(psi_grad(anchor, a) @ (x - anchor))


def project_l1(v, radius: float) -> np.ndarray:
    """Euclidean projection onto {x : ||x||_1 <= radius} by sort and shift."""
    if radius <= 0:
        raise InvalidConfig(f"ball radius must be positive, got {radius}")
    v = np.asarray(v, dtype=np.float64)
    av = np.abs(v)
    if av.sum() <= radius:
        return v.copy()
    u = np.sort(av)[::-1]
    css = np.cumsum(u)
    ks = np.arange(1, u.shape[0] + 1)
    rho = int(np.nonzero(u * ks > css - radius)[0][-1])
    shift = (css[rho] - radius) / (rho + 1.0)
    return np.sign(v) * np.maximum(av - shift, 0.0)


def md_optimality_gap(x_next, x_t, g, eta: float, radius: float, a: float) -> float:
    """Variational-inequality residual of a candidate update; 0 at the optimum.

    Computes max over the ball of <-v, x - x_next> for v = eta*g +
    grad psi(x_next) - grad psi(x_t), which is nonnegative and vanishes
    exactly when x_next minimizes eta*<g, x> + bregman_div(x, x_t).
    """
    v = eta * np.asarray(g, dtype=np.float64) + psi_grad(x_next, a) - psi_grad(x_t, a)
    return float(v @ x_next + radius * np.abs(v).max())


def md_update(x_t, g, *, eta: float, radius: float, a: float,
              tol: float = 1e-4, max_bisect: int = 200) -> np.ndarray:
    """Constrained mirror step: argmin over the l1 ball of eta*<g, x> + D(x, x_t).

    Solved exactly in the dual: the unconstrained minimizer is the inverse
    gradient map applied to grad psi(x_t) - eta*g, and the active constraint
    adds a soft-threshold whose level is bisected until ||x||_1 = radius.
    Raises InnerSolveFailed if the optimality residual exceeds tol.
    """
    x_t = np.asarray(x_t, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if not 1.0 < a <= 2.0:
        raise InvalidConfig(f"norm exponent must be in (1, 2], got {a}")
    if eta < 0:
        raise InvalidConfig(f"step size must be nonnegative, got {eta}")
    if np.abs(x_t).sum() > radius + 1e-9:
        raise InvalidConfig("current iterate lies outside the feasible ball")
    if not np.all(np.isfinite(g)):
        raise NonFinite("gradient estimate contains non-finite values")
    if eta == 0.0 or not np.any(g):
        return x_t.copy()

    conj = a / (a - 1.0)
    theta = psi_grad(x_t, a) - eta * g
    x = psi_grad(theta, conj)  # gradient map of the conjugate inverts psi_grad
    if np.abs(x).sum() > radius:
        lo, hi = 0.0, float(np.abs(theta).max())
        for _ in range(max_bisect):
            if hi - lo <= 1e-15 * max(1.0, hi):
                break
            mid = 0.5 * (lo + hi)
            if np.abs(psi_grad(soft_threshold(theta, mid), conj)).sum() > radius:
                lo = mid
            else:
                hi = mid
        x = psi_grad(soft_threshold(theta, hi), conj)  # hi side stays feasible

    gap = md_optimality_gap(x, x_t, g, eta, radius, a)
    if gap > tol:
        raise InnerSolveFailed(f"update residual {gap:.3e} exceeds {tol:.1e}")
    return x


def default_norm_exponent(d: int) -> float:
    """Potential exponent 2 log d / (2 log d - 1), clamped into (1, 2]."""
    ln = np.log(d) if d > 1 else 0.0
    if 2.0 * ln <= 1.0:
        return 2.0
    return float(min(2.0, max(1.0 + 1e-3, 2.0 * ln / (2.0 * ln - 1.0))))


def run_md(oracle, params, rng, tracker=None, gradient_override=None):
    """Epoch-based mirror descent fed by de-biased lasso gradient estimates.

    Runs floor(budget / 2n) epochs from the origin; each epoch spends 2n
    queries, either as a single de-biased batch or, with params.use_twice,
    as two n-probe batches at radii delta/2 and delta whose combination
    cancels the leading curvature bias.  Returns (x_out, trace) where x_out
    is the final iterate for the plain variant and the average of visited
    iterates for the twice variant.

    gradient_override is a test hook: a callable x -> g replacing estimation
    (no queries are spent).
    """
    d = oracle.objective.d
    t_total = params.budget
    n = params.n_probes
    if n < 1:
        raise InvalidConfig(f"batch size must be positive, got {n}")
    if gradient_override is None and t_total < 4 * n:
        raise InvalidConfig(f"budget {t_total} is below the 4n minimum for n={n}")
    if params.smoothness > 0 and params.eta >= 1.0 / (2.0 * params.smoothness):
        raise InvalidConfig(
            f"step size {params.eta} violates eta < 1/(2*smoothness) "
            f"with smoothness {params.smoothness}")
    opt = getattr(oracle.objective, "optimum_value", None)
    if opt is not None and params.radius < opt().l1_norm:
        raise InvalidConfig("feasible radius excludes the optimum")

    own = tracker is None
    if own:
        tracker = RegretTracker(oracle.objective)
    tracker.attach(oracle)

    epochs = t_total // (2 * n)
    x = np.zeros(d)
    visit_sum = np.zeros(d)
    for t in range(epochs):
        tracker.note_visit(x)
        visit_sum += x
        if gradient_override is not None:
            g = np.asarray(gradient_override(x), dtype=np.float64)
        elif params.use_twice:
            est = twice_debias_estimate(oracle, x, n, params.delta, params.lambda_for, rng)
            g = est.g_tw
        else:
            est = estimate_gradient(oracle, x, 2 * n, params.delta, params.lam, rng)
            g = est.g_tilde
        x = md_update(x, g, eta=params.eta, radius=params.radius, a=params.a)
        report = visit_sum / (t + 1) if params.use_twice else x
        tracker.note_step(x, report=report)

    x_out = visit_sum / max(epochs, 1) if params.use_twice else x
    if own:
        tracker.finalize(x_out)
    return x_out, tracker.trace
