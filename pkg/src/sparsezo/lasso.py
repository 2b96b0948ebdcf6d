"""Gradient estimation from noisy zeroth-order queries via the lasso.

A batch of sign-vector probes around a center point turns gradient recovery
into a sparse linear regression: each probe at x + delta*z with z in {-1,+1}^d
yields a normalized response y/delta whose slope in z is approximately the
gradient, with the function value entering as a penalized intercept.  The
l1-penalized fit is solved by cyclic coordinate descent, then de-biased with
a correlation correction; combining de-biased fits at two probe radii cancels
the leading curvature error as well.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfig, NonFinite


@dataclass(frozen=True)
class ProbeBatch:
    """Probes around a center: signs in {-1,+1}^(n x d), responses y_i/delta."""

    center: np.ndarray
    delta: float
    signs: np.ndarray
    responses: np.ndarray

    @property
    def n(self) -> int:
        return self.signs.shape[0]

    @property
    def d(self) -> int:
        return self.signs.shape[1]


@dataclass(frozen=True)
class LassoFit:
    """Solution of the penalized probe regression.

    final_gap is the largest coordinate change in the last sweep; converged
    reports whether it fell below tolerance within the sweep limit.
    objective_path holds the per-sweep objective when tracking was requested.
    """

    g_hat: np.ndarray
    mu_hat: float
    lam: float
    sweeps: int
    converged: bool
    final_gap: float
    objective_path: tuple[float, ...] | None = None


@dataclass(frozen=True)
class GradientEstimate:
    """A gradient estimate and the fit it came from.

    g_tilde is the de-biased estimate; g_tw, when present, is the two-radius
    combination 2*g_tilde(delta/2) - g_tilde(delta).
    """

    fit: LassoFit
    g_tilde: np.ndarray
    g_tw: np.ndarray | None
    delta: float
    queries_spent: int


def sample_rademacher(n: int, d: int, rng) -> np.ndarray:
    """Draw an (n, d) matrix of independent uniform signs as float64."""
    return (rng.integers(0, 2, size=(n, d)) * 2 - 1).astype(np.float64)


def build_probe_batch(oracle, x_t, n: int, delta: float, rng, signs=None) -> ProbeBatch:
    """Query the oracle at x_t + delta*z for n sign vectors z.

    Consumes exactly n oracle queries.  `signs` overrides the random design
    with an explicit (n, d) sign matrix, e.g. a full enumeration in tests.
    """
    x_t = np.asarray(x_t, dtype=np.float64)
    if delta <= 0:
        raise InvalidConfig(f"probe radius must be positive, got {delta}")
    if n < 1:
        raise InvalidConfig(f"batch size must be positive, got {n}")
    if signs is None:
        signs = sample_rademacher(n, x_t.shape[0], rng)
    else:
        signs = np.asarray(signs, dtype=np.float64)
        if signs.shape != (n, x_t.shape[0]):
            raise InvalidConfig(f"signs shape {signs.shape} does not match (n, d)")
    ys = np.empty(n)
    for i in range(n):
        ys[i] = oracle.query(x_t + delta * signs[i])
    return ProbeBatch(center=x_t.copy(), delta=float(delta), signs=signs, responses=ys / delta)


def soft_threshold(rho, t):
    """Shrink toward zero: sign(rho) * max(|rho| - t, 0)."""
    return np.sign(rho) * np.maximum(np.abs(rho) - t, 0.0)


def _lasso_objective(signs, responses, g, mu, lam) -> float:
    r = responses - signs @ g - mu
    return float(np.dot(r, r) / signs.shape[0] + lam * (np.abs(g).sum() + abs(mu)))


def lasso_objective(batch: ProbeBatch, g, mu, lam) -> float:
    """Mean squared residual plus lam times the l1 norm of (g, mu)."""
    return _lasso_objective(batch.signs, batch.responses, np.asarray(g, dtype=np.float64), float(mu), lam)


def solve_lasso(batch: ProbeBatch, lam: float, tol: float = 1e-8,
                max_sweeps: int | None = None, track_objective: bool = False) -> LassoFit:
    """Cyclic coordinate descent on the penalized probe regression.

    Minimizes (1/n)||y - Z g - mu 1||^2 + lam (||g||_1 + |mu|).  Every column
    of the design, including the all-ones intercept column, has squared norm
    n, so each coordinate minimizer is a soft-threshold at lam/2 of the
    residual correlation.  lam = 0 requires n > d and falls back to least
    squares.

    Raises NonFinite if the responses contain NaN or Inf.
    """
    z = batch.signs
    y = batch.responses
    n, d = z.shape
    if not np.all(np.isfinite(y)):
        raise NonFinite("probe responses contain non-finite values")
    if lam < 0:
        raise InvalidConfig(f"penalty must be nonnegative, got {lam}")
    if lam == 0.0:
        if n <= d:
            raise InvalidConfig("lam = 0 needs more probes than dimensions")
        design = np.hstack([z, np.ones((n, 1))])
        theta, *_ = np.linalg.lstsq(design, y, rcond=None)
        path = (_lasso_objective(z, y, theta[:d], theta[d], 0.0),) if track_objective else None
        return LassoFit(theta[:d], float(theta[d]), 0.0, 1, True, 0.0, path)

    if max_sweeps is None:
        max_sweeps = 10 * (d + 1)
    ones = np.ones(n)
    theta = np.zeros(d + 1)
    r = y.copy()  # residual y - Z g - mu 1
    thresh = lam / 2.0
    path = [] if track_objective else None
    sweeps = 0
    gap = np.inf
    while sweeps < max_sweeps:
        sweeps += 1
        gap = 0.0
        for j in range(d + 1):
            col = z[:, j] if j < d else ones
            rho = col.dot(r) / n + theta[j]
            new = soft_threshold(rho, thresh)
            if new != theta[j]:
                r += col * (theta[j] - new)
                gap = max(gap, abs(new - theta[j]))
                theta[j] = new
        if path is not None:
            path.append(_lasso_objective(z, y, theta[:d], theta[d], lam))
        if gap < tol:
            break
    return LassoFit(theta[:d].copy(), float(theta[d]), float(lam), sweeps,
                    bool(gap < tol), float(gap), tuple(path) if path is not None else None)


def kkt_residual(batch: ProbeBatch, fit: LassoFit) -> float:
    """Dual-feasibility gap max_j |(1/n) col_j . residual|; at most lam/2 at optimum."""
    z = batch.signs
    n = z.shape[0]
    r = batch.responses - z @ fit.g_hat - fit.mu_hat
    corr = np.empty(z.shape[1] + 1)
    corr[:-1] = z.T @ r / n
    corr[-1] = r.sum() / n
    return float(np.abs(corr).max())


def debias(fit: LassoFit, batch: ProbeBatch) -> np.ndarray:
    """Correlation correction: g_hat + (1/n) Z^T (y - Z g_hat - mu_hat 1)."""
    z = batch.signs
    if fit.g_hat.shape[0] != z.shape[1]:
        raise InvalidConfig("fit and batch dimensions do not match")
    r = batch.responses - z @ fit.g_hat - fit.mu_hat
    return fit.g_hat + z.T @ r / z.shape[0]


def estimate_gradient(oracle, x_t, n: int, delta: float, lam: float, rng,
                      signs=None) -> GradientEstimate:
    """One probe batch, one lasso fit, one de-biasing pass.

    Consumes exactly n oracle queries and returns the de-biased estimate in
    g_tilde alongside the raw fit.
    """
    batch = build_probe_batch(oracle, x_t, n, delta, rng, signs=signs)
    fit = solve_lasso(batch, lam)
    return GradientEstimate(fit=fit, g_tilde=debias(fit, batch), g_tw=None,
                            delta=float(delta), queries_spent=n)


def twice_debias_estimate(oracle, x_t, n: int, delta: float, lambda_fn, rng,
                          signs=None) -> GradientEstimate:
    """Curvature-cancelling combination of de-biased estimates at two radii.

    Draws one n-probe batch at delta/2 and an independent one at delta (2n
    queries total) and sets g_tw = 2*g_tilde(delta/2) - g_tilde(delta).
    lambda_fn maps a probe radius to its penalty.  The returned fit, g_tilde,
    and delta describe the full-radius batch.
    """
    signs_half, signs_full = signs if signs is not None else (None, None)
    half = estimate_gradient(oracle, x_t, n, delta / 2.0, lambda_fn(delta / 2.0), rng, signs=signs_half)
    full = estimate_gradient(oracle, x_t, n, delta, lambda_fn(delta), rng, signs=signs_full)
    g_tw = 2.0 * half.g_tilde - full.g_tilde
    return GradientEstimate(fit=full.fit, g_tilde=full.g_tilde, g_tw=g_tw,
                            delta=float(delta), queries_spent=2 * n)


def balanced_delta(sigma: float, n: int, d: int, curvature: float,
                   floor: float = 1e-4) -> float:
    """Probe radius balancing noise against curvature bias.

    Equates the noise term sigma/delta * sqrt(log d / n) with the bias term
    delta * curvature; with sigma = 0 the floor keeps the radius positive.
    """
    if curvature <= 0:
        raise InvalidConfig(f"curvature bound must be positive, got {curvature}")
    if sigma == 0:
        return floor
    val = (sigma**2 * np.log(max(d, 2)) / (curvature**2 * n)) ** 0.25
    return float(max(val, floor))


def default_lambda(sigma: float, n: int, d: int, delta: float, curvature: float,
                   scale: float = 1.0) -> float:
    """Penalty covering noise and curvature bias at probe radius delta."""
    noise = sigma / delta * np.sqrt(np.log(max(d, 2)) / n)
    return float(scale * (noise + delta * curvature))
