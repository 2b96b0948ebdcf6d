"""Successive component selection with restricted low-dimensional descent.

Alternates lasso gradient estimation with thresholding to grow a set of
candidate coordinates, then runs the one-point baseline restricted to that
set.  Rounds stop once the candidate set reaches the target size, stops
changing, or the round limit is hit; any unspent budget funds one final
restricted descent run.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidConfig
from .lasso import estimate_gradient
from .sphere_gd import SphereGDParams, default_gd_params, run_sphere_gd
from .trace import RegretTracker


def threshold_support(g_hat, eta: float) -> np.ndarray:
    """Indices with |g_hat_i| >= eta (boundary included), sorted ascending."""
    if eta <= 0:
        raise InvalidConfig(f"threshold must be positive, got {eta}")
    return np.flatnonzero(np.abs(np.asarray(g_hat)) >= eta)


def successive_select(oracle, params, rng, tracker=None,
                      gd_params: SphereGDParams | None = None, on_round=None):
    """Grow a support estimate and descend on it, within a hard query budget.

    Each round spends floor(budget / 2s) queries on a probe batch whose lasso
    fit is thresholded at params.eta, unions the survivors into the candidate
    set, and spends the same amount on restricted descent over the set.  The
    total never exceeds params.budget.  Returns (x_out, trace, support) with
    the selected indices sorted ascending.

    on_round is an optional observer called with (round_index, support) after
    each thresholding step.
    """
    d = oracle.objective.d
    s = params.sparsity
    t_total = params.budget
    if s < 1:
        raise InvalidConfig(f"target support size must be positive, got {s}")
    if t_total < 4 * s:
        raise InvalidConfig(f"budget {t_total} is below the 4s minimum for s={s}")
    per_phase = t_total // (2 * s)
    if gd_params is None:
        gd_params = default_gd_params(params.radius)

    own = tracker is None
    if own:
        tracker = RegretTracker(oracle.objective)
    tracker.attach(oracle)
    start_count = oracle.queries_used

    x = np.zeros(d)
    x_entering = x.copy()
    support = np.empty(0, dtype=np.intp)
    prev: np.ndarray | None = None
    rounds = 0
    while support.shape[0] < s and rounds < s and (prev is None or not np.array_equal(support, prev)):
        prev = support
        rounds += 1
        x_entering = x.copy()
        tracker.note_visit(x)
        est = estimate_gradient(oracle, x, per_phase, params.delta, params.lam, rng)
        support = np.union1d(prev, threshold_support(est.fit.g_hat, params.eta)).astype(np.intp)
        if on_round is not None:
            on_round(rounds, support)
        if support.shape[0] > 0:
            restricted = SphereGDParams(radius=gd_params.radius, step_coeff=gd_params.step_coeff,
                                        probe_coeff=gd_params.probe_coeff, shrink=gd_params.shrink,
                                        active=tuple(int(i) for i in support))
            x, _ = run_sphere_gd(oracle, per_phase, x, restricted, rng, tracker=tracker)

    # an incomplete support means the last round added nothing useful, so the
    # previous round's iterate is the trusted one
    x_out = x if support.shape[0] == s else x_entering
    leftover = t_total - (oracle.queries_used - start_count)
    if leftover > 0 and support.shape[0] > 0:
        restricted = SphereGDParams(radius=gd_params.radius, step_coeff=gd_params.step_coeff,
                                    probe_coeff=gd_params.probe_coeff, shrink=gd_params.shrink,
                                    active=tuple(int(i) for i in support))
        x_out, _ = run_sphere_gd(oracle, leftover, x_out, restricted, rng, tracker=tracker)

    spent = oracle.queries_used - start_count
    assert spent <= t_total, f"query accounting error: spent {spent} of {t_total}"
    if own:
        tracker.finalize(x_out)
    return x_out, tracker.trace, support
