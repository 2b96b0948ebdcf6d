"""Mirror map, Bregman geometry, l1 projection, mirror-descent updates."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsezo.errors import InvalidConfig, NonFinite
from sparsezo.mirror import (
    bregman_div,
    default_norm_exponent,
    md_optimality_gap,
    md_update,
    project_l1,
    psi_grad,
    psi_value,
    run_md,
)
from sparsezo.objectives import NoisyOracle, ObjectiveSpec, make_objective
from sparsezo.params import OptimizerParams

from conftest import fd_grad


# --- potential function ----------------------------------------------------

def test_psi_euclidean_case():
    x = np.array([3.0, 4.0])
    assert psi_value(x, 2.0) == pytest.approx(12.5)
    assert np.allclose(psi_grad(x, 2.0), x, atol=1e-14)


def test_psi_frozen_a_three_halves():
    # ||(1,1)||_1.5 = 2^(2/3), psi = 2^(4/3) / (2 * 0.5) = 2^(4/3)
    x = np.ones(2)
    assert psi_value(x, 1.5) == pytest.approx(2.0 ** (4 / 3), rel=1e-12)
    grad = psi_grad(x, 1.5)
    assert np.allclose(grad, 2.0 * 2.0 ** (1 / 3), rtol=1e-12)


def test_psi_zero_vector():
    assert psi_value(np.zeros(5), 1.3) == 0.0
    assert np.all(psi_grad(np.zeros(5), 1.3) == 0.0)


@pytest.mark.parametrize("a", [1.1, 1.5, 2.0])
def test_psi_grad_matches_finite_differences(a, rng):
    for _ in range(10):
        # keep coordinates away from 0 where |x|^(a-1) loses smoothness
        x = rng.uniform(0.3, 2.0, size=4) * rng.choice([-1.0, 1.0], size=4)
        num = fd_grad(lambda v: psi_value(v, a), x, h=1e-6)
        ana = psi_grad(x, a)
        assert np.allclose(ana, num, rtol=1e-5, atol=1e-8)


def test_psi_grad_inverse_map_roundtrip(rng):
    # grad psi_a and grad psi_{a'} with 1/a + 1/a' = 1 are mutually inverse
    for a, d in [(1.5, 4), (1.9, 7), (1.001, 1000)]:
        conj = a / (a - 1.0)
        x = rng.normal(size=d)
        back = psi_grad(psi_grad(x, a), conj)
        assert np.allclose(back, x, rtol=1e-9, atol=1e-12)


def test_psi_grad_is_one_homogeneous(rng):
    x = rng.normal(size=6)
    for a in (1.2, 1.7):
        assert np.allclose(psi_grad(3.5 * x, a), 3.5 * psi_grad(x, a), rtol=1e-12)


# --- Bregman divergence ----------------------------------------------------

def test_bregman_self_is_zero(rng):
    x = rng.normal(size=5)
    assert bregman_div(x, x, 1.7) == pytest.approx(0.0, abs=1e-14)


def test_bregman_euclidean_case(rng):
    x, y = rng.normal(size=4), rng.normal(size=4)
    assert bregman_div(x, y, 2.0) == pytest.approx(
        0.5 * np.sum((x - y) ** 2), rel=1e-12)


def test_bregman_strong_convexity_bulk(rng):
    # B_psi(x, y) >= (1/2) ||x-y||_a^2 for the (a-1)-scaled potential
    a = 1.9
    for _ in range(1000):
        x, y = rng.normal(size=6), rng.normal(size=6)
        lhs = bregman_div(x, y, a)
        rhs = 0.5 * np.sum(np.abs(x - y) ** a) ** (2 / a)
        assert lhs >= rhs - 1e-9


# --- projection ------------------------------------------------------------

def test_project_l1_frozen_cases():
    assert np.allclose(project_l1(np.array([0.2, 0.1]), 1.0), [0.2, 0.1])
    assert np.allclose(project_l1(np.array([3.0, 0.0]), 1.0), [1.0, 0.0])
    assert np.allclose(project_l1(np.array([2.0, 1.0]), 1.0), [1.0, 0.0])


def test_project_l1_grid_confirms_nearest_point():
    # brute-force check that (1, 0) beats every grid point in the ball
    target = np.array([2.0, 1.0])
    proj = project_l1(target, 1.0)
    best = np.inf
    for u in np.linspace(-1, 1, 400):
        for v in np.linspace(-1, 1, 400):
            if abs(u) + abs(v) <= 1.0:
                best = min(best, (u - 2.0) ** 2 + (v - 1.0) ** 2)
    assert np.sum((proj - target) ** 2) <= best + 1e-9


@given(st.lists(st.floats(-50, 50), min_size=1, max_size=8),
       st.floats(0.01, 20))
@settings(max_examples=200)
def test_project_l1_variational_property(vals, radius):
    v = np.array(vals)
    p = project_l1(v, radius)
    assert np.sum(np.abs(p)) <= radius + 1e-9
    # projection onto a convex set: <v - p, q - p> <= 0 for feasible q
    q = project_l1(v + np.sign(v + 0.1), radius)
    assert np.dot(v - p, q - p) <= 1e-7 * max(1.0, np.abs(v).max()) ** 2


def test_project_l1_rejects_bad_radius():
    with pytest.raises(InvalidConfig):
        project_l1(np.ones(3), 0.0)


# --- md_update -------------------------------------------------------------

def test_md_update_zero_gradient_is_identity(rng):
    x = project_l1(rng.normal(size=6), 2.0)
    out = md_update(x, np.zeros(6), eta=0.5, radius=2.0, a=1.4)
    assert np.allclose(out, x, atol=1e-14)
    out = md_update(x, rng.normal(size=6), eta=0.0, radius=2.0, a=1.4)
    assert np.allclose(out, x, atol=1e-14)


def test_md_update_euclidean_matches_projection(rng):
    for _ in range(30):
        d = int(rng.integers(1, 8))
        radius = float(rng.uniform(0.5, 3.0))
        x = project_l1(rng.normal(size=d), radius)
        g = rng.normal(size=d)
        eta = float(rng.uniform(0.01, 1.0))
        got = md_update(x, g, eta=eta, radius=radius, a=2.0, tol=1e-8)
        want = project_l1(x - eta * g, radius)
        assert np.allclose(got, want, atol=1e-6)


def test_md_update_interior_point_is_unconstrained_step():
    # small step stays interior: the constraint is slack and the update is
    # the plain dual-map step
    x = np.array([-0.1, 0.0])
    g = np.array([0.2, -0.1])
    out = md_update(x, g, eta=0.1, radius=5.0, a=2.0, tol=1e-10)
    assert np.allclose(out, x - 0.1 * g, atol=1e-8)


def test_md_update_feasibility_and_gap(rng):
    for a, d, eta in [(1.5, 5, 0.3), (1.1, 20, 1.0), (2.0, 3, 0.05),
                      (1.05, 500, 1.0)]:
        radius = 1.5
        x = project_l1(rng.normal(size=d), radius)
        g = rng.normal(size=d)
        out = md_update(x, g, eta=eta, radius=radius, a=a, tol=1e-5)
        assert np.sum(np.abs(out)) <= radius + 1e-8
        assert md_optimality_gap(out, x, g, eta=eta, radius=radius, a=a) <= 1e-5


def test_md_update_fails_loudly_outside_certifiable_range(rng):
    # at a=1.001 the conjugate exponent is 1000 and most coordinates of the
    # dual image underflow to zero, so the residual certificate cannot be
    # met; the contract is to raise rather than return an uncertified point
    from sparsezo.errors import InnerSolveFailed

    x = project_l1(rng.normal(size=500), 1.5)
    g = rng.normal(size=500)
    with pytest.raises(InnerSolveFailed):
        md_update(x, g, eta=4.0, radius=1.5, a=1.001, tol=1e-5)


def test_md_update_rejections(rng):
    x = np.array([0.1, 0.1])
    g = np.ones(2)
    with pytest.raises(InvalidConfig):
        md_update(x, g, eta=0.1, radius=1.0, a=1.0)  # a out of range
    with pytest.raises(InvalidConfig):
        md_update(x, g, eta=0.1, radius=1.0, a=2.5)
    with pytest.raises(InvalidConfig):
        md_update(np.ones(2), g, eta=0.1, radius=1.0, a=1.5)  # infeasible x
    with pytest.raises(InvalidConfig):
        md_update(x, g, eta=-0.1, radius=1.0, a=1.5)
    with pytest.raises(NonFinite):
        md_update(x, np.array([np.inf, 0.0]), eta=0.1, radius=1.0, a=1.5)


def test_default_norm_exponent_values():
    assert default_norm_exponent(1) == 2.0
    assert default_norm_exponent(2) == 2.0
    assert default_norm_exponent(100) == pytest.approx(1.1217972, abs=1e-6)
    assert 1.0 < default_norm_exponent(10_000) < 1.2


# --- run_md ----------------------------------------------------------------

def _md_objective():
    spec = ObjectiveSpec(family="IdentityQuadratic", d=2, s=2, support=(0, 1))
    return make_objective(spec)


def _md_params(objective, budget, n, eta, radius, sigma=0.0, use_twice=False):
    bounds = objective.certified_bounds(radius)
    return OptimizerParams(
        dim=objective.spec.d, budget=budget, n_probes=n, delta=0.01,
        lam=0.05, eta=eta, radius=radius, sparsity=objective.spec.s,
        sigma=sigma, curvature=bounds.hess_l1, smoothness=bounds.spectral,
        grad_bound=bounds.grad_l1, hess_lipschitz=bounds.hess_lip,
        a=2.0, use_twice=use_twice)


def test_run_md_exact_gradient_hook_monotone(rng):
    # noiseless objective with the true gradient supplied: after the first
    # epoch the objective value never increases (within 1e-9)
    objective = _md_objective()
    params = _md_params(objective, budget=4000, n=10, eta=0.2, radius=1.5)
    oracle = NoisyOracle(objective, sigma=0.0)
    seen = []

    def exact(x):
        seen.append(x.copy())
        return objective.grad_true(x)

    x_out, _ = run_md(oracle, params, rng, gradient_override=exact)
    values = [objective.eval_true(x) for x in seen]
    diffs = np.diff(values[1:])
    assert np.all(diffs <= 1e-9)
    assert objective.eval_true(x_out) <= values[1] + 1e-9


def test_run_md_budget_accounting(rng):
    objective = _md_objective()
    params = _md_params(objective, budget=1000, n=30, eta=0.2, radius=1.5)
    oracle = NoisyOracle(objective, sigma=0.0)
    run_md(oracle, params, rng)
    epochs = 1000 // (2 * 30)
    assert oracle.queries_used == 2 * 30 * epochs
    assert oracle.queries_used <= 1000


def test_run_md_twice_budget_accounting(rng):
    objective = _md_objective()
    params = _md_params(objective, budget=800, n=25, eta=0.2, radius=1.5,
                        use_twice=True)
    oracle = NoisyOracle(objective, sigma=0.0)
    run_md(oracle, params, rng)
    assert oracle.queries_used == 2 * 25 * (800 // 50)


def test_run_md_converges_noiseless(rng):
    objective = _md_objective()
    params = _md_params(objective, budget=20_000, n=50, eta=0.2, radius=1.5)
    oracle = NoisyOracle(objective, sigma=0.0)
    x_out, _ = run_md(oracle, params, rng)
    f_star = objective.optimum_value().f_star
    start_gap = objective.eval_true(np.zeros(2)) - f_star
    end_gap = objective.eval_true(x_out) - f_star
    assert end_gap < 0.25 * start_gap


def test_run_md_rejects_bad_configs(rng):
    objective = _md_objective()
    oracle = NoisyOracle(objective, sigma=0.0)
    with pytest.raises(InvalidConfig):  # budget below one epoch of 2n
        run_md(oracle, _md_params(objective, budget=50, n=30, eta=0.2,
                                  radius=1.5), rng)
    big_eta = _md_params(objective, budget=1000, n=10, eta=100.0, radius=1.5)
    with pytest.raises(InvalidConfig):  # step too large for the curvature
        run_md(oracle, big_eta, rng)
    small_ball = _md_params(objective, budget=1000, n=10, eta=0.2, radius=0.5)
    with pytest.raises(InvalidConfig):  # optimum not inside the ball
        run_md(oracle, small_ball, rng)
