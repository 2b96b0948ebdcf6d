"""Shared test doubles and numeric helpers."""

from __future__ import annotations

import numpy as np
import pytest

from sparsezo.objectives import Optimum


class LinearObjective:
    """f(x) = c . x; no finite minimum, for estimator tests only."""

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=np.float64)
        self.d = self.c.shape[0]

    def eval_true(self, x):
        return float(self.c @ np.asarray(x, dtype=np.float64))

    def grad_true(self, x):
        return self.c.copy()


class CubeObjective:
    """f(x) = x^3 in one dimension; cubic term exposes probe-radius bias."""

    d = 1

    def eval_true(self, x):
        return float(np.asarray(x).reshape(())) ** 3


class SumObjective:
    """f(x) = sum(x) with a declared optimum at 0, for tracker arithmetic."""

    def __init__(self, d=2):
        self.d = d

    def eval_true(self, x):
        return float(np.sum(x))

    def optimum_value(self):
        return Optimum(0.0, np.zeros(self.d), 0.0)


def fd_grad(f, x, h=1e-5):
    """Central finite differences, one column per coordinate."""
    x = np.asarray(x, dtype=np.float64)
    g = np.zeros_like(x)
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


def full_design(d):
    """All 2^d sign vectors, one per row."""
    rows = []
    for bits in range(2**d):
        rows.append([1.0 if bits >> j & 1 else -1.0 for j in range(d)])
    return np.asarray(rows)


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)
