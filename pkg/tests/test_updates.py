import math

import numpy as np
import pytest

from egab.deformed_math import ABParams
from egab.errors import DegenerateUpdateError
from egab.simplex import invariant_gradient, scale_normalize
from egab.updates import (
    WEIGHT_FLOOR,
    egab_n_step,
    egab_n_step_fused,
    egab_p_step,
    egab_u_step,
    learning_rates,
)

from conftest import random_portfolio


def sample_instance(rng, eta=0.05):
    """Random (w, invariant grad, params) that keeps deformed_exp off its pole."""
    while True:
        n = int(rng.integers(2, 7))
        w = random_portfolio(rng, n)
        g = rng.normal(0, 0.5, n)
        g = invariant_gradient(g, w)
        a, b = rng.uniform(-2, 2, 2)
        params = ABParams(float(a), float(b), eta)
        bracket = 1.0 + params.beta * (-learning_rates(w, params) * g)
        if np.all(bracket > 1e-3):
            return w, g, params


class TestLearningRates:
    def test_gamma_zero_is_uniform(self):
        p = ABParams(1.0, 0.0, 0.1)  # gamma = 0
        np.testing.assert_allclose(learning_rates([0.5, 0.5], p), [0.1, 0.1])

    def test_gamma_one(self):
        p = ABParams(0.5, -0.5, 0.1)  # gamma = 1
        np.testing.assert_allclose(learning_rates([0.5, 0.25], p), [0.05, 0.025])

    def test_gamma_minus_one(self):
        p = ABParams(1.0, 1.0, 0.1)  # gamma = -1
        np.testing.assert_allclose(learning_rates([0.5, 0.25], p), [0.2, 0.4])


class TestUStep:
    def test_zero_gradient_fixed_point(self):
        w = np.array([0.3, 0.7])
        for a, b in [(1.0, 0.0), (1.0, 1.0), (0.5, -0.5)]:
            out = egab_u_step(w, np.zeros(2), ABParams(a, b, 0.2))
            np.testing.assert_allclose(out, w, rtol=1e-14)

    def test_classical_eg_case(self):
        out = egab_u_step([0.5, 0.5], [1.0, -1.0], ABParams(1.0, 0.0, 0.1))
        np.testing.assert_allclose(
            out, [0.5 * math.exp(-0.1), 0.5 * math.exp(0.1)], rtol=1e-14
        )

    def test_euclidean_case(self):
        # beta = 1, gamma = -1: w * [1 - eta * w^-1 * g]_+ = w - eta * g
        out = egab_u_step([0.5, 0.5], [1.0, -1.0], ABParams(1.0, 1.0, 0.1))
        np.testing.assert_allclose(out, [0.4, 0.6], rtol=1e-14)

    def test_floor_enforced(self):
        out = egab_u_step([0.5, 0.5], [100.0, -1.0], ABParams(1.0, 1.0, 1.0))
        assert out.min() >= WEIGHT_FLOOR


class TestNStep:
    def test_zero_gradient_fixed_point(self):
        w = np.array([0.25, 0.75])
        out = egab_n_step(w, np.zeros(2), ABParams(1.0, 0.5, 0.2))
        np.testing.assert_allclose(out, w, rtol=1e-14)

    def test_eg_hand_value(self):
        out = egab_n_step([0.5, 0.5], [1.0, -1.0], ABParams(1.0, 0.0, 0.1))
        z = 0.5 * math.exp(-0.1) + 0.5 * math.exp(0.1)
        np.testing.assert_allclose(out, [0.5 * math.exp(-0.1) / z, 0.5 * math.exp(0.1) / z], rtol=1e-12)
        np.testing.assert_allclose(out, [0.450166, 0.549834], atol=1e-6)

    def test_total_clipping_raises(self):
        with pytest.raises(DegenerateUpdateError):
            egab_n_step([0.5, 0.5], [50.0, 50.0], ABParams(1.0, 1.0, 1.0))

    def test_reduction_to_classical_eg(self, rng):
        # (alpha, beta) = (1, 0): raw and invariant gradients agree after scaling
        for _ in range(200):
            n = rng.integers(2, 6)
            w = random_portfolio(rng, n)
            g = rng.normal(0, 1, n)
            eta = 0.1
            params = ABParams(1.0, 0.0, eta)
            expected = scale_normalize(w * np.exp(-eta * g))
            np.testing.assert_allclose(
                egab_n_step(w, g, params), expected, atol=1e-12
            )
            np.testing.assert_allclose(
                egab_n_step(w, invariant_gradient(g, w), params), expected, atol=1e-12
            )

    def test_reduction_to_normalized_gradient_descent(self, rng):
        # (alpha, beta) = (1, 1): intermediate is the additive step w - eta * g
        for _ in range(200):
            n = rng.integers(2, 6)
            w = random_portfolio(rng, n, min_weight=0.05)
            g = invariant_gradient(rng.normal(0, 0.2, n), w)
            eta = 0.05
            intermediate = egab_u_step(w, g, ABParams(1.0, 1.0, eta))
            np.testing.assert_allclose(intermediate, w - eta * g, atol=1e-12)

    def test_fused_equivalence(self, rng):
        for _ in range(300):
            w, g, params = sample_instance(rng)
            np.testing.assert_allclose(
                egab_n_step_fused(w, g, params),
                egab_n_step(w, g, params),
                atol=1e-12,
            )

    def test_interpolation_continuity_in_beta(self):
        w = np.array([0.4, 0.35, 0.25])
        g = invariant_gradient(np.array([0.3, -0.2, 0.1]), w)
        for beta in np.linspace(0.0, 1.0, 21):
            a = egab_n_step(w, g, ABParams(1.0, beta, 0.2))
            b = egab_n_step(w, g, ABParams(1.0, beta + 1e-6, 0.2))
            assert np.abs(a - b).max() < 1e-3

    def test_mass_covering_ordering(self):
        # With gamma pinned at 0 (alpha = 1 - beta) the deformed-exp zoom is
        # isolated: lower beta spreads the normalized weights further apart.
        w = np.array([0.3, 0.1, 0.3, 0.3])
        g = np.array([0.1, 0.0, 0.2, -0.3])
        ratios = []
        for beta in [-1.0, 0.0, 0.5, 1.0, 2.0]:
            out = egab_n_step(w, g, ABParams(1.0 - beta, beta, 0.3))
            ratios.append(out.max() / out.min())
        assert all(ratios[i] > ratios[i + 1] for i in range(len(ratios) - 1))


class TestPStep:
    def test_zero_gradient_fixed_point(self):
        w = np.array([0.25, 0.75])
        out = egab_p_step(w, np.zeros(2), ABParams(1.0, 1.0, 0.2))
        np.testing.assert_allclose(out, w, rtol=1e-12)

    def test_large_step_hits_corner(self):
        out = egab_p_step([0.5, 0.5], [10.0, -10.0], ABParams(1.0, 1.0, 1.0))
        np.testing.assert_allclose(out, [0.0, 1.0], atol=1e-12)

    def test_outputs_valid_portfolios(self, rng):
        for _ in range(200):
            w, g, params = sample_instance(rng)
            out = egab_p_step(w, g - g.mean(), params)
            assert out.min() >= 0.0
            assert abs(out.sum() - 1.0) < 1e-10
