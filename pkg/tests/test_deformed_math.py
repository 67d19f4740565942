import math

import numpy as np
import pytest

from egab.deformed_math import (
    ABParams,
    ab_divergence,
    ab_divergence_scalar,
    deformed_exp,
    deformed_log,
)
from egab.errors import DomainError


class TestABParams:
    def test_gamma_derived(self):
        p = ABParams(1.0, 0.5, 0.1)
        assert p.gamma == 1.0 - (1.0 + 0.5)

    def test_eta_must_be_positive(self):
        with pytest.raises(DomainError):
            ABParams(1.0, 0.0, 0.0)
        with pytest.raises(DomainError):
            ABParams(1.0, 0.0, -1.0)


class TestDeformedLog:
    def test_log_of_one_is_zero_for_any_beta(self):
        assert deformed_log(1.0, -3.7) == 0.0

    def test_natural_log_branch(self):
        assert deformed_log(math.e, 0.0) == pytest.approx(1.0, rel=1e-14)

    def test_power_branch(self):
        # (4^0.5 - 1) / 0.5
        assert deformed_log(4.0, 0.5) == pytest.approx(2.0, rel=1e-14)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            deformed_log(0.0, 1.0)
        with pytest.raises(DomainError):
            deformed_log(-2.0, 0.0)

    def test_strictly_increasing(self, rng):
        for beta in [-5.0, -1.0, 0.0, 0.5, 2.0, 5.0]:
            xs = np.sort(rng.uniform(1e-3, 10.0, 200))
            ys = deformed_log(xs, beta)
            assert np.all(np.diff(ys) > 0)


class TestDeformedExp:
    def test_exp_of_zero_is_one(self):
        assert deformed_exp(0.0, 2.5) == 1.0

    def test_linear_branch(self):
        assert deformed_exp(1.0, 1.0) == 2.0

    def test_bracket_clips_at_zero(self):
        assert deformed_exp(-3.0, 1.0) == 0.0

    def test_inverse_pair(self, rng):
        # Restricted to beta*ln(x) >= -7.5. Below that, x^beta drops under
        # the floating-point resolution of the transform output near -1/beta
        # and no inverse can recover x; the roundtrip error grows like
        # eps / x^beta.
        for beta in np.concatenate([[-5.0, 0.0, 5.0], rng.uniform(-5, 5, 30)]):
            xs = 10.0 ** rng.uniform(-6, 6, 300)
            if beta != 0.0:
                xs = xs[beta * np.log(xs) >= -7.5]
            back = deformed_exp(deformed_log(xs, beta), beta)
            np.testing.assert_allclose(back, xs, rtol=1e-12)


class TestABDivergence:
    def test_zero_for_identical_arguments(self):
        p = [0.3, 0.7]
        for alpha, beta in [(1.3, -0.4), (0.0, 0.0), (1.0, 0.0), (2.0, -2.0)]:
            assert ab_divergence(p, p, alpha, beta) == pytest.approx(0.0, abs=1e-15)

    def test_euclidean_case(self):
        # beta-divergence at beta = 1: 0.5 * (2 - 1)^2
        assert ab_divergence([2.0], [1.0], 1.0, 1.0) == pytest.approx(0.5, rel=1e-14)

    def test_kl_case(self):
        assert ab_divergence([2.0], [1.0], 1.0, 0.0) == pytest.approx(
            2.0 * math.log(2.0) - 1.0, rel=1e-14
        )

    def test_itakura_saito_case(self):
        assert ab_divergence_scalar(1.0, 2.0, 1.0, -1.0) == pytest.approx(
            math.log(2.0) + 0.5 - 1.0, rel=1e-14
        )

    def test_scalar_agrees_with_vector(self, rng):
        for _ in range(20):
            p, q = rng.uniform(0.1, 3.0, 2)
            a, b = rng.uniform(-2, 2, 2)
            assert ab_divergence_scalar(p, q, a, b) == ab_divergence([p], [q], a, b)

    def test_scalar_trivial_zero(self):
        assert ab_divergence_scalar(1.0, 1.0, 0.3, -0.2) == pytest.approx(0.0, abs=1e-15)

    def test_rejects_mismatch_and_nonpositive(self):
        with pytest.raises(DomainError):
            ab_divergence([1.0, 2.0], [1.0], 1.0, 1.0)
        with pytest.raises(DomainError):
            ab_divergence([1.0, 0.0], [1.0, 1.0], 1.0, 1.0)

    def test_nonnegativity_and_zero_iff_equal(self, rng):
        for _ in range(300):
            n = rng.integers(1, 6)
            p = rng.uniform(0.05, 3.0, n)
            q = rng.uniform(0.05, 3.0, n)
            a, b = rng.uniform(-3, 3, 2)
            d = ab_divergence(p, q, a, b)
            assert d >= 0.0
            if not np.allclose(p, q):
                assert d > 1e-12

    @pytest.mark.parametrize("alpha,beta", [(0.7, 0.0), (0.0, -1.3), (1.5, -1.5), (0.0, 0.0)])
    def test_continuity_at_singular_parameters(self, rng, alpha, beta):
        p = rng.uniform(0.2, 2.0, 5)
        q = rng.uniform(0.2, 2.0, 5)
        exact = ab_divergence(p, q, alpha, beta)
        eps = 1e-6
        if (alpha, beta) == (0.0, 0.0):
            nearby = [(eps, eps), (-eps, eps), (eps, -eps)]
        elif beta == 0.0:
            nearby = [(alpha, eps), (alpha, -eps)]
        elif alpha == 0.0:
            nearby = [(eps, beta), (-eps, beta)]
        else:  # alpha + beta == 0 seam
            nearby = [(alpha, beta + eps), (alpha, beta - eps)]
        for a, b in nearby:
            assert ab_divergence(p, q, a, b) == pytest.approx(exact, rel=1e-4)

    def test_euclidean_identity(self, rng):
        p = rng.uniform(0.1, 2.0, 6)
        q = rng.uniform(0.1, 2.0, 6)
        assert ab_divergence(p, q, 1.0, 1.0) == pytest.approx(
            0.5 * np.sum((p - q) ** 2), rel=1e-12
        )

    def test_generalized_metric_identity(self, rng):
        # equal parameters: squared Euclidean distance of deformed-log images
        p = rng.uniform(0.1, 2.0, 6)
        q = rng.uniform(0.1, 2.0, 6)
        for b0 in [-1.5, -0.5, 0.5, 1.0, 2.0]:
            expected = 0.5 * np.sum(
                (deformed_log(p, b0) - deformed_log(q, b0)) ** 2
            )
            assert ab_divergence(p, q, b0, b0) == pytest.approx(expected, rel=1e-12)
