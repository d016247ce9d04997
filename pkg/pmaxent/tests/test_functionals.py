"""Unit tests for entropy, divergences, Cramer-Rao sums and difference operators."""

from __future__ import annotations

import math

from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp
import numpy as np
import pytest
from scipy import stats

from pmaxent.core import functionals, pmf_core, transforms
from pmaxent.core.domain.errors import DomainError

positive_weights = hnp.arrays(
    float, st.integers(min_value=1, max_value=12), elements=st.floats(min_value=0.01, max_value=10.0),
)


class TestEntropy:
    """Test entropy, Lambda and the Poisson divergence."""

    def test_poisson_entropy(self):
        """Test H(Poisson(1)) against scipy."""
        H = functionals.entropy(pmf_core.poisson(1.0))
        assert H.value == pytest.approx(float(stats.poisson(1.0).entropy()), abs=1e-9)
        assert H.value == pytest.approx(1.3048422, abs=1e-7)
        assert 0.0 < H.deficit_budget < 1e-10

    def test_uniform(self):
        """Test that the uniform law on four points has entropy log 4."""
        assert functionals.entropy(pmf_core.from_weights([1, 1, 1, 1])).value == pytest.approx(math.log(4.0))

    def test_zero_log_zero(self):
        """Test the 0 log 0 convention."""
        assert functionals.entropy(pmf_core.point_mass(3)).value == 0.0

    def test_decomposition(self):
        """Test H = Lambda - D."""
        B = pmf_core.binomial(10, 0.3)
        H = functionals.entropy(B).value
        Lam = functionals.lambda_functional(B, 3.0).value
        D = functionals.poisson_divergence(B, 3.0).value
        assert H == pytest.approx(Lam - D, abs=1e-12)

    def test_poisson_lambda_equals_entropy(self):
        """Test that D vanishes at Poisson, so Lambda = H."""
        Z = pmf_core.poisson(2.0)
        assert functionals.poisson_divergence(Z, 2.0).value == pytest.approx(0.0, abs=1e-10)
        assert functionals.lambda_functional(Z, 2.0).value == pytest.approx(functionals.entropy(Z).value, abs=1e-10)

    def test_invalid_rate(self):
        """Test that lambda must be positive."""
        with pytest.raises(DomainError):
            functionals.lambda_functional(pmf_core.point_mass(1), -1.0)


class TestDivergences:
    """Test relative and symmetrized entropies."""

    def test_against_scipy(self):
        """Test relative entropy against scipy."""
        P = pmf_core.from_weights([1, 2, 3])
        Q = pmf_core.from_weights([2, 2, 1])
        assert functionals.relative_entropy(P, Q).value == pytest.approx(stats.entropy(P.probs, Q.probs))

    def test_infinite(self):
        """Test that missing mass of the reference gives inf."""
        D = functionals.relative_entropy(pmf_core.binomial(3, 0.5), pmf_core.point_mass(0))
        assert D.is_infinite

    def test_symmetrized(self):
        """Test that the symmetrized form adds both directions."""
        P = pmf_core.from_weights([1, 2, 3])
        Q = pmf_core.from_weights([2, 2, 1])
        expected = functionals.relative_entropy(P, Q).value + functionals.relative_entropy(Q, P).value
        assert functionals.symmetrized_kl(P, Q).value == pytest.approx(expected)

    def test_symmetrized_common_support(self):
        """Test that a one-sided mismatch is inf unless restricted to the common support."""
        P = pmf_core.binomial(2, 0.5)
        Q = pmf_core.from_weights([1, 1])
        assert functionals.symmetrized_kl(P, Q).is_infinite
        common = functionals.symmetrized_kl(P, Q, common_support=True).value
        assert math.isfinite(common)
        assert common >= 0.0

    @pytest.mark.parametrize('lam', [0.5, 2.0, 5.0])
    def test_symmetrized_poisson_size_bias(self, lam):
        """Test that Poisson and its size-biased law are at divergence zero."""
        Z = pmf_core.poisson(lam)
        value = functionals.symmetrized_kl(Z, transforms.size_bias(Z)).value
        assert value == pytest.approx(0.0, abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(weights=positive_weights, other=positive_weights)
    def test_gibbs(self, weights, other):
        """Test that relative entropy is non-negative."""
        size = min(weights.size, other.size)
        P = pmf_core.from_weights(weights[:size])
        Q = pmf_core.from_weights(other[:size])
        assert functionals.relative_entropy(P, Q).value >= -1e-12

    @settings(max_examples=50, deadline=None)
    @given(a=positive_weights, b=positive_weights)
    def test_log_sum(self, a, b):
        """Test the log-sum inequality."""
        size = min(a.size, b.size)
        assert functionals.log_sum_gap(a[:size], b[:size]) >= -1e-10

    def test_log_sum_equality(self):
        """Test that proportional sequences close the gap."""
        a = np.array([1.0, 2.0, 3.0])
        assert functionals.log_sum_gap(a, 2.5 * a) == pytest.approx(0.0, abs=1e-12)

    def test_log_sum_invalid(self):
        """Test that lengths must match."""
        with pytest.raises(DomainError, match='equal length'):
            functionals.log_sum_gap([1.0, 2.0], [1.0])


class TestCramerRao:
    """Test the Cramer-Rao sums."""

    @pytest.mark.parametrize('lam', [0.5, 1.0, 2.0, 5.0])
    def test_poisson_equality(self, lam):
        """Test that Poisson attains both bounds."""
        Z = pmf_core.poisson(lam)
        assert functionals.cr_functional_1(Z, lam) == pytest.approx(1.0, abs=1e-9)
        assert functionals.cr_functional_2(Z, lam) == pytest.approx(1.0 / lam, abs=1e-9)

    def test_binomial(self):
        """Test the sums of Binomial(4, 1/2)."""
        B = pmf_core.binomial(4, 0.5)
        assert functionals.cr_functional_1(B, 2.0) >= 1.0
        assert functionals.cr_functional_2(B, 2.0) == math.inf
        assert functionals.cr_functional_2(B, 2.0, include_boundary=False) == pytest.approx(103.0 / 192.0)

    def test_score_identity(self):
        """Test CR1 = 1 + sum P rho^2."""
        B = pmf_core.binomial(6, 0.5)
        rho_mass = functionals.score_weighted_mass(B, 3.0)
        expected = 1.0 + float(np.sum(rho_mass ** 2 / B.probs))
        assert functionals.cr_functional_1(B, 3.0) == pytest.approx(expected, rel=1e-12)

    def test_support_from_zero(self):
        """Test that supports must start at 0."""
        with pytest.raises(DomainError, match='start at 0'):
            functionals.cr_functional_1(pmf_core.point_mass(2), 2.0)


class TestDifferenceOperators:
    """Test Delta, Delta* and the M/M/infinity generator."""

    def test_delta(self):
        """Test the forward difference with zero extension."""
        assert functionals.delta(np.array([1.0, 3.0, 6.0])).tolist() == [2.0, 3.0, -6.0]

    def test_delta_star(self):
        """Test the adjoint difference."""
        assert functionals.delta_star(np.array([1.0])).tolist() == [-1.0, 1.0]
        assert functionals.delta_star(np.array([1.0, 3.0])).tolist() == [-1.0, -2.0, 3.0]

    @settings(max_examples=50, deadline=None)
    @given(data=st.data(), n=st.integers(min_value=1, max_value=15))
    def test_adjoint(self, data, n):
        """Test sum (Delta f) g = sum f (Delta* g)."""
        values = hnp.arrays(float, n, elements=st.floats(min_value=-10.0, max_value=10.0))
        f, g = data.draw(values), data.draw(values)
        lhs = float(np.dot(functionals.delta(f), g))
        rhs = float(np.dot(f, functionals.delta_star(g)[:n]))
        assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_generator(self):
        """Test the generator against its jump form."""
        gen = functionals.mm_infty_generator(np.array([1.0, 2.0, 4.0]), 1.5)
        assert gen.tolist() == pytest.approx([1.5, 2.0, -10.0, 12.0])

    def test_generator_poisson_stationary(self):
        """Test that Poisson(lambda) integrates the generator to zero."""
        Z = pmf_core.poisson(2.0)
        f = np.array([0.3, -1.0, 2.0, 0.5, 1.0])
        gen = functionals.mm_infty_generator(f, 2.0)
        assert float(np.dot(Z.probs[:gen.size], gen)) == pytest.approx(0.0, abs=1e-12)

    def test_score_weighted_mass(self):
        """Test P rho for Binomial(2, 1/2) at lambda = 1."""
        flux = functionals.score_weighted_mass(pmf_core.binomial(2, 0.5), 1.0)
        assert flux.tolist() == pytest.approx([0.25, 0.0, -0.25])
