"""Unit tests for thinning, Poisson addition and the mean-preserving map."""

from __future__ import annotations

import numpy as np
import pytest

from pmaxent.core import pmf_core, transforms
from pmaxent.core.domain.errors import ContractError, DomainError


class TestThin:
    """Test binomial thinning."""

    def test_binomial_family(self):
        """Test that thinning Binomial(n, p) gives Binomial(n, p alpha)."""
        T = transforms.thin(pmf_core.binomial(12, 0.6), 0.5)
        assert pmf_core.total_variation(T, pmf_core.binomial(12, 0.3)) < 1e-12

    def test_poisson_family(self):
        """Test that thinning Poisson(2) by 1/2 gives Poisson(1)."""
        T = transforms.thin(pmf_core.poisson(2.0), 0.5)
        assert pmf_core.total_variation(T, pmf_core.poisson(1.0)) < 1e-10

    def test_endpoints(self):
        """Test alpha = 1 (identity) and alpha = 0 (point mass at 0)."""
        P = pmf_core.poisson(1.5)
        assert np.array_equal(transforms.thin(P, 1.0).probs, P.probs)
        T0 = transforms.thin(P, 0.0)
        assert T0.top == 0
        assert T0.deficit == P.deficit

    def test_mean_scales(self):
        """Test that thinning multiplies the mean by alpha."""
        P = pmf_core.binomial(9, 0.4)
        assert pmf_core.mean(transforms.thin(P, 0.3)) == pytest.approx(0.3 * pmf_core.mean(P), abs=1e-12)

    @pytest.mark.parametrize('alpha', [-0.1, 1.5, float('nan')])
    def test_invalid_alpha(self, alpha):
        """Test that alpha outside [0, 1] is refused."""
        with pytest.raises(DomainError, match='alpha'):
            transforms.thin(pmf_core.point_mass(1), alpha)


class TestAddPoisson:
    """Test Poisson addition."""

    def test_poisson_sum(self):
        """Test that adding Poisson(2) to Poisson(1) gives Poisson(3)."""
        S = transforms.add_poisson(pmf_core.poisson(1.0), 2.0)
        assert pmf_core.total_variation(S, pmf_core.poisson(3.0)) < 1e-10

    def test_zero_rate(self):
        """Test that a zero rate is the identity."""
        P = pmf_core.binomial(3, 0.5)
        assert np.array_equal(transforms.add_poisson(P, 0.0).probs, P.probs)

    def test_invalid_rate(self):
        """Test that a negative rate is refused."""
        with pytest.raises(DomainError):
            transforms.add_poisson(pmf_core.point_mass(0), -1.0)


class TestUMap:
    """Test the mean-preserving map."""

    def test_endpoints(self):
        """Test alpha = 1 (identity) and alpha = 0 (Poisson)."""
        X = pmf_core.binomial(8, 0.25)
        assert np.array_equal(transforms.u_map(X, 1.0, 2.0).probs, X.probs)
        assert pmf_core.total_variation(transforms.u_map(X, 0.0, 2.0), pmf_core.poisson(2.0)) < 1e-10

    def test_mean_preserved(self):
        """Test that the mean stays at lambda."""
        X = pmf_core.binomial(10, 0.3)
        assert pmf_core.mean(transforms.u_map(X, 0.4, 3.0)) == pytest.approx(3.0, abs=1e-9)

    def test_variance(self):
        """Test the variance interpolation."""
        X = pmf_core.binomial(10, 0.3)
        U = transforms.u_map(X, 0.4, 3.0)
        assert pmf_core.variance(U) == pytest.approx(transforms.flowed_variance(2.1, 3.0, 0.4), abs=1e-8)
        assert transforms.flowed_variance(2.1, 3.0, 0.4) == pytest.approx(2.856)

    def test_poisson_fixed_point(self):
        """Test that Poisson(lambda) does not move."""
        Z = pmf_core.poisson(2.0)
        assert pmf_core.total_variation(transforms.u_map(Z, 0.35, 2.0), Z) < 1e-10

    def test_semigroup(self):
        """Test U_a U_b = U_ab."""
        X = pmf_core.binomial(6, 0.5)
        lhs = transforms.u_map(transforms.u_map(X, 0.7, 3.0), 0.4, 3.0)
        rhs = transforms.u_map(X, 0.28, 3.0)
        assert pmf_core.total_variation(lhs, rhs) < 1e-10

    def test_mean_mismatch(self):
        """Test that a wrong lambda is a contract violation."""
        with pytest.raises(ContractError, match='expected 2.5'):
            transforms.u_map(pmf_core.binomial(4, 0.5), 0.5, 2.5)


class TestSizeBias:
    """Test size-biasing."""

    def test_binomial(self):
        """Test that size-biasing Binomial(n, p) gives Binomial(n - 1, p)."""
        sb = transforms.size_bias(pmf_core.binomial(6, 0.4))
        assert pmf_core.total_variation(sb, pmf_core.binomial(5, 0.4)) < 1e-12
        assert transforms.size_bias(pmf_core.binomial(2, 0.5)).probs.tolist() == pytest.approx([0.5, 0.5])

    def test_zero_mean(self):
        """Test that a zero mean is refused."""
        with pytest.raises(DomainError, match='positive mean'):
            transforms.size_bias(pmf_core.point_mass(0))

    @pytest.mark.parametrize('lam', [0.5, 2.0, 5.0])
    def test_poisson_fixed_point(self, lam):
        """Test that Poisson is fixed up to its truncation top and deficit."""
        Z = pmf_core.poisson(lam)
        sb = transforms.size_bias(Z)
        assert len(sb) == len(Z) - 1
        assert pmf_core.total_variation(sb, Z) <= 1e-12 + Z.deficit + Z.probs[-1]
        assert np.allclose(sb.probs, Z.probs[:-1], rtol=1e-10, atol=0.0)

    def test_second_order_total(self):
        """Test that the second-order total is E X(X-1) / mean^2."""
        S = transforms.size_bias2(pmf_core.poisson(2.0))
        assert S.total == pytest.approx(1.0, abs=1e-9)
        S = transforms.size_bias2(pmf_core.binomial(4, 0.5))
        assert S.total == pytest.approx(0.75)

    def test_second_order_degenerate(self):
        """Test that a vanishing second falling moment is refused."""
        with pytest.raises(DomainError, match='E X'):
            transforms.size_bias2(pmf_core.point_mass(1))
