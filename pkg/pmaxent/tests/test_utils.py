"""Unit tests for grammars, named families and packaged settings."""

from __future__ import annotations

import numpy as np
import pytest

from pmaxent.core import families, pmf_core
from pmaxent.core.config import settings
from pmaxent.core.domain.errors import DomainError
from pmaxent.core.utils import utils


class TestParse:
    """Test list and grid grammars."""

    def test_parse_floats(self):
        """Test float lists."""
        assert utils.parse_floats('0.2, 0.7') == [0.2, 0.7]
        assert utils.parse_floats('') == []
        with pytest.raises(ValueError, match='cannot parse'):
            utils.parse_floats('a,b')

    def test_parse_ints(self):
        """Test integer lists."""
        assert utils.parse_ints('1,2,4') == [1, 2, 4]
        with pytest.raises(ValueError, match='not an integer'):
            utils.parse_ints('1,2.5')

    def test_default_grid(self):
        """Test the default curve grid."""
        grid = utils.parse_grid('0.05:1:0.05')
        assert len(grid) == 20
        assert grid[0] == 0.05
        assert grid[-1] == 1.0
        assert np.all(np.diff(grid) > 0.0)

    def test_grid_endpoints(self):
        """Test an exact lattice."""
        assert utils.parse_grid('0.25:1:0.25').tolist() == [0.25, 0.5, 0.75, 1.0]
        assert utils.parse_grid('0:0:1').tolist() == [0.0]

    @pytest.mark.parametrize('spec', ['0:1', '1:0:0.1', '0:1:0', '0:1:-0.1', 'a:b:c'])
    def test_grid_invalid(self, spec):
        """Test malformed grids."""
        with pytest.raises(ValueError):
            utils.parse_grid(spec)

    def test_uniform_grid(self):
        """Test evenly spaced grids."""
        assert utils.uniform_grid(0.0, 1.0, 5).tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]


class TestFamilies:
    """Test named families."""

    def test_binomial(self):
        """Test binomial:n,p."""
        assert families.parse_family('binomial:2,0.5').probs.tolist() == pytest.approx([0.25, 0.5, 0.25])

    def test_poisson(self):
        """Test poisson:lam."""
        assert pmf_core.mean(families.parse_family('poisson:3')) == pytest.approx(3.0, abs=1e-9)

    def test_bernoulli_sum(self):
        """Test bernoulli-sum:p,p."""
        P = families.parse_family('bernoulli-sum:0.2,0.7')
        assert P.probs.tolist() == pytest.approx([0.24, 0.62, 0.14])

    def test_ulc(self):
        """Test ulc:lam,support,seed."""
        P = families.parse_family('ulc:2,20,5')
        assert pmf_core.mean(P) == pytest.approx(2.0, abs=1e-9)

    @pytest.mark.parametrize('spec, match', [
        ('zipf:2', 'unknown family'),
        ('binomial:2', 'takes 2'),
        ('binomial:2.5,0.5', 'integer'),
        ('poisson:x', 'cannot parse'),
    ])
    def test_invalid(self, spec, match):
        """Test malformed family specs."""
        with pytest.raises(ValueError, match=match):
            families.parse_family(spec)

    def test_mean_family(self):
        """Test accumulation bases built from their mean."""
        assert families.mean_family('bernoulli')(0.25).probs.tolist() == pytest.approx([0.75, 0.25])
        assert pmf_core.mean(families.mean_family('binomial:4')(1.0)) == pytest.approx(1.0)
        assert pmf_core.mean(families.mean_family('poisson')(0.5)) == pytest.approx(0.5, abs=1e-9)

    def test_mean_family_invalid(self):
        """Test unknown bases and unreachable means."""
        with pytest.raises(ValueError, match='unknown base'):
            families.mean_family('geometric')
        with pytest.raises(ValueError, match='positive order'):
            families.mean_family('binomial:0')
        with pytest.raises(DomainError, match='out of reach'):
            families.mean_family('bernoulli')(2.0)


class TestSettings:
    """Test packaged defaults."""

    def test_policies(self):
        """Test that the oracle policy is tighter than the default one."""
        assert settings.default_policy().tail_epsilon == 1e-12
        assert settings.oracle_policy().tail_epsilon < settings.default_policy().tail_epsilon
        assert settings.resolve_policy(None) is settings.default_policy()

    def test_tolerances(self):
        """Test tolerance values and the derivative tolerance."""
        tol = settings.default_tolerances()
        assert tol.maxent == 1e-12
        assert tol.derivative_tol(0.0) == tol.derivative_abs
        assert tol.richardson_low < 4.0 < tol.richardson_high

    def test_suite_defaults(self):
        """Test suite sizes."""
        suite = settings.suite_defaults()
        assert suite.cases == 20
        assert suite.lambdas == (0.5, 1.0, 2.0, 5.0)

    def test_unknown_key(self):
        """Test that unknown keys in a section are refused."""
        data = {'step': 1e-4, 'second_step': 1e-3, 'richardson_step': 1e-3, 'x': 1}
        with pytest.raises(KeyError, match='unknown FiniteDifference keys'):
            settings._build(settings.FiniteDifference, data)

    def test_missing_key(self):
        """Test that missing keys are refused."""
        with pytest.raises(KeyError, match='missing'):
            settings._build(settings.FiniteDifference, {'step': 1e-4})
