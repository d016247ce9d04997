"""Numeric core of pmaxent.

This package contains the calculus organized into modules and subpackages:
- pmf_core: mass functions, moments, convolution, distances
- transforms: thinning, Poisson addition, the mean-preserving flow, size bias
- concavity: log-concavity classes, scores, class samplers
- functionals: entropy, Lambda, divergences, Cramer-Rao sums, difference operators
- flow: heat equation, derivatives along the flow, entropy curves
- families: named families of the command line
- config: packaged defaults (policies, tolerances, suite sizes)
- domain: Value Objects and errors
- utils: grid and list grammars
"""

from pmaxent.core import concavity, families, flow, functionals, pmf_core, transforms
from pmaxent.core.config import settings
from pmaxent.core.domain import contracts, errors
from pmaxent.core.utils import utils

__all__ = [
    'pmf_core',
    'transforms',
    'concavity',
    'functionals',
    'flow',
    'families',
    'settings',
    'contracts',
    'errors',
    'utils',
]
