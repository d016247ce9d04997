"""Discrete Cramer-Rao sums on the ultra log-concave class."""

from __future__ import annotations

import logging

import numpy as np

from pmaxent.core import concavity, functionals, pmf_core, transforms
from pmaxent.verify.base import at_least, at_most, check, draw_ulc, draw_weights

logger = logging.getLogger(__name__)


def _flowed(rng, ctx):
    X, lam = draw_ulc(rng, ctx)
    alpha = float(rng.uniform(0.05, 0.95))
    return transforms.u_map(X, alpha, lam, ctx.policy), lam, alpha


@check('cr1-lower-bound')
def cr1_lower_bound(rng, ctx):
    """First sum is at least 1 for any mass function from 0 at its own mean."""
    source = str(rng.choice(['flowed', 'ulc', 'weights']))
    if source == 'flowed':
        P, lam, _ = _flowed(rng, ctx)
    elif source == 'ulc':
        P, lam = draw_ulc(rng, ctx)
    else:
        P = pmf_core.from_weights(draw_weights(rng, int(rng.integers(2, 10))))
        lam = pmf_core.mean(P)
    return at_least(functionals.cr_functional_1(P, lam), 1.0, ctx.tol.cramer_rao, source=source, lam=lam)


@check('cr2-lower-bound')
def cr2_lower_bound(rng, ctx):
    """Second sum is at least 1/lam on flowed states."""
    P, lam, alpha = _flowed(rng, ctx)
    return at_least(functionals.cr_functional_2(P, lam), 1.0 / lam, ctx.tol.cramer_rao, lam=lam, alpha=alpha)


@check('cr1-score-identity')
def cr1_score_identity(rng, ctx):
    """``CR1 - 1 = sum P rho^2``."""
    P, lam, alpha = _flowed(rng, ctx)
    rho = concavity.score(P, lam).dense(len(P))[:len(P)]
    cr1 = functionals.cr_functional_1(P, lam)
    err = abs(cr1 - 1.0 - float(np.dot(P.probs, rho * rho)))
    return at_most(err, ctx.tol.cramer_rao * max(1.0, cr1), lam=lam, alpha=alpha)


@check('poisson-cramer-rao-equality', randomized=False)
def poisson_equality(rng, ctx):
    """Poisson attains both bounds."""
    worst = 0.0
    for lam in ctx.suite.lambdas:
        Z = pmf_core.poisson(lam, ctx.oracle)
        worst = max(
            worst,
            abs(functionals.cr_functional_1(Z, lam) - 1.0),
            abs(functionals.cr_functional_2(Z, lam) - 1.0 / lam),
        )
    return at_most(worst, ctx.tol.reformulation, lambdas=list(ctx.suite.lambdas))


CHECKS = [
    cr1_lower_bound,
    cr2_lower_bound,
    cr1_score_identity,
    poisson_equality,
]
