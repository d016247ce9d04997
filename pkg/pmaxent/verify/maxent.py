"""Entropy maximization on the ultra log-concave class and its companions."""

from __future__ import annotations

import logging

from pmaxent.core import concavity, functionals, pmf_core, transforms
from pmaxent.verify.base import Outcome, at_least, at_most, budget, check, draw_ulc, draw_weights

logger = logging.getLogger(__name__)

# Entropy gaps this small are only allowed for near-Poisson inputs
EQUALITY_GAP = 1e-10
EQUALITY_TV = 1e-6


@check('ulc-entropy-below-poisson')
def entropy_below_poisson(rng, ctx):
    X, lam = draw_ulc(rng, ctx)
    Z = pmf_core.poisson(lam, ctx.oracle)
    H_x, H_z = functionals.entropy(X), functionals.entropy(Z)
    gap = H_z.value - H_x.value
    slack = ctx.tol.maxent + H_x.deficit_budget + H_z.deficit_budget
    distance = pmf_core.total_variation(X, Z)
    passed = gap >= -slack and (gap >= EQUALITY_GAP or distance < EQUALITY_TV)
    return Outcome(
        value=gap, tolerance=slack, passed=passed, details={'lam': lam, 'entropy': H_x.value, 'tv': distance},
    )


@check('ulc-lambda-below-poisson')
def lambda_below_poisson(rng, ctx):
    """The flow starts at X and ends at Poisson, so Lambda(X) <= Lambda(Poisson) = H(Poisson)."""
    X, lam = draw_ulc(rng, ctx)
    Z = pmf_core.poisson(lam, ctx.oracle)
    L_x, L_z = functionals.lambda_functional(X, lam), functionals.lambda_functional(Z, lam)
    return at_least(L_z.value, L_x.value, ctx.tol.maxent + L_x.deficit_budget + L_z.deficit_budget, lam=lam)


@check('entropy-decomposition')
def decomposition(rng, ctx):
    X, lam = draw_ulc(rng, ctx)
    alpha = float(rng.uniform())
    U = transforms.u_map(X, alpha, lam, ctx.policy)
    gap = abs(
        functionals.entropy(U).value
        - functionals.lambda_functional(U, lam).value
        + functionals.poisson_divergence(U, lam).value
    )
    return at_most(gap, ctx.tol.decomposition + budget(U), lam=lam, alpha=alpha)


@check('poisson-lambda-equals-entropy', randomized=False)
def poisson_lambda(rng, ctx):
    worst = 0.0
    for lam in ctx.suite.lambdas:
        Z = pmf_core.poisson(lam, ctx.oracle)
        worst = max(worst, abs(functionals.lambda_functional(Z, lam).value - functionals.entropy(Z).value))
    return at_most(worst, ctx.tol.reformulation, lambdas=list(ctx.suite.lambdas))


@check('gibbs-inequality')
def gibbs(rng, ctx):
    size = int(rng.integers(1, 12))
    P = pmf_core.from_weights(draw_weights(rng, size))
    Q = pmf_core.from_weights(draw_weights(rng, size))
    d_pq = functionals.relative_entropy(P, Q).value
    d_pp = functionals.relative_entropy(P, P).value
    if abs(d_pp) > ctx.tol.equality:
        return at_most(abs(d_pp), ctx.tol.equality, size=size)
    return at_least(d_pq, 0.0, ctx.tol.equality, size=size)


@check('log-sum-inequality')
def log_sum(rng, ctx):
    size = int(rng.integers(1, 12))
    a, b = draw_weights(rng, size) * 10.0, draw_weights(rng, size) * 10.0
    return at_least(functionals.log_sum_gap(a, b), 0.0, ctx.tol.log_sum, size=size)


@check('bernoulli-sum-below-binomial')
def bernoulli_below_binomial(rng, ctx):
    """Sums of n Bernoulli counts with mean lam are beaten by Binomial(n, lam/n), itself by Poisson."""
    p = rng.uniform(size=int(rng.integers(2, 9)))
    lam, n = float(p.sum()), p.size
    H_s = functionals.entropy(concavity.bernoulli_sum(p)).value
    H_b = functionals.entropy(pmf_core.binomial(n, lam / n)).value
    H_z = functionals.entropy(pmf_core.poisson(lam, ctx.oracle)).value
    margin = min(H_b - H_s, H_z - H_b)
    return Outcome(
        value=margin, tolerance=ctx.tol.maxent_bn, passed=margin >= -ctx.tol.maxent_bn,
        details={'p': p.tolist(), 'entropy': H_s, 'binomial_entropy': H_b, 'poisson_entropy': H_z},
    )


CHECKS = [
    entropy_below_poisson,
    lambda_below_poisson,
    decomposition,
    poisson_lambda,
    gibbs,
    log_sum,
    bernoulli_below_binomial,
]
