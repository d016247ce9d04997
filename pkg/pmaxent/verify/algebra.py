"""Algebraic identities of thinning, Poisson addition and the flow."""

from __future__ import annotations

import logging
import math

import numpy as np

from pmaxent.const import NORM_TOL
from pmaxent.core import concavity, pmf_core, transforms
from pmaxent.core.domain.contracts import FlowPath
from pmaxent.verify.base import CheckContext, at_most, check, draw_ulc

logger = logging.getLogger(__name__)

PGF_POINTS = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])


def _random_member(rng: np.random.Generator, ctx: CheckContext):
    kind = str(rng.choice(['poisson', 'binomial', 'geometric', 'ulc']))
    if kind == 'poisson':
        lam = float(rng.uniform(0.0, 20.0))
        return kind, {'lam': lam}, pmf_core.poisson(lam, ctx.policy)
    if kind == 'binomial':
        n, p = int(rng.integers(1, 50)), float(rng.uniform())
        return kind, {'n': n, 'p': p}, pmf_core.binomial(n, p)
    if kind == 'geometric':
        p = float(rng.uniform(0.05, 1.0))
        return kind, {'p': p}, pmf_core.geometric(p, ctx.policy)
    X, lam = draw_ulc(rng, ctx)
    return kind, {'lam': lam}, X


@check('normalization')
def normalization(rng, ctx):
    kind, params, P = _random_member(rng, ctx)
    err = abs(float(P.probs.sum()) + P.deficit - 1.0)
    return at_most(err, NORM_TOL, family=kind, **params)


@check('poisson-tail')
def poisson_tail(rng, ctx):
    lam = float(rng.uniform(0.0, 50.0))
    P = pmf_core.poisson(lam, ctx.policy)
    return at_most(P.deficit, ctx.policy.tail_epsilon, lam=lam, top=P.top)


@check('convolution-symmetry')
def convolution_symmetry(rng, ctx):
    P, lp = draw_ulc(rng, ctx)
    Q, lq = draw_ulc(rng, ctx)
    tv = pmf_core.total_variation(pmf_core.convolve(P, Q, ctx.policy), pmf_core.convolve(Q, P, ctx.policy))
    return at_most(tv, 1e-14, lam_p=lp, lam_q=lq)


@check('mean-additivity')
def mean_additivity(rng, ctx):
    P, lp = draw_ulc(rng, ctx)
    Q, lq = draw_ulc(rng, ctx)
    PQ = pmf_core.convolve(P, Q, ctx.policy)
    err = abs(pmf_core.mean(PQ) - pmf_core.mean(P) - pmf_core.mean(Q))
    return at_most(err, ctx.tol.composition_tv + transforms.mean_slack(PQ), lam_p=lp, lam_q=lq)


@check('pgf-factorization')
def pgf_factorization(rng, ctx):
    P, lp = draw_ulc(rng, ctx)
    Q, lq = draw_ulc(rng, ctx)
    PQ = pmf_core.convolve(P, Q, ctx.policy)
    err = max(abs(pmf_core.pgf_eval(PQ, t) - pmf_core.pgf_eval(P, t) * pmf_core.pgf_eval(Q, t)) for t in PGF_POINTS)
    return at_most(err, ctx.tol.composition_tv, lam_p=lp, lam_q=lq)


@check('thinning-composition')
def thinning_composition(rng, ctx):
    X, lam = draw_ulc(rng, ctx)
    a1, a2 = (float(v) for v in rng.uniform(size=2))
    tv = pmf_core.total_variation(transforms.thin(transforms.thin(X, a1), a2), transforms.thin(X, a1 * a2))
    return at_most(tv, ctx.tol.thinning_tv, lam=lam, alpha1=a1, alpha2=a2)


@check('poisson-composition')
def poisson_composition(rng, ctx):
    X, lam = draw_ulc(rng, ctx)
    b1, b2 = (float(v) for v in rng.uniform(0.0, 5.0, size=2))
    lhs = transforms.add_poisson(transforms.add_poisson(X, b1, ctx.policy), b2, ctx.policy)
    rhs = transforms.add_poisson(X, b1 + b2, ctx.policy)
    return at_most(pmf_core.total_variation(lhs, rhs), ctx.tol.composition_tv, lam=lam, beta1=b1, beta2=b2)


@check('thin-poisson-commutation')
def commutation(rng, ctx):
    X, lam = draw_ulc(rng, ctx)
    alpha = float(rng.choice(ctx.suite.alphas))
    beta = float(rng.choice(ctx.suite.betas))
    lhs = transforms.thin(transforms.add_poisson(X, beta, ctx.policy), alpha)
    rhs = transforms.add_poisson(transforms.thin(X, alpha), alpha * beta, ctx.policy)
    return at_most(pmf_core.total_variation(lhs, rhs), ctx.tol.composition_tv, lam=lam, alpha=alpha, beta=beta)


@check('flow-semigroup')
def semigroup(rng, ctx):
    X, lam = draw_ulc(rng, ctx)
    a1, a2 = (float(v) for v in rng.uniform(size=2))
    lhs = transforms.u_map(transforms.u_map(X, a2, lam, ctx.policy), a1, lam, ctx.policy)
    rhs = transforms.u_map(X, a1 * a2, lam, ctx.policy)
    return at_most(pmf_core.total_variation(lhs, rhs), ctx.tol.composition_tv, lam=lam, alpha1=a1, alpha2=a2)


@check('flow-time-additivity')
def time_additivity(rng, ctx):
    """Reparametrized by ``alpha = exp(-theta)`` the flow adds times."""
    X, lam = draw_ulc(rng, ctx)
    t1, t2 = (float(v) for v in rng.uniform(0.0, 2.0, size=2))
    lhs = transforms.u_map(transforms.u_map(X, math.exp(-t1), lam, ctx.policy), math.exp(-t2), lam, ctx.policy)
    rhs = transforms.u_map(X, math.exp(-(t1 + t2)), lam, ctx.policy)
    return at_most(pmf_core.total_variation(lhs, rhs), ctx.tol.composition_tv, lam=lam, theta1=t1, theta2=t2)


@check('flow-dual-form')
def dual_form(rng, ctx):
    X, lam = draw_ulc(rng, ctx)
    alpha = float(rng.choice(ctx.suite.alphas))
    lhs = transforms.thin(transforms.add_poisson(X, lam * (1.0 / alpha - 1.0), ctx.policy), alpha)
    rhs = transforms.u_map(X, alpha, lam, ctx.policy)
    return at_most(pmf_core.total_variation(lhs, rhs), ctx.tol.composition_tv, lam=lam, alpha=alpha)


@check('flow-mean')
def flow_mean(rng, ctx):
    X, lam = draw_ulc(rng, ctx)
    alpha = float(rng.uniform())
    U = transforms.u_map(X, alpha, lam, ctx.policy)
    return at_most(abs(pmf_core.mean(U) - lam), transforms.mean_slack(U), lam=lam, alpha=alpha)


@check('flow-pgf')
def flow_pgf(rng, ctx):
    """``G_{v_map}(t) = G_X(1 - alpha + alpha t) exp(f(alpha)(t - 1))`` for the u-flow path."""
    X, lam = draw_ulc(rng, ctx)
    alpha = float(rng.uniform(0.05, 1.0))
    path = FlowPath.u_flow(lam)
    V = transforms.v_map(X, alpha, path.f(alpha), ctx.policy)
    expected = [pmf_core.pgf_eval(X, 1.0 - alpha + alpha * t) * math.exp(path.f(alpha) * (t - 1.0)) for t in PGF_POINTS]
    errs = [abs(pmf_core.pgf_eval(V, t) - e) for t, e in zip(PGF_POINTS, expected, strict=True)]
    return at_most(max(errs), ctx.tol.pgf, lam=lam, alpha=alpha)


@check('thinning-moments')
def thinning_moments(rng, ctx):
    X, lam = draw_ulc(rng, ctx)
    alpha = float(rng.uniform())
    T = transforms.thin(X, alpha)
    errs = [
        abs(pmf_core.falling_moment(T, r) - alpha ** r * pmf_core.falling_moment(X, r))
        / max(1.0, pmf_core.falling_moment(X, r))
        for r in (1, 2, 3)
    ]
    return at_most(max(errs), ctx.tol.moment, lam=lam, alpha=alpha)


@check('flow-variance')
def flow_variance(rng, ctx):
    X, lam = draw_ulc(rng, ctx)
    alpha = float(rng.uniform())
    U = transforms.u_map(X, alpha, lam, ctx.policy)
    expected = transforms.flowed_variance(pmf_core.variance(X), lam, alpha)
    err = abs(pmf_core.variance(U) - expected)
    return at_most(err, ctx.tol.moment + U.deficit * len(U) ** 2, lam=lam, alpha=alpha)


@check('bernoulli-sum-mean')
def bernoulli_sum_mean(rng, ctx):
    p = rng.uniform(size=int(rng.integers(1, 12)))
    S = concavity.bernoulli_sum(p)
    return at_most(abs(pmf_core.mean(S) - float(p.sum())), ctx.tol.moment, p=p.tolist())


CHECKS = [
    normalization,
    poisson_tail,
    convolution_symmetry,
    mean_additivity,
    pgf_factorization,
    thinning_composition,
    poisson_composition,
    commutation,
    semigroup,
    time_additivity,
    dual_form,
    flow_mean,
    flow_pgf,
    thinning_moments,
    flow_variance,
    bernoulli_sum_mean,
]
