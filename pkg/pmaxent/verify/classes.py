"""Membership and closure of the log-concavity classes."""

from __future__ import annotations

import logging

from pmaxent.core import concavity, pmf_core, transforms
from pmaxent.verify.base import at_least, at_most, check, draw_ulc, draw_weights, from_report

logger = logging.getLogger(__name__)


@check('ulc-score-equivalence')
def score_equivalence(rng, ctx):
    """Both readings of ultra log-concavity agree, on members and on arbitrary weights."""
    if rng.uniform() < 0.5:
        P, lam = draw_ulc(rng, ctx)
        source = 'ulc'
    else:
        P = pmf_core.from_weights(draw_weights(rng, int(rng.integers(3, 8))))
        lam, source = pmf_core.mean(P), 'weights'
    ulc = bool(concavity.is_ultra_log_concave(P))
    dec = concavity.is_score_decreasing(P, lam)
    return at_most(float(ulc != dec), 0.0, source=source, lam=lam, ulc=ulc, score_decreasing=dec)


@check('lc-convolution-closure')
def lc_closure(rng, ctx):
    P = concavity.random_log_concave(int(rng.integers(1, ctx.suite.max_support)), rng)
    Q = concavity.random_log_concave(int(rng.integers(1, ctx.suite.max_support)), rng)
    report = concavity.is_log_concave(pmf_core.convolve(P, Q, ctx.policy), slack=ctx.tol.class_slack)
    return from_report(report, top_p=P.top, top_q=Q.top)


@check('ulc-convolution-closure')
def ulc_closure(rng, ctx):
    P, lp = draw_ulc(rng, ctx)
    Q, lq = draw_ulc(rng, ctx)
    PQ = pmf_core.convolve(P, Q, ctx.policy)
    mean_err = abs(pmf_core.mean(PQ) - lp - lq)
    if mean_err > transforms.mean_slack(PQ):
        return at_most(mean_err, transforms.mean_slack(PQ), lam_p=lp, lam_q=lq)
    return from_report(concavity.is_ultra_log_concave(PQ, slack=ctx.tol.class_slack), lam_p=lp, lam_q=lq)


@check('ulc-flow-closure')
def flow_closure(rng, ctx):
    """Thinning, Poisson addition and the flow keep a member in its class."""
    X, lam = draw_ulc(rng, ctx)
    alpha = float(rng.uniform())
    beta = float(rng.choice(ctx.suite.betas))
    reports = {
        'thin': concavity.is_ultra_log_concave(transforms.thin(X, alpha), slack=ctx.tol.class_slack),
        'add_poisson': concavity.is_ultra_log_concave(
            transforms.add_poisson(X, beta, ctx.policy), slack=ctx.tol.class_slack,
        ),
        'u_map': concavity.is_ultra_log_concave(
            transforms.u_map(X, alpha, lam, ctx.policy), slack=ctx.tol.class_slack,
        ),
    }
    failed = [k for k, r in reports.items() if not r.passed]
    worst = failed[0] if failed else min(reports, key=lambda k: reports[k].min_margin)
    return from_report(reports[worst], lam=lam, alpha=alpha, beta=beta, map=worst)


@check('bernoulli-sum-order-n')
def bernoulli_order_n(rng, ctx):
    p = rng.uniform(size=int(rng.integers(1, 9)))
    report = concavity.is_ulc_of_order(concavity.bernoulli_sum(p), p.size, slack=ctx.tol.class_slack)
    return from_report(report, p=p.tolist())


@check('ulc-variance-below-mean')
def variance_below_mean(rng, ctx):
    X, lam = draw_ulc(rng, ctx)
    return at_least(lam, pmf_core.variance(X), ctx.tol.moment, lam=lam)


@check('ulc-conditional-tail')
def conditional_tail(rng, ctx):
    X, lam = draw_ulc(rng, ctx)
    bound = concavity.conditional_tail_bound(lam)
    return at_least(bound, concavity.conditional_tail_ratio(X), ctx.tol.class_slack, lam=lam, tail_bound=bound)


@check('score-zero-mean')
def score_zero_mean(rng, ctx):
    """``sum P rho = 0`` whenever the support starts at 0 and lam is the mean."""
    X, lam = draw_ulc(rng, ctx)
    rho = concavity.score(X, lam).dense(len(X))[:len(X)]
    return at_most(abs(float(X.probs @ rho)), ctx.tol.moment, lam=lam)


@check('score-projection')
def score_projection(rng, ctx):
    U, lu = draw_ulc(rng, ctx)
    V, lv = draw_ulc(rng, ctx)
    return at_most(concavity.score_projection_residual(U, V), ctx.tol.projection, lam_u=lu, lam_v=lv)


@check('poisson-ulc-boundary', randomized=False)
def poisson_boundary(rng, ctx):
    """Poisson sits on the boundary of the class: every margin vanishes."""
    worst = 0.0
    for lam in ctx.suite.lambdas:
        report = concavity.is_ultra_log_concave(pmf_core.poisson(lam, ctx.policy))
        if not (report.passed and report.all_equal):
            return at_most(abs(report.min_margin), 0.0, lam=lam, **report.to_dict())
        worst = max(worst, abs(report.min_margin))
    return at_most(worst, ctx.tol.equality, lambdas=list(ctx.suite.lambdas))


@check('geometric-lc-boundary', randomized=False)
def geometric_boundary(rng, ctx):
    """Geometric masses are log-concave with equality, and not ultra log-concave."""
    G = pmf_core.geometric(0.3, ctx.policy)
    lc = concavity.is_log_concave(G)
    ulc = concavity.is_ultra_log_concave(G)
    ok = lc.passed and lc.all_equal and not ulc.passed
    return at_most(0.0 if ok else 1.0, 0.0, lc_all_equal=lc.all_equal, ulc=ulc.passed)


CHECKS = [
    score_equivalence,
    lc_closure,
    ulc_closure,
    flow_closure,
    bernoulli_order_n,
    variance_below_mean,
    conditional_tail,
    score_zero_mean,
    score_projection,
    poisson_boundary,
    geometric_boundary,
]
