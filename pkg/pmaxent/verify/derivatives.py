"""Heat equation and closed-form derivatives along the flow.

Every closed form is compared with a Richardson-extrapolated finite
difference of the functional itself, evaluated on states truncated with
the oracle policy.
"""

from __future__ import annotations

import logging

import numpy as np

from pmaxent.core import flow, functionals, pmf_core, transforms
from pmaxent.core.domain.contracts import FlowPath
from pmaxent.core.utils import utils
from pmaxent.verify.base import CheckContext, Outcome, at_most, check, draw_ulc

logger = logging.getLogger(__name__)


def _lambda_value(P, lam):
    return functionals.lambda_functional(P, lam).value


def _divergence_value(P, lam):
    return functionals.poisson_divergence(P, lam).value


def _flowed(rng, ctx: CheckContext):
    X, lam = draw_ulc(rng, ctx)
    alpha = float(rng.choice(ctx.suite.alphas))
    return X, lam, alpha, transforms.u_map(X, alpha, lam, ctx.oracle)


def _against_oracle(formula: float, oracle: float, ctx: CheckContext, sign: int = 0, **details) -> Outcome:
    """Closed form within the derivative tolerance of the oracle, with an optional sign."""
    err = abs(formula - oracle)
    tol = ctx.tol.derivative_tol(oracle)
    passed = err <= tol and (sign == 0 or sign * formula >= -ctx.tol.class_slack)
    return Outcome(value=err, tolerance=tol, passed=passed, details={'formula': formula, 'oracle': oracle, **details})


@check('heat-equation')
def heat_equation(rng, ctx):
    X, lam = draw_ulc(rng, ctx)
    alpha = float(rng.choice(ctx.suite.alphas))
    h = ctx.fd.step
    residual = flow.heat_residual(X, FlowPath.u_flow(lam), alpha, h, ctx.oracle)
    return at_most(residual, ctx.tol.heat_residual, lam=lam, alpha=alpha, h=h)


@check('heat-richardson', weight=0.5)
def heat_richardson(rng, ctx):
    """Heat residuals shrink four-fold when the step halves, on both standard paths."""
    X, lam = draw_ulc(rng, ctx)
    alpha = 0.5
    ratios = {}
    for path in (FlowPath.u_flow(lam), FlowPath.constant_zero(lam)):
        ratios[path.kind] = flow.richardson_ratio(
            lambda h, path=path: flow.heat_residual(X, path, alpha, h, ctx.oracle), ctx.fd.richardson_step,
        )
    lo, hi = ctx.tol.richardson_low, ctx.tol.richardson_high
    worst = max(ratios.values(), key=lambda r: abs(r - 4.0))
    return Outcome(
        value=worst, tolerance=max(4.0 - lo, hi - 4.0),
        passed=all(lo <= r <= hi for r in ratios.values()), details={'lam': lam, **ratios},
    )


@check('heat-reformulations')
def heat_reformulations(rng, ctx):
    X, lam, alpha, P = _flowed(rng, ctx)
    score_form = flow.heat_rhs_score_form(P, lam, alpha)
    ratio_form = flow.heat_rhs_poisson_ratio_form(P, lam, alpha)
    direct = flow.heat_rhs(P, FlowPath.u_flow(lam), alpha)
    err = max(np.max(np.abs(score_form - ratio_form)), np.max(np.abs(score_form - direct)))
    scale = max(1.0, float(np.max(np.abs(direct))))
    return at_most(err, ctx.tol.reformulation * scale, lam=lam, alpha=alpha)


@check('d-lambda', weight=0.5)
def d_lambda(rng, ctx):
    X, lam, alpha, P = _flowed(rng, ctx)
    oracle = flow.extrapolated_difference(flow.along_flow(X, lam, _lambda_value, ctx.oracle), alpha, ctx.fd.step)
    return _against_oracle(flow.d_lambda_formula(P, lam, alpha), oracle, ctx, sign=-1, lam=lam, alpha=alpha)


@check('d-divergence', weight=0.5)
def d_divergence(rng, ctx):
    X, lam, alpha, P = _flowed(rng, ctx)
    oracle = flow.extrapolated_difference(flow.along_flow(X, lam, _divergence_value, ctx.oracle), alpha, ctx.fd.step)
    formula = flow.d_D_formula(P, lam, alpha)
    res = _against_oracle(formula, oracle, ctx, sign=1, lam=lam, alpha=alpha)
    score_form = flow.d_D_score_form(P, lam, alpha)
    if abs(score_form - formula) > ctx.tol.reformulation * max(1.0, abs(formula)):
        return at_most(abs(score_form - formula), ctx.tol.reformulation * max(1.0, abs(formula)), lam=lam, alpha=alpha)
    return res


@check('d2-lambda', weight=0.5)
def d2_lambda(rng, ctx):
    X, lam, alpha, P = _flowed(rng, ctx)
    oracle = flow.extrapolated_difference(
        flow.along_flow(X, lam, _lambda_value, ctx.oracle), alpha, ctx.fd.second_step, order=2,
    )
    return _against_oracle(flow.d2_lambda_formula(P, lam, alpha), oracle, ctx, sign=-1, lam=lam, alpha=alpha)


@check('d2-divergence', weight=0.5)
def d2_divergence(rng, ctx):
    X, lam, alpha, P = _flowed(rng, ctx)
    h = ctx.fd.second_step
    oracle = flow.extrapolated_difference(flow.along_flow(X, lam, _divergence_value, ctx.oracle), alpha, h, order=2)
    return _against_oracle(flow.d2_D_formula(P, lam, alpha, h=h), oracle, ctx, sign=1, lam=lam, alpha=alpha)


@check('d2-divergence-bounds')
def d2_divergence_bounds(rng, ctx):
    """Second derivative of D above the combined bound, itself above the simple one."""
    X, lam, alpha, P = _flowed(rng, ctx)
    exact = flow.d2_D_formula(P, lam, alpha)
    combined = flow.d2_D_combined_bound(P, lam, alpha)
    simple = flow.d2_D_lower_bound(P, lam, alpha)
    slack = ctx.tol.cramer_rao * max(1.0, abs(exact))
    margin = min(exact - combined, combined - simple)
    return Outcome(
        value=margin, tolerance=slack, passed=margin >= -slack,
        details={'lam': lam, 'alpha': alpha, 'exact': exact, 'combined': combined, 'simple': simple},
    )


@check('generator-duality')
def generator_duality(rng, ctx):
    X, lam, alpha, P = _flowed(rng, ctx)
    f = rng.normal(size=len(P) + 1)
    gap = flow.generator_duality_gap(P, lam, alpha, f)
    scale = max(1.0, float(np.abs(flow.heat_rhs_score_form(P, lam, alpha)) @ np.abs(f)))
    return at_most(gap, ctx.tol.reformulation * scale, lam=lam, alpha=alpha)


@check('entropy-curve-shape', weight=0.25)
def curve_shape(rng, ctx):
    """Entropy is non-increasing and concave along the flow."""
    X, lam = draw_ulc(rng, ctx)
    curve = flow.entropy_curve(X, lam, utils.uniform_grid(0.0, 1.0, ctx.suite.curve_points), ctx.policy)
    first, second = flow.curve_shape(curve)
    slack = functionals.deficit_budget(X, pmf_core.poisson(lam, ctx.policy))
    passed = first <= ctx.tol.curve_first + slack and second <= ctx.tol.curve_second + slack
    return Outcome(
        value=max(first, second), tolerance=ctx.tol.curve_second, passed=passed,
        details={'lam': lam, 'max_first_difference': first, 'max_second_difference': second},
    )


@check('entropy-strict-decrease')
def strict_decrease(rng, ctx):
    """Away from Poisson the derivative of Lambda at alpha = 1 is strictly negative."""
    X, lam = draw_ulc(rng, ctx)
    distance = pmf_core.total_variation(X, pmf_core.poisson(lam, ctx.policy))
    dL = flow.d_lambda_formula(X, lam, 1.0)
    if distance <= 1e-3: return at_most(0.0, 0.0, lam=lam, distance=distance, skipped=True)
    return Outcome(
        value=dL, tolerance=ctx.tol.strictness, passed=dL < -ctx.tol.strictness,
        details={'lam': lam, 'distance': distance},
    )


@check('poisson-fixed-point', randomized=False)
def fixed_point(rng, ctx):
    """Poisson does not move under the flow and its derivatives vanish."""
    worst = 0.0
    for lam in ctx.suite.lambdas:
        Z = pmf_core.poisson(lam, ctx.policy)
        for alpha in ctx.suite.alphas:
            U = transforms.u_map(Z, alpha, lam, ctx.policy)
            worst = max(
                worst,
                pmf_core.total_variation(U, Z),
                abs(flow.d_lambda_formula(U, lam, alpha)),
                abs(flow.d_D_formula(U, lam, alpha)),
            )
    return at_most(worst, ctx.tol.decomposition, lambdas=list(ctx.suite.lambdas), alphas=list(ctx.suite.alphas))


CHECKS = [
    heat_equation,
    heat_richardson,
    heat_reformulations,
    d_lambda,
    d_divergence,
    d2_lambda,
    d2_divergence,
    d2_divergence_bounds,
    generator_duality,
    curve_shape,
    strict_decrease,
    fixed_point,
]
