"""Differentiation along the mean-preserving flow.

Heat-equation residuals for any Poisson-rate path, closed forms of the
first and second alpha-derivatives of Lambda and D along ``u_map``, the
entropy curve over an alpha grid, and the finite-difference oracles every
closed form is cross-checked against.

Derivative formulas take the flowed state ``P = u_map(X, alpha, lam)``.
At the top of a truncated support the score is -1 and size-biased masses
vanish; terms whose logarithm would read such a zero are dropped.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
import logging
import math

import numpy as np
import pandas as pd
from scipy import special, stats

from pmaxent import const
from pmaxent.core import functionals, pmf_core, transforms
from pmaxent.core.concavity import score
from pmaxent.core.config.settings import default_tolerances, finite_difference, oracle_policy, resolve_policy
from pmaxent.core.domain.contracts import FlowCurve, FlowPath, Pmf, TruncationPolicy
from pmaxent.core.domain.errors import DomainError

logger = logging.getLogger(__name__)


def _check_alpha(alpha: float):
    if not (math.isfinite(alpha) and 0.0 < alpha <= 1.0):
        raise DomainError(f'derivatives need alpha in (0, 1], got {alpha}')


def _check_lam(lam: float):
    if not (math.isfinite(lam) and lam > 0.0):
        raise DomainError(f'lam must be finite and > 0, got {lam}')


def flowed_state(P: Pmf, path: FlowPath, alpha: float, policy: TruncationPolicy | None = None) -> Pmf:
    """State of ``P`` at ``alpha`` along ``path``: ``v_map(P, alpha, f(alpha))``."""
    return transforms.v_map(P, alpha, path.f(alpha), policy)


def heat_rhs(P_alpha: Pmf, path: FlowPath, alpha: float) -> np.ndarray:
    """Right-hand side ``g (P(z) - P(z-1)) - ((z+1) P(z+1) - z P(z)) / alpha`` on z = 0..top+1."""
    _check_alpha(alpha)
    n = len(P_alpha)
    u = P_alpha.padded(n + 1)
    z = np.arange(n + 1)
    shifted = np.concatenate([[0.0], u[:-1]])
    up = np.append(u[1:], 0.0)
    return path.g(alpha) * (u - shifted) - ((z + 1) * up - z * u) / alpha


def heat_residual(
    P: Pmf,
    path: FlowPath,
    alpha: float,
    h: float,
    policy: TruncationPolicy | None = None,
) -> float:
    """Largest deviation of the central difference in alpha from the heat equation.

    Args:
        P: starting mass function
        path: Poisson-rate path of the flow
        alpha: point of evaluation
        h: half-width of the central difference
        policy: truncation of the added Poisson counts

    Returns:
        float: ``max_z |(P_{a+h} - P_{a-h})(z) / 2h - RHS(z)|``.

    Raises:
        DomainError: unless ``0 < alpha - h`` and ``alpha + h <= 1``.
    """
    if not (h > 0.0 and alpha - h > 0.0 and alpha + h <= 1.0):
        raise DomainError(f'need 0 < alpha - h and alpha + h <= 1, got alpha={alpha}, h={h}')
    policy = resolve_policy(policy)
    mid = flowed_state(P, path, alpha, policy)
    up = flowed_state(P, path, alpha + h, policy)
    down = flowed_state(P, path, alpha - h, policy)
    rhs = heat_rhs(mid, path, alpha)
    size = max(len(up), len(down), rhs.size)
    diff = (up.padded(size) - down.padded(size)) / (2.0 * h)
    rhs = np.pad(rhs, (0, size - rhs.size))
    return float(np.max(np.abs(diff - rhs)))


def heat_rhs_score_form(P_alpha: Pmf, lam: float, alpha: float) -> np.ndarray:
    """``(lam / alpha) Delta*(P rho)`` on z = 0..top+1."""
    _check_alpha(alpha)
    return lam / alpha * functionals.delta_star(functionals.score_weighted_mass(P_alpha, lam))


def heat_rhs_poisson_ratio_form(P_alpha: Pmf, lam: float, alpha: float) -> np.ndarray:
    """``(lam / alpha) Delta*(Pi Delta(P / Pi))`` on z = 0..top+1."""
    _check_alpha(alpha)
    _check_lam(lam)
    z = np.arange(len(P_alpha) + 1)
    pi = stats.poisson.pmf(z, lam)
    ratio = P_alpha.padded(z.size) / pi
    flux = (pi * functionals.delta(ratio))[:len(P_alpha)]
    return lam / alpha * functionals.delta_star(flux)


def d_lambda_formula(P: Pmf, lam: float, alpha: float) -> float:
    """First alpha-derivative of Lambda: ``(lam/alpha) sum P rho log((z+1)/lam)``."""
    _check_alpha(alpha)
    _check_lam(lam)
    z = np.arange(len(P))
    flux = functionals.score_weighted_mass(P, lam)
    return float(lam / alpha * np.dot(flux, np.log((z + 1.0) / lam)))


def d2_lambda_formula(P: Pmf, lam: float, alpha: float) -> float:
    """Second alpha-derivative of Lambda.

    ``(lam/alpha)^2 sum P rho ((z/lam) log((z+1)/z) - log((z+2)/(z+1)))``
    with ``z log((z+1)/z)`` read as 0 at z = 0. Signed; non-positive for
    ultra log-concave flows.
    """
    _check_alpha(alpha)
    _check_lam(lam)
    z = np.arange(len(P), dtype=float)
    flux = functionals.score_weighted_mass(P, lam)
    z_log = np.zeros_like(z)
    z_log[1:] = z[1:] * np.log1p(1.0 / z[1:])
    weight = z_log / lam - np.log1p(1.0 / (z + 1.0))
    return float((lam / alpha) ** 2 * np.dot(flux, weight))


def d_D_formula(P: Pmf, lam: float, alpha: float) -> float:
    """First alpha-derivative of D(P || Poisson(lam)).

    ``(lam/alpha) symmetrized_kl(P, size_bias(P))`` over the common support.
    """
    _check_alpha(alpha)
    _check_lam(lam)
    return lam / alpha * functionals.symmetrized_kl(P, transforms.size_bias(P), common_support=True).value


def d_D_score_form(P: Pmf, lam: float, alpha: float) -> float:
    """Score form ``(lam/alpha) sum P rho log(1 + rho)``, skipping rho = -1."""
    _check_alpha(alpha)
    _check_lam(lam)
    rho = score(P, lam).dense(len(P))[:len(P)]
    keep = (P.probs > 0.0) & (rho > -1.0)
    return float(lam / alpha * np.dot(P.probs[keep] * rho[keep], np.log1p(rho[keep])))


def flow_derivative(P: Pmf, lam: float, alpha: float) -> np.ndarray:
    """Closed-form ``dP/dalpha = (lam/alpha) Delta*(P rho)`` on z = 0..top."""
    return heat_rhs_score_form(P, lam, alpha)[:len(P)]


def d2_D_formula(P: Pmf, lam: float, alpha: float, h: float | None = None) -> float:
    """Second alpha-derivative of D(P || Poisson(lam)).

    ``(lam/alpha)^2 sum (P2 - 2 P1 + P) log(P2 P / P1^2) + sum (dP/dalpha)^2 / P``
    with ``P1(z) = (z+1) P(z+1)/lam`` and ``P2(z) = (z+2)(z+1) P(z+2)/lam^2``.

    Args:
        P: flowed state
        lam: preserved mean
        alpha: point of evaluation
        h: optional finite-difference half-width the caller pairs this with;
            validated against (0, 1] when given

    Raises:
        DomainError: for alpha outside (0, 1] or ``alpha +- h`` outside (0, 1].
    """
    _check_alpha(alpha)
    _check_lam(lam)
    if h is not None and not (h > 0.0 and alpha - h > 0.0 and alpha + h <= 1.0):
        raise DomainError(f'need alpha +- h within (0, 1], got alpha={alpha}, h={h}')
    n = len(P)
    u = P.padded(n + 2)
    z = np.arange(n)
    p0 = u[z]
    p1 = (z + 1) * u[z + 1] / lam
    p2 = (z + 2) * (z + 1) * u[z + 2] / (lam * lam)
    keep = (p0 > 0.0) & (p1 > 0.0) & (p2 > 0.0)
    curvature = np.dot(
        (p2 - 2.0 * p1 + p0)[keep],
        np.log(p2[keep]) + np.log(p0[keep]) - 2.0 * np.log(p1[keep]),
    )
    dp = flow_derivative(P, lam, alpha)
    positive = p0 > 0.0
    fisher = np.sum(dp[positive] ** 2 / p0[positive])
    return float((lam / alpha) ** 2 * curvature + fisher)


def d2_D_lower_bound(P: Pmf, lam: float, alpha: float) -> float:
    """Lower bound ``(lam/alpha)^2 (S log S + 1 - S)`` of ``d2_D_formula``.

    ``S = E X(X-1) / lam^2``; the bound holds when ``variance(P) <= lam``.
    """
    _check_alpha(alpha)
    _check_lam(lam)
    s = pmf_core.falling_moment(P, 2) / (lam * lam)
    return float((lam / alpha) ** 2 * (special.xlogy(s, s) + 1.0 - s))


def d2_D_combined_bound(P: Pmf, lam: float, alpha: float) -> float:
    """Sharper bound ``(lam/alpha)^2 (S log S + (1 - S) CR1 + CR2 - 1/lam)``.

    Sits between ``d2_D_formula`` and ``d2_D_lower_bound`` for flowed states
    with ``variance <= lam``; the Cramer-Rao sums omit the truncation boundary.
    """
    _check_alpha(alpha)
    _check_lam(lam)
    s = pmf_core.falling_moment(P, 2) / (lam * lam)
    cr1 = functionals.cr_functional_1(P, lam)
    cr2 = functionals.cr_functional_2(P, lam, include_boundary=False)
    return float((lam / alpha) ** 2 * (special.xlogy(s, s) + (1.0 - s) * cr1 + cr2 - 1.0 / lam))


def generator_duality_gap(P: Pmf, lam: float, alpha: float, f: np.ndarray) -> float:
    """``|sum (dP/dalpha) f + (1/alpha) sum P (L f)|`` for a probe function ``f``.

    The flow derivative is minus the generator action scaled by ``1/alpha``.
    ``f`` is zero-extended (or cut) to z = 0..top+1.
    """
    _check_alpha(alpha)
    size = len(P) + 1
    f = np.asarray(f, dtype=float)
    probe = np.zeros(size)
    probe[:min(size, f.size)] = f[:size]
    dp = heat_rhs_score_form(P, lam, alpha)
    gen = functionals.mm_infty_generator(probe, lam)
    return float(abs(np.dot(dp, probe[:dp.size]) + np.dot(P.probs, gen[:len(P)]) / alpha))


def central_difference(fn: Callable[[float], float], alpha: float, h: float) -> float:
    """``(fn(a + h) - fn(a - h)) / 2h``."""
    return (fn(alpha + h) - fn(alpha - h)) / (2.0 * h)


def second_difference(fn: Callable[[float], float], alpha: float, h: float) -> float:
    """``(fn(a + h) - 2 fn(a) + fn(a - h)) / h^2``."""
    return (fn(alpha + h) - 2.0 * fn(alpha) + fn(alpha - h)) / (h * h)


def extrapolated_difference(fn: Callable[[float], float], alpha: float, h: float, order: int = 1) -> float:
    """Richardson-extrapolated central difference of order 1 or 2.

    Combines steps ``h`` and ``h / 2`` as ``(4 D(h/2) - D(h)) / 3``, which
    cancels the leading ``h^2`` error term.
    """
    if order not in (1, 2):
        raise ValueError(f'order must be 1 or 2, got {order}')
    diff = central_difference if order == 1 else second_difference
    return (4.0 * diff(fn, alpha, h / 2.0) - diff(fn, alpha, h)) / 3.0


def richardson_ratio(residual: Callable[[float], float], h: float) -> float:
    """``residual(h) / residual(h / 2)``; about 4 for second-order errors."""
    fine = residual(h / 2.0)
    if fine == 0.0: return math.nan
    return residual(h) / fine


def along_flow(
    X: Pmf,
    lam: float,
    functional: Callable[[Pmf, float], float],
    policy: TruncationPolicy | None = None,
) -> Callable[[float], float]:
    """``alpha -> functional(u_map(X, alpha, lam), lam)`` for finite differences."""
    policy = oracle_policy() if policy is None else policy

    def evaluate(alpha: float) -> float:
        return float(functional(transforms.u_map(X, alpha, lam, policy), lam))

    return evaluate


def _row(X: Pmf, lam: float, alpha: float, policy: TruncationPolicy, h: float) -> dict[str, float]:
    """One curve row; alpha = 0 is Poisson(lam) with undefined derivatives."""
    if alpha == 0.0:
        state = pmf_core.poisson(lam, policy)
        derivs = dict.fromkeys(['dLambda', 'dD', 'd2Lambda', 'd2D', 'heat_residual'], math.nan)
    else:
        state = transforms.u_map(X, alpha, lam, policy)
        derivs = {
            'dLambda': d_lambda_formula(state, lam, alpha),
            'dD': d_D_formula(state, lam, alpha),
            'd2Lambda': d2_lambda_formula(state, lam, alpha),
            'd2D': d2_D_formula(state, lam, alpha),
            'heat_residual': (
                heat_residual(X, FlowPath.u_flow(lam), alpha, h, policy)
                if alpha - h > 0.0 and alpha + h <= 1.0 else math.nan
            ),
        }
    H = functionals.entropy(state)
    Lam = functionals.lambda_functional(state, lam)
    D = functionals.poisson_divergence(state, lam)
    gap = abs(H.value - (Lam.value - D.value))
    if gap > default_tolerances().decomposition + H.deficit_budget:
        logger.warning('H != Lambda - D at alpha=%g: gap %.3g', alpha, gap)
    return {'alpha': alpha, 'H': H.value, 'Lambda': Lam.value, 'D': D.value, **derivs}


def entropy_curve(
    X: Pmf,
    lam: float,
    grid: Sequence[float] | np.ndarray,
    policy: TruncationPolicy | None = None,
    h: float | None = None,
) -> FlowCurve:
    """Entropy, Lambda, D and their derivatives along ``u_map`` over a grid.

    Every row is recomputed from ``X``, so rows are independent.

    Args:
        X: starting mass function with mean ``lam``
        lam: preserved mean
        grid: strictly increasing alphas within [0, 1]
        policy: truncation policy (default policy if None)
        h: half-width of the heat residual column (default first-derivative step)

    Returns:
        FlowCurve: one row per alpha, columns ``const.CURVE_COLS``.

    Raises:
        ContractError: if ``mean(X)`` differs from ``lam``.
        DomainError: for an invalid grid or rate.
    """
    _check_lam(lam)
    transforms.check_mean(X, lam)
    alphas = np.asarray(grid, dtype=float)
    if alphas.ndim != 1 or alphas.size == 0:
        raise DomainError('grid must be a non-empty 1-d sequence')
    if alphas[0] < 0.0 or alphas[-1] > 1.0 or np.any(np.diff(alphas) <= 0.0):
        raise DomainError('grid must be strictly increasing within [0, 1]')
    policy = resolve_policy(policy)
    h = finite_difference().step if h is None else h
    rows = [_row(X, lam, float(a), policy, h) for a in alphas]
    logger.info('entropy curve: %d rows, lam=%g', len(rows), lam)
    return FlowCurve(lam=lam, table=pd.DataFrame(rows, columns=const.CURVE_COLS))


def curve_shape(curve: FlowCurve) -> tuple[float, float]:
    """Largest first and second differences of the H column.

    Both are at most ~0 when H is non-increasing and concave on a uniform grid.
    """
    H = curve.column('H')
    first = float(np.max(np.diff(H))) if H.size > 1 else 0.0
    second = float(np.max(np.diff(H, 2))) if H.size > 2 else 0.0
    return first, second
