"""Thinning, Poisson addition and the mean-preserving flow.

``thin`` replaces a count by a binomial(count, alpha) draw, ``add_poisson``
adds an independent Poisson count, ``v_map`` composes them and ``u_map``
fixes the Poisson rate so the mean is preserved:
``u_map(P, alpha, lam) = add_poisson(thin(P, alpha), lam (1 - alpha))``.
Also size-biasing and its second-order variant.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy import stats

from pmaxent.core import pmf_core
from pmaxent.core.config.settings import default_tolerances
from pmaxent.core.domain.contracts import MassSequence, Pmf, TruncationPolicy
from pmaxent.core.domain.errors import ContractError, DomainError

logger = logging.getLogger(__name__)


def _check_alpha(alpha: float):
    if not (math.isfinite(alpha) and 0.0 <= alpha <= 1.0):
        raise DomainError(f'alpha must lie in [0, 1], got {alpha}')


def thin(P: Pmf, alpha: float) -> Pmf:
    """Binomial thinning T_alpha.

    ``(T P)(z) = sum_{x >= z} P(x) C(x, z) alpha^z (1 - alpha)^(x - z)``,
    summed exactly row by row. The deficit is carried unchanged.

    Args:
        P: mass function
        alpha: retention probability in [0, 1]

    Returns:
        Pmf: thinned masses, support no longer than that of ``P``.
    """
    _check_alpha(alpha)
    if alpha == 1.0: return Pmf(probs=P.probs, deficit=P.deficit)
    if alpha == 0.0: return Pmf(probs=[P.mass], deficit=P.deficit)
    x = np.arange(len(P))
    # kernel[x, z] = Binom(x, alpha) mass at z
    kernel = stats.binom.pmf(x[np.newaxis, :], x[:, np.newaxis], alpha)
    return Pmf(probs=P.probs @ kernel, deficit=P.deficit)


def add_poisson(P: Pmf, beta: float, policy: TruncationPolicy | None = None) -> Pmf:
    """Add an independent Poisson(beta) count: S_beta."""
    if not (math.isfinite(beta) and beta >= 0.0):
        raise DomainError(f'poisson rate must be finite and >= 0, got {beta}')
    if beta == 0.0: return Pmf(probs=P.probs, deficit=P.deficit)
    return pmf_core.convolve(P, pmf_core.poisson(beta, policy), policy)


def v_map(P: Pmf, alpha: float, beta: float, policy: TruncationPolicy | None = None) -> Pmf:
    """Thin by ``alpha``, then add Poisson(``beta``)."""
    return add_poisson(thin(P, alpha), beta, policy)


def mean_slack(P: Pmf) -> float:
    """Mean tolerance widened by the truncated tail of ``P``."""
    return default_tolerances().mean_match + P.deficit * len(P)


def check_mean(P: Pmf, lam: float, what: str = 'input'):
    """Refuse a mass function whose mean is not ``lam``.

    Raises:
        ContractError: naming the measured mean.
    """
    measured = pmf_core.mean(P)
    if not math.isfinite(lam) or abs(measured - lam) > mean_slack(P):
        raise ContractError(f'{what} has mean {measured!r}, expected {lam!r}')


def u_map(P: Pmf, alpha: float, lam: float, policy: TruncationPolicy | None = None) -> Pmf:
    """Mean-preserving map U_alpha.

    Interpolates from ``P`` at ``alpha = 1`` to Poisson(lam) at ``alpha = 0``
    and composes multiplicatively: ``U_a U_b = U_ab``.

    Args:
        P: mass function with mean ``lam``
        alpha: parameter in [0, 1]
        lam: preserved mean
        policy: truncation policy of the added Poisson count

    Raises:
        ContractError: if ``mean(P)`` differs from ``lam``.
    """
    _check_alpha(alpha)
    check_mean(P, lam)
    return v_map(P, alpha, lam * (1.0 - alpha), policy)


def flowed_variance(var: float, lam: float, alpha: float) -> float:
    """Variance of U_alpha X from Var X: ``alpha^2 var + lam (1 - alpha^2)``."""
    return alpha * alpha * var + lam * (1.0 - alpha * alpha)


def size_bias(P: Pmf) -> Pmf:
    """Size-biased law ``(z + 1) P(z + 1) / mean(P)``.

    Raises:
        DomainError: for zero mean.

    Examples:
        >>> size_bias(pmf_core.binomial(2, 0.5)).probs.tolist()
        [0.5, 0.5]
    """
    lam = pmf_core.mean(P)
    if lam <= 0.0:
        raise DomainError('size-biasing needs a positive mean')
    z = np.arange(1, len(P))
    return Pmf(probs=z * P.probs[1:] / lam)


def size_bias2(P: Pmf) -> MassSequence:
    """Second-order size bias ``(z + 2)(z + 1) P(z + 2) / mean(P)^2``.

    The total ``S = E X(X - 1) / mean^2`` need not be 1, so the result is
    an unnormalized sequence with its total recorded.

    Raises:
        DomainError: for zero mean or vanishing second falling moment.
    """
    lam = pmf_core.mean(P)
    if lam <= 0.0:
        raise DomainError('size-biasing needs a positive mean')
    if pmf_core.falling_moment(P, 2) <= 0.0:
        raise DomainError('second-order size bias needs E X(X-1) > 0')
    z = np.arange(2, len(P))
    values = z * (z - 1) * P.probs[2:] / (lam * lam)
    return MassSequence(values=values, total=float(values.sum()))
