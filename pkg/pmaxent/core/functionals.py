"""Entropy and information functionals, in nats.

Entropy H, the Poisson cross-entropy Lambda, relative entropy D and its
symmetrized form, the two Cramer-Rao sums, and the difference operators
Delta / Delta* with the M/M/infinity generator built from them.

Every functional reports a ``deficit_budget``: the truncated mass of its
inputs times ``max(1, log(support size))``, to be added to any tolerance.
The 0 log 0 = 0 convention holds throughout; divergences with a support
mismatch return ``inf`` instead of raising.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy import special

from pmaxent.core import pmf_core
from pmaxent.core.concavity import require_interval, score
from pmaxent.core.domain.contracts import FunctionalValue, Pmf
from pmaxent.core.domain.errors import DomainError

logger = logging.getLogger(__name__)


def deficit_budget(*pmfs: Pmf) -> float:
    """Combined deficits scaled by the log of the largest support."""
    size = max(len(P) for P in pmfs)
    return sum(P.deficit for P in pmfs) * max(1.0, math.log(size))


def _check_lam(lam: float):
    if not (math.isfinite(lam) and lam > 0.0):
        raise DomainError(f'lam must be finite and > 0, got {lam}')


def entropy(P: Pmf) -> FunctionalValue:
    """Shannon entropy ``-sum P log P``.

    Examples:
        >>> round(entropy(pmf_core.from_weights([1, 1])).value, 6)
        0.693147
    """
    return FunctionalValue(value=float(special.entr(P.probs).sum()), deficit_budget=deficit_budget(P))


def lambda_functional(P: Pmf, lam: float) -> FunctionalValue:
    """Cross-entropy against Poisson(lam): ``sum P(x) (lam - x log lam + log x!)``."""
    _check_lam(lam)
    return FunctionalValue(
        value=float(-np.dot(P.probs, pmf_core.poisson_log_pmf(np.arange(len(P)), lam))),
        deficit_budget=deficit_budget(P),
    )


def relative_entropy(P: Pmf, Q: Pmf) -> FunctionalValue:
    """Relative entropy ``sum P log(P / Q)``; ``inf`` where Q misses mass of P."""
    size = max(len(P), len(Q))
    value = float(special.rel_entr(P.padded(size), Q.padded(size)).sum())
    return FunctionalValue(value=value, deficit_budget=deficit_budget(P, Q))


def poisson_divergence(P: Pmf, lam: float) -> FunctionalValue:
    """Relative entropy to Poisson(lam) against the analytic log mass.

    Unlike ``relative_entropy(P, poisson(lam))`` this is not limited by the
    truncation of the reference.
    """
    _check_lam(lam)
    log_pi = pmf_core.poisson_log_pmf(np.arange(len(P)), lam)
    positive = P.probs > 0.0
    value = float(np.dot(P.probs[positive], np.log(P.probs[positive]) - log_pi[positive]))
    return FunctionalValue(value=value, deficit_budget=deficit_budget(P))


def symmetrized_kl(P: Pmf, Q: Pmf, common_support: bool = False) -> FunctionalValue:
    """Symmetrized divergence ``sum (P - Q) log(P / Q)``.

    Args:
        P: mass function
        Q: mass function
        common_support: sum only where both masses are positive. Always on
            when either input carries a deficit, since their truncation tops
            need not agree; for exact inputs a one-sided mismatch yields ``inf``

    Returns:
        FunctionalValue: ``D(P||Q) + D(Q||P)``.
    """
    size = max(len(P), len(Q))
    p, q = P.padded(size), Q.padded(size)
    if common_support or P.deficit > 0.0 or Q.deficit > 0.0:
        both = (p > 0.0) & (q > 0.0)
        value = float(np.dot(p[both] - q[both], np.log(p[both] / q[both])))
    else:
        value = float(special.rel_entr(p, q).sum() + special.rel_entr(q, p).sum())
    return FunctionalValue(value=value, deficit_budget=deficit_budget(P, Q))


def log_sum_gap(a: np.ndarray, b: np.ndarray) -> float:
    """``sum a log(a / b) - (sum a) log(sum a / sum b)``, non-negative.

    Raises:
        DomainError: unless both sequences are positive and of equal length.
    """
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.shape != b.shape or a.size == 0 or np.any(a <= 0.0) or np.any(b <= 0.0):
        raise DomainError('log-sum inequality needs two positive sequences of equal length')
    sa, sb = a.sum(), b.sum()
    return float(special.rel_entr(a, b).sum() - sa * math.log(sa / sb))


def _require_from_zero(P: Pmf):
    require_interval(P)
    if P.support[0] != 0:
        raise DomainError(f'support {P.support} must start at 0')


def cr_functional_1(P: Pmf, lam: float) -> float:
    """First Cramer-Rao sum ``sum_z (z + 1)^2 P(z + 1)^2 / (lam^2 P(z))``.

    At least 1 when ``mean(P) = lam``, with equality only for Poisson(lam);
    equals ``1 + sum P rho^2``.

    Raises:
        DomainError: unless the support is an interval starting at 0.
    """
    _check_lam(lam)
    _require_from_zero(P)
    u = P.padded(len(P) + 1)
    z = np.arange(len(P))
    return float(np.sum((z + 1.0) ** 2 * u[z + 1] ** 2 / (lam * lam * u[z])))


def cr_functional_2(P: Pmf, lam: float, include_boundary: bool = True) -> float:
    """Second Cramer-Rao sum ``sum_{z >= 1} P(z - 1)^2 / (z P(z))``.

    At least ``1 / lam`` when ``mean(P) = lam``, equality only for Poisson.
    For a genuinely finite support (zero deficit) the term just above the
    top divides by a vanishing mass and the sum is ``inf``; truncated inputs
    omit it, as does ``include_boundary=False``.

    Raises:
        DomainError: unless the support is an interval starting at 0.
    """
    _check_lam(lam)
    _require_from_zero(P)
    if include_boundary and P.deficit == 0.0: return math.inf
    z = np.arange(1, len(P))
    return float(np.sum(P.probs[z - 1] ** 2 / (z * P.probs[z])))


def delta(f: np.ndarray) -> np.ndarray:
    """Forward difference ``f(x + 1) - f(x)`` for x = 0..n-1 (zero beyond n-1).

    Examples:
        >>> delta(np.array([1.0, 3.0, 6.0])).tolist()
        [2.0, 3.0, -6.0]
    """
    f = np.asarray(f, dtype=float)
    return np.append(f[1:], 0.0) - f


def delta_star(f: np.ndarray) -> np.ndarray:
    """Adjoint difference ``f(x - 1) - f(x)`` for x = 0..n.

    Examples:
        >>> delta_star(np.array([1.0])).tolist()
        [-1.0, 1.0]
    """
    f = np.asarray(f, dtype=float)
    return np.concatenate([[0.0], f]) - np.append(f, 0.0)


def mm_infty_generator(f: np.ndarray, lam: float) -> np.ndarray:
    """M/M/infinity generator ``-lam (Delta Delta* f) + (z - lam)(Delta* f)``.

    Equivalently ``lam (f(z + 1) - f(z)) + z (f(z - 1) - f(z))``, for the
    zero-extension of ``f``; returned on z = 0..n.
    """
    ds = delta_star(f)
    z = np.arange(ds.size)
    return -lam * delta(ds) + (z - lam) * ds


def score_weighted_mass(P: Pmf, lam: float) -> np.ndarray:
    """``P rho`` laid out on 0..top, the flux of the heat equation."""
    return P.probs * score(P, lam).dense(len(P))[:len(P)]
