"""Finite-support distributions on the non-negative integers.

Constructors (Poisson, binomial, geometric, point masses, normalized
weights), moments, convolution, generating functions and distances.
Infinite-support laws are truncated at the smallest index whose tail mass
falls below the policy threshold; the dropped tail is recorded as
``deficit`` and never renormalized away.
"""

from __future__ import annotations

from collections.abc import Sequence
import logging
import math

import numpy as np
from scipy import special, stats

from pmaxent.core.config.settings import resolve_policy
from pmaxent.core.domain.contracts import Pmf, TruncationPolicy
from pmaxent.core.domain.errors import ConstructionError, DomainError, TruncationOverflowError

logger = logging.getLogger(__name__)


def from_weights(weights: Sequence[float] | np.ndarray) -> Pmf:
    """Normalize non-negative weights into a mass function.

    Args:
        weights: finite, non-negative weights indexed from 0

    Returns:
        Pmf: normalized masses with zero deficit.

    Raises:
        ConstructionError: for empty, negative, non-finite or all-zero weights.

    Examples:
        >>> from_weights([1, 2, 1]).probs.tolist()
        [0.25, 0.5, 0.25]
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ConstructionError('weights must be a non-empty 1-d sequence')
    if not np.all(np.isfinite(w)):
        raise ConstructionError('weights must be finite')
    if np.any(w < 0.0):
        raise ConstructionError('weights must be non-negative')
    total = w.sum()
    if total <= 0.0:
        raise ConstructionError('weights are all zero')
    return Pmf(probs=w / total)


def point_mass(k: int) -> Pmf:
    """Point mass at ``k``.

    Examples:
        >>> point_mass(2).probs.tolist()
        [0.0, 0.0, 1.0]
    """
    if k < 0 or int(k) != k:
        raise DomainError(f'point mass needs a non-negative integer, got {k}')
    probs = np.zeros(int(k) + 1)
    probs[-1] = 1.0
    return Pmf(probs=probs)


def poisson_log_pmf(x: np.ndarray | int, lam: float) -> np.ndarray:
    """Analytic log mass of Poisson(lam) at ``x`` (log-gamma, no factorials)."""
    x = np.asarray(x, dtype=float)
    if lam == 0.0: return np.where(x == 0.0, 0.0, -np.inf)
    return special.xlogy(x, lam) - lam - special.gammaln(x + 1.0)


def _poisson_cutoff(lam: float, policy: TruncationPolicy) -> int:
    """Smallest N with P(Z > N) < tail_epsilon."""
    eps = policy.tail_epsilon
    guess = stats.poisson.isf(eps, lam)
    n = int(guess) - 1 if math.isfinite(guess) else 0
    n = max(n, 0)
    while n > 0 and stats.poisson.sf(n - 1, lam) < eps:
        n -= 1
    while stats.poisson.sf(n, lam) >= eps:
        n += 1
        if n > policy.max_support:
            raise TruncationOverflowError(
                f'poisson({lam}) needs more than max_support={policy.max_support} '
                f'points for tail_epsilon={eps}'
            )
    if n > policy.max_support:
        raise TruncationOverflowError(f'poisson({lam}) exceeds max_support={policy.max_support}')
    return n


def poisson(lam: float, policy: TruncationPolicy | None = None) -> Pmf:
    """Truncated Poisson mass function.

    Args:
        lam: rate, finite and >= 0
        policy: truncation policy (default policy if None)

    Returns:
        Pmf: masses ``exp(-lam) lam^x / x!`` on ``0..N`` with the tail in ``deficit``.

    Raises:
        DomainError: for negative or non-finite rate.
        TruncationOverflowError: if ``max_support`` is hit first.

    Examples:
        >>> round(poisson(1.0).probs[0], 7)
        0.3678794
    """
    if not math.isfinite(lam) or lam < 0.0:
        raise DomainError(f'poisson rate must be finite and >= 0, got {lam}')
    if lam == 0.0: return point_mass(0)
    policy = resolve_policy(policy)
    n = _poisson_cutoff(lam, policy)
    x = np.arange(n + 1)
    probs = np.exp(poisson_log_pmf(x, lam))
    deficit = float(stats.poisson.sf(n, lam))
    logger.debug('poisson(%g): N=%d deficit=%.3g', lam, n, deficit)
    return Pmf(probs=probs, deficit=deficit)


def binomial(n: int, p: float) -> Pmf:
    """Binomial(n, p) mass function.

    Examples:
        >>> binomial(2, 0.5).probs.tolist()
        [0.25, 0.5, 0.25]
    """
    if n < 1 or int(n) != n:
        raise DomainError(f'binomial needs a positive integer n, got {n}')
    if not 0.0 <= p <= 1.0:
        raise DomainError(f'binomial p must lie in [0, 1], got {p}')
    return Pmf(probs=stats.binom.pmf(np.arange(int(n) + 1), int(n), p))


def geometric(p: float, policy: TruncationPolicy | None = None) -> Pmf:
    """Truncated geometric mass function ``p (1 - p)^k`` on k = 0, 1, ...

    Args:
        p: success probability in (0, 1]
        policy: truncation policy (default policy if None)

    Returns:
        Pmf: truncated masses with tail ``(1 - p)^(N + 1)`` in ``deficit``.

    Examples:
        >>> geometric(0.5).probs[:3].tolist()
        [0.5, 0.25, 0.125]
    """
    if not 0.0 < p <= 1.0:
        raise DomainError(f'geometric p must lie in (0, 1], got {p}')
    if p == 1.0: return point_mass(0)
    policy = resolve_policy(policy)
    q = 1.0 - p
    # tail after N is q^(N+1)
    n = max(int(math.ceil(math.log(policy.tail_epsilon) / math.log(q))) - 1, 0)
    while n > 0 and q ** n < policy.tail_epsilon:
        n -= 1
    while q ** (n + 1) >= policy.tail_epsilon:
        n += 1
    if n > policy.max_support:
        raise TruncationOverflowError(
            f'geometric({p}) needs more than max_support={policy.max_support} points'
        )
    return Pmf(probs=p * np.power(q, np.arange(n + 1)), deficit=q ** (n + 1))


def mean(P: Pmf) -> float:
    """Sum of x P(x) over the represented support."""
    return float(np.dot(np.arange(len(P)), P.probs))


def variance(P: Pmf) -> float:
    """Second moment minus squared mean."""
    x = np.arange(len(P))
    return float(np.dot(x * x, P.probs)) - mean(P) ** 2


def falling_moment(P: Pmf, r: int) -> float:
    """r-th falling moment E X(X-1)...(X-r+1).

    Examples:
        >>> falling_moment(point_mass(3), 2)
        6.0
    """
    if r < 1 or int(r) != r:
        raise DomainError(f'falling moment order must be a positive integer, got {r}')
    x = np.arange(len(P), dtype=float)
    falling = np.zeros_like(x)
    mask = x >= r
    falling[mask] = special.poch(x[mask] - r + 1.0, int(r))
    return float(np.dot(falling, P.probs))


def convolve(P: Pmf, Q: Pmf, policy: TruncationPolicy | None = None) -> Pmf:
    """Law of the sum of independent P and Q.

    Deficits add. Results longer than ``max_support + 1`` are re-truncated,
    with the cut mass moved into the deficit.

    Raises:
        TruncationOverflowError: if re-truncation would drop more than tail_epsilon.
    """
    probs = np.convolve(P.probs, Q.probs)
    deficit = P.deficit + Q.deficit
    policy = resolve_policy(policy)
    if probs.size > policy.max_support + 1:
        cut = float(probs[policy.max_support + 1:].sum())
        if cut > policy.tail_epsilon:
            raise TruncationOverflowError(
                f'convolution support {probs.size - 1} exceeds max_support={policy.max_support} '
                f'with tail mass {cut:.3g}'
            )
        probs = probs[:policy.max_support + 1]
        deficit += cut
    return Pmf(probs=probs, deficit=deficit)


def pgf_eval(P: Pmf, t: float) -> float:
    """Probability generating function sum P(x) t^x (Horner)."""
    return float(np.polynomial.polynomial.polyval(t, P.probs))


def total_variation(P: Pmf, Q: Pmf) -> float:
    """Half the l1 distance, with the deficit difference folded in.

    Examples:
        >>> total_variation(point_mass(0), point_mass(1))
        1.0
    """
    size = max(len(P), len(Q))
    diff = np.abs(P.padded(size) - Q.padded(size)).sum()
    return float(0.5 * diff + 0.5 * abs(P.deficit - Q.deficit))


def convolution_power(P: Pmf, n: int, policy: TruncationPolicy | None = None) -> Pmf:
    """Law of the sum of ``n`` independent copies of ``P`` (binary powering).

    Examples:
        >>> convolution_power(binomial(1, 0.5), 2).probs.tolist()
        [0.25, 0.5, 0.25]
    """
    if n < 1 or int(n) != n:
        raise DomainError(f'convolution power needs a positive integer, got {n}')
    result, base, k = None, P, int(n)
    while k:
        if k & 1: result = base if result is None else convolve(result, base, policy)
        k >>= 1
        if k: base = convolve(base, base, policy)
    return result
