"""Log-concavity classes, score functions and class members.

Predicates return a ``MarginReport`` whose truthiness is the verdict; the
raw margins ``lhs - rhs`` are kept so callers can see how close a mass
function sits to the boundary of its class. Inequalities are compared with
relative slack ``slack * max(1, |lhs|, |rhs|)``. Boundary terms that read
outside the support have a zero right-hand side and hold automatically.
"""

from __future__ import annotations

from collections.abc import Sequence
from functools import reduce
import logging
import math

import numpy as np
from scipy import special

from pmaxent.core import pmf_core
from pmaxent.core.config.settings import default_tolerances
from pmaxent.core.domain.contracts import MarginReport, Pmf, ScoreVector
from pmaxent.core.domain.errors import DomainError, SamplerError

logger = logging.getLogger(__name__)

# Successive sampled ratios shrink by at least this factor
RATIO_GAP = 1.0 - 1e-3
# Weights below this fraction of the largest are dropped by the sampler
WEIGHT_FLOOR = 1e-150
# Bisection on the log tilt
TILT_BRACKET_STEPS = 60
TILT_BISECT_STEPS = 200
TILT_MEAN_TOL = 1e-12


def require_interval(P: Pmf):
    """Raise unless the support of ``P`` is an interval."""
    if not P.is_interval:
        raise DomainError(f'support {P.support} of the mass function has interior zeros')


def _margin_report(lhs: np.ndarray, rhs: np.ndarray, indices: np.ndarray, slack: float) -> MarginReport:
    """Compare ``lhs >= rhs`` elementwise with relative slack."""
    if lhs.size == 0:
        return MarginReport(passed=True, min_margin=0.0, argmin=None, slack=slack, all_equal=True)
    margins = lhs - rhs
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    k = int(np.argmin(margins))
    return MarginReport(
        passed=bool(np.all(margins >= -slack * scale)),
        min_margin=float(margins[k]),
        argmin=int(indices[k]),
        slack=slack,
        all_equal=bool(np.all(np.abs(margins) <= default_tolerances().equality)),
        margins=margins,
        indices=indices,
    )


def _default_slack(slack: float | None) -> float:
    return default_tolerances().predicate_slack if slack is None else slack


def is_log_concave(P: Pmf, slack: float | None = None) -> MarginReport:
    """Check ``P(i)^2 >= P(i + 1) P(i - 1)`` at every interior index.

    Examples:
        >>> bool(is_log_concave(pmf_core.from_weights([0.25, 0.1, 0.65])))
        False
    """
    require_interval(P)
    u = P.padded(len(P) + 1)
    i = np.arange(1, len(P))
    return _margin_report(u[i] ** 2, u[i + 1] * u[i - 1], i, _default_slack(slack))


def is_ultra_log_concave(P: Pmf, slack: float | None = None) -> MarginReport:
    """Check ``i P(i)^2 >= (i + 1) P(i + 1) P(i - 1)`` for every i >= 1.

    The report flags ``all_equal`` exactly when every margin vanishes,
    which singles out the Poisson family.
    """
    require_interval(P)
    u = P.padded(len(P) + 1)
    i = np.arange(1, len(P))
    return _margin_report(i * u[i] ** 2, (i + 1) * u[i + 1] * u[i - 1], i, _default_slack(slack))


def ulc_order_n_margin(P: Pmf, n: int) -> np.ndarray:
    """Cross-multiplied margins of ultra log-concavity of order ``n``.

    ``margin_i = i P(i)^2 (n - i) - (i + 1)(n - i + 1) P(i + 1) P(i - 1)``
    for ``i = 1..n``; all non-negative iff ``P / C(n, .)`` is log-concave.

    Raises:
        DomainError: if the support extends beyond ``n``.
    """
    if n < 1 or int(n) != n:
        raise DomainError(f'order must be a positive integer, got {n}')
    if P.top > n:
        raise DomainError(f'support reaches {P.top}, beyond order {n}')
    u = P.padded(n + 2)
    i = np.arange(1, n + 1)
    return i * u[i] ** 2 * (n - i) - (i + 1) * (n - i + 1) * u[i + 1] * u[i - 1]


def is_ulc_of_order(P: Pmf, n: int, slack: float | None = None) -> MarginReport:
    """MarginReport form of ``ulc_order_n_margin``."""
    margins = ulc_order_n_margin(P, n)
    i = np.arange(1, n + 1)
    return _margin_report(margins, np.zeros_like(margins), i, _default_slack(slack))


def score(P: Pmf, lam: float) -> ScoreVector:
    """Scaled score ``(i + 1) P(i + 1) / (lam P(i)) - 1`` on the support.

    The top of the support reads ``P(hi + 1) = 0`` and scores -1.

    Raises:
        DomainError: for ``lam <= 0`` or non-interval support.
    """
    if not (math.isfinite(lam) and lam > 0.0):
        raise DomainError(f'score needs lam > 0, got {lam}')
    require_interval(P)
    lo, hi = P.support
    u = P.padded(hi + 2)
    i = np.arange(lo, hi + 1)
    return ScoreVector(values=(i + 1) * u[i + 1] / (lam * u[i]) - 1.0, lo=lo, lam=lam)


def is_score_decreasing(P: Pmf, lam: float) -> bool:
    """Whether the score is non-increasing along the support."""
    rho = score(P, lam).values
    if rho.size < 2: return True
    scale = np.maximum(1.0, np.maximum(np.abs(rho[:-1]), np.abs(rho[1:])))
    return bool(np.all(rho[1:] <= rho[:-1] + default_tolerances().score_slack * scale))


def bernoulli_sum(p_vec: Sequence[float]) -> Pmf:
    """Law of a sum of independent Bernoulli(p_i) counts.

    Examples:
        >>> np.round(bernoulli_sum([0.2, 0.7]).probs, 12).tolist()
        [0.24, 0.62, 0.14]
    """
    p = np.asarray(p_vec, dtype=float)
    if p.ndim != 1:
        raise DomainError('success probabilities must form a 1-d sequence')
    if np.any(~np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0):
        raise DomainError('success probabilities must lie in [0, 1]')
    if p.size == 0: return pmf_core.point_mass(0)
    probs = reduce(np.convolve, ([1.0 - pi, pi] for pi in p))
    return Pmf(probs=probs)


def _log_weights(ratios: np.ndarray) -> np.ndarray:
    """Log of ``prod_{j < i} r(j) / i!`` for i = 0..len(ratios)."""
    log_r = np.concatenate([[0.0], np.cumsum(np.log(ratios))])
    return log_r - special.gammaln(np.arange(ratios.size + 1) + 1.0)


def _tilted(log_w: np.ndarray, t: float) -> np.ndarray:
    """Normalized ``exp(log_w + i t)``."""
    z = log_w + t * np.arange(log_w.size)
    return np.exp(z - special.logsumexp(z))


def _tilted_mean(log_w: np.ndarray, t: float) -> float:
    return float(np.dot(np.arange(log_w.size), _tilted(log_w, t)))


def _solve_tilt(log_w: np.ndarray, lam: float) -> float:
    """Log tilt whose tilted mean is ``lam`` (monotone bisection)."""
    lo, hi = -1.0, 1.0
    for _ in range(TILT_BRACKET_STEPS):
        if _tilted_mean(log_w, lo) <= lam: break
        lo *= 2.0
    else:
        raise SamplerError(f'mean {lam} is below the reachable range')
    for _ in range(TILT_BRACKET_STEPS):
        if _tilted_mean(log_w, hi) >= lam: break
        hi *= 2.0
    else:
        raise SamplerError(f'mean {lam} is beyond the reachable range on {log_w.size} points')
    for _ in range(TILT_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        m = _tilted_mean(log_w, mid)
        if abs(m - lam) <= TILT_MEAN_TOL: return mid
        if m < lam: lo = mid
        else: hi = mid
    return 0.5 * (lo + hi)


def ulc_from_ratios(ratios: Sequence[float] | np.ndarray, lam: float) -> Pmf:
    """Ultra log-concave mass function with prescribed ratio shape and mean.

    The ratios ``r(i) = (i + 1) P(i + 1) / P(i)`` fix the shape; the result
    is the exponential tilt ``P(i) theta^i`` whose mean equals ``lam``.

    Args:
        ratios: positive, non-increasing ratios; their count is the top index
        lam: target mean, strictly between 0 and ``len(ratios)``

    Raises:
        SamplerError: for invalid ratios or an unreachable mean.
    """
    r = np.asarray(ratios, dtype=float)
    if r.ndim != 1 or r.size == 0:
        raise SamplerError('need at least one ratio')
    if np.any(~np.isfinite(r)) or np.any(r <= 0.0) or np.any(np.diff(r) > 0.0):
        raise SamplerError('ratios must be positive, finite and non-increasing')
    if not (math.isfinite(lam) and 0.0 < lam < r.size):
        raise SamplerError(f'mean {lam} unreachable on support 0..{r.size}')
    log_w = _log_weights(r)
    t = _solve_tilt(log_w, lam)
    w = _tilted(log_w, t)
    # dropping the far tails keeps every product in the normal float range
    w[w < WEIGHT_FLOOR * w.max()] = 0.0
    logger.debug('ulc_from_ratios: n=%d theta=%.6g', r.size, math.exp(t))
    return pmf_core.from_weights(w)


def random_ulc(lam: float, max_support: int, seed: int | np.random.Generator | None) -> Pmf:
    """Random ultra log-concave mass function with mean ``lam``.

    Ratios are sorted exponential draws, shrunk geometrically so they are
    strictly decreasing, then tilted to the requested mean.

    Args:
        lam: target mean, ``0 < lam < max_support``
        max_support: top index of the support
        seed: seed or generator; the draw is deterministic given it

    Raises:
        DomainError: for ``lam <= 0``.
        SamplerError: if the mean cannot be reached on the support.
    """
    if not (math.isfinite(lam) and lam > 0.0):
        raise DomainError(f'sampler needs lam > 0, got {lam}')
    if max_support < 1 or int(max_support) != max_support:
        raise DomainError(f'max_support must be a positive integer, got {max_support}')
    rng = np.random.default_rng(seed)
    ratios = np.sort(rng.exponential(size=int(max_support)))[::-1]
    ratios = ratios * RATIO_GAP ** np.arange(int(max_support))
    return ulc_from_ratios(ratios, lam)


def random_log_concave(max_support: int, seed: int | np.random.Generator | None) -> Pmf:
    """Random log-concave mass function on ``0..max_support``.

    Consecutive ratios ``P(i + 1) / P(i)`` are decreasing draws, so the
    result is log-concave without being ultra log-concave in general.
    """
    if max_support < 1 or int(max_support) != max_support:
        raise DomainError(f'max_support must be a positive integer, got {max_support}')
    rng = np.random.default_rng(seed)
    log_ratios = np.sort(rng.normal(scale=1.5, size=int(max_support)))[::-1]
    log_w = np.concatenate([[0.0], np.cumsum(log_ratios)])
    w = np.exp(log_w - log_w.max())
    w[w < WEIGHT_FLOOR] = 0.0
    return pmf_core.from_weights(w)


def score_projection_residual(U: Pmf, V: Pmf) -> float:
    """Largest deviation between the score of U + V and its projection.

    With ``a = mean(U) / (mean(U) + mean(V))`` the score of the sum equals
    ``E[a rho_U(U) + (1 - a) rho_V(V) | U + V = w]`` for independent U, V;
    the conditional expectation is a ratio of two convolutions.

    Raises:
        DomainError: for non-interval supports, supports not starting at 0
            or non-positive means.
    """
    for X in (U, V):
        require_interval(X)
        if X.support[0] != 0:
            raise DomainError('projection identity needs supports starting at 0')
    mu, mv = pmf_core.mean(U), pmf_core.mean(V)
    if mu <= 0.0 or mv <= 0.0:
        raise DomainError('projection identity needs positive means')
    a = mu / (mu + mv)
    rho_u = score(U, mu).dense(len(U))
    rho_v = score(V, mv).dense(len(V))
    W = pmf_core.convolve(U, V)
    rho_w = score(W, mu + mv).values
    joint = np.convolve(U.probs, V.probs)[:len(W)]
    weighted = (
        a * np.convolve(U.probs * rho_u[:len(U)], V.probs)
        + (1.0 - a) * np.convolve(U.probs, V.probs * rho_v[:len(V)])
    )[:len(W)]
    return float(np.max(np.abs(rho_w - weighted / joint)))


def conditional_tail_ratio(P: Pmf) -> float:
    """P(X >= 2) / P(X > 0).

    Raises:
        DomainError: if P(X > 0) = 0.
    """
    positive = float(P.probs[1:].sum())
    if positive <= 0.0:
        raise DomainError('conditional tail ratio needs P(X > 0) > 0')
    return float(P.probs[2:].sum()) / positive


def conditional_tail_bound(lam: float) -> float:
    """Upper bound ``(e^lam - lam - 1) / lam`` of the tail ratio on ULC(lam)."""
    if lam <= 0.0:
        raise DomainError(f'bound needs lam > 0, got {lam}')
    return (math.expm1(lam) - lam) / lam
