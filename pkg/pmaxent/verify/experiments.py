"""Desk-scale experiments behind the command line.

- ``accumulate``: n-fold sums of a small-mean member approaching Poisson in
  total variation (law of small numbers);
- ``maxent_probe``: random Bernoulli sums never beat the binomial entropy;
- ``checked_curve``: the entropy curve with its shape asserted.
"""

from __future__ import annotations

from collections.abc import Sequence
import logging
import math

import numpy as np
import pandas as pd

from pmaxent import const
from pmaxent.core import concavity, families, flow, functionals, pmf_core, transforms
from pmaxent.core.config.settings import default_tolerances
from pmaxent.core.domain.contracts import CaseResult, FlowCurve, Pmf, TruncationPolicy, VerificationReport
from pmaxent.core.domain.errors import DomainError, PropertyError

logger = logging.getLogger(__name__)

# Endpoint improvement the accumulation check asks for
ACCUMULATION_GAIN = 10.0


def _require_member(P: Pmf, mu: float, base: str):
    """Refuse a base member outside ULC(mu)."""
    report = concavity.is_ultra_log_concave(P)
    if not report:
        raise PropertyError(f'{base} member with mean {mu} is not ultra log-concave: margin {report.min_margin:.3g}')
    measured = pmf_core.mean(P)
    if abs(measured - mu) > transforms.mean_slack(P):
        raise PropertyError(f'{base} member has mean {measured!r}, expected {mu!r}')


def accumulate(
    lam: float,
    n_list: Sequence[int],
    base: str = 'bernoulli',
    policy: TruncationPolicy | None = None,
    strict: bool = False,
) -> pd.DataFrame:
    """Total variation between n-fold sums of a ULC(lam/n) member and Poisson(lam).

    Args:
        lam: target mean
        n_list: strictly increasing positive counts
        base: ``bernoulli``, ``poisson`` or ``binomial:m``
        policy: truncation policy
        strict: also require strict decrease and a ten-fold endpoint gain

    Returns:
        pd.DataFrame: columns ``n`` and ``tv``.

    Raises:
        ValueError: for an invalid count list or base.
        PropertyError: if the base has no member in ULC(lam/n) or the distances fail to decrease.

    Examples:
        >>> round(accumulate(1.0, [1])['tv'][0], 6)
        0.632121
    """
    if not (math.isfinite(lam) and lam > 0.0):
        raise ValueError(f'lambda must be finite and > 0, got {lam}')
    ns = [int(n) for n in n_list]
    if not ns or min(ns) < 1 or np.any(np.diff(ns) <= 0):
        raise ValueError(f'counts must be strictly increasing positive integers, got {list(n_list)}')
    make = families.mean_family(base)
    Z = pmf_core.poisson(lam, policy)
    rows, budgets = [], []
    for n in ns:
        try:
            member = make(lam / n)
        except DomainError as e:
            raise PropertyError(f'no {base} member with mean {lam / n}: {e}') from e
        _require_member(member, lam / n, base)
        S = pmf_core.convolution_power(member, n, policy)
        rows.append({'n': n, 'tv': pmf_core.total_variation(S, Z)})
        budgets.append(S.deficit + Z.deficit)
        logger.debug('accumulate n=%d: tv=%.6g', n, rows[-1]['tv'])
    table = pd.DataFrame(rows, columns=const.ACCUMULATE_COLS)
    _check_decrease(table['tv'].to_numpy(), np.asarray(budgets), strict)
    return table


def _check_decrease(tv: np.ndarray, budgets: np.ndarray, strict: bool):
    slack = default_tolerances().equality + budgets[1:] + budgets[:-1]
    step = np.diff(tv)
    bad = np.flatnonzero(step > slack)
    if bad.size:
        k = int(bad[0])
        raise PropertyError(f'total variation increases between rows {k} and {k + 1}: {tv[k]:.6g} -> {tv[k + 1]:.6g}')
    if not strict: return
    if np.any(step >= 0.0):
        k = int(np.flatnonzero(step >= 0.0)[0])
        raise PropertyError(f'total variation does not strictly decrease at row {k + 1}')
    if tv.size > 1 and tv[0] < ACCUMULATION_GAIN * tv[-1]:
        raise PropertyError(f'endpoint gain {tv[0] / tv[-1]:.3g} below {ACCUMULATION_GAIN:g}')


def capped_dirichlet(rng: np.random.Generator, n: int, lam: float) -> np.ndarray:
    """Success probabilities with sum ``lam``, each at most 1.

    A Dirichlet draw is scaled to ``lam``; mass above 1 is moved to the
    other coordinates in proportion to their headroom.
    """
    p = lam * rng.dirichlet(np.ones(n))
    over = p > 1.0
    if over.any():
        excess = float(np.sum(p[over] - 1.0))
        p[over] = 1.0
        room = np.where(over, 0.0, 1.0 - p)
        p = p + excess * room / room.sum()
    return np.minimum(p, 1.0)


def maxent_probe(
    n: int,
    lam: float,
    trials: int,
    seed: int,
    policy: TruncationPolicy | None = None,
) -> VerificationReport:
    """Compare random Bernoulli sums of mean ``lam`` with Binomial(n, lam/n).

    Args:
        n: number of Bernoulli counts
        lam: total mean, ``0 < lam < n``
        trials: number of random probability vectors
        seed: root seed; trial ``k`` draws from ``SeedSequence([seed, k])``
        policy: truncation of the Poisson reference

    Returns:
        VerificationReport: one case per trial plus the binomial-below-Poisson case.

    Raises:
        ValueError: unless ``0 < lam < n`` and ``trials >= 0``.
    """
    if n < 1 or int(n) != n:
        raise ValueError(f'n must be a positive integer, got {n}')
    if not (math.isfinite(lam) and 0.0 < lam < n):
        raise ValueError(f'need 0 < lambda < n, got lambda={lam}, n={n}')
    if trials < 0:
        raise ValueError(f'trials must be >= 0, got {trials}')
    tol = default_tolerances().maxent_bn
    H_b = functionals.entropy(pmf_core.binomial(n, lam / n)).value
    H_z = functionals.entropy(pmf_core.poisson(lam, policy)).value
    cases = [
        CaseResult(
            case_id='binomial-below-poisson', passed=H_b <= H_z + tol, value=H_b - H_z, tolerance=tol,
            details={'binomial_entropy': H_b, 'poisson_entropy': H_z},
        ),
    ]
    best, best_id, best_p = -math.inf, None, None
    for k in range(trials):
        p = capped_dirichlet(np.random.default_rng(np.random.SeedSequence([seed, k])), n, lam)
        H = functionals.entropy(concavity.bernoulli_sum(p)).value
        case_id = f'maxent-probe-{k:04d}'
        cases.append(CaseResult(
            case_id=case_id, passed=H <= H_b + tol and H <= H_z + tol,
            value=H - H_b, tolerance=tol, details={'p': p.tolist(), 'entropy': H},
        ))
        if H > best: best, best_id, best_p = H, case_id, p.tolist()
    for c in cases:
        if not c.passed: logger.warning('maxent probe case %s (seed %d) failed: %.6g', c.case_id, seed, c.value)
    summary = {
        'n': int(n),
        'lambda': float(lam),
        'trials': int(trials),
        'binomial_entropy': H_b,
        'poisson_entropy': H_z,
        'max_entropy': best if trials else None,
        'argmax': best_id,
        'argmax_p': best_p,
        'gap': H_b - best if trials else None,
    }
    return VerificationReport(
        suite='maxent-probe', cases=tuple(sorted(cases, key=lambda c: c.case_id)), seed=seed, summary=summary,
    )


def checked_curve(
    X: Pmf,
    lam: float,
    grid: Sequence[float] | np.ndarray,
    policy: TruncationPolicy | None = None,
    check: bool = False,
) -> FlowCurve:
    """Entropy curve of ``X``, optionally asserting membership and shape.

    Raises:
        ContractError: if ``mean(X)`` differs from ``lam``.
        PropertyError: with ``check``, for a non-ULC input or an entropy
            column that is not non-increasing and concave.
    """
    transforms.check_mean(X, lam)
    if check:
        report = concavity.is_ultra_log_concave(X)
        if not report:
            raise PropertyError(
                f'input is not ultra log-concave: margin {report.min_margin:.3g} at index {report.argmin}'
            )
    curve = flow.entropy_curve(X, lam, grid, policy)
    if check:
        tol = default_tolerances()
        slack = functionals.deficit_budget(X, pmf_core.poisson(lam, policy))
        first, second = flow.curve_shape(curve)
        if first > tol.curve_first + slack:
            raise PropertyError(f'entropy increases along the flow: largest step {first:.3g}')
        if second > tol.curve_second + slack:
            raise PropertyError(f'entropy is not concave along the flow: largest second difference {second:.3g}')
    return curve
