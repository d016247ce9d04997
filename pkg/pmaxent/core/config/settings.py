"""Typed access to the packaged defaults.

The YAML in ``defaults.yml`` is the single source of numeric defaults:
truncation policies, tolerances, finite-difference steps and suite sizes.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from functools import lru_cache
import logging
from typing import Any

from pmaxent.core.domain.contracts import TruncationPolicy
from pmaxent.io import param

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tolerances:
    """Numeric tolerances of the verification checks.

    Attributes mirror the ``tolerances`` section of ``defaults.yml``.
    """
    mean_match: float
    predicate_slack: float
    score_slack: float
    equality: float
    class_slack: float
    thinning_tv: float
    composition_tv: float
    pgf: float
    moment: float
    projection: float
    decomposition: float
    maxent: float
    maxent_bn: float
    cramer_rao: float
    log_sum: float
    reformulation: float
    derivative_rel: float
    derivative_abs: float
    heat_residual: float
    richardson_low: float
    richardson_high: float
    curve_first: float
    curve_second: float
    strictness: float

    def derivative_tol(self, reference: float) -> float:
        """Relative tolerance around ``reference`` with an absolute floor."""
        return self.derivative_rel * abs(reference) + self.derivative_abs


@dataclass(frozen=True)
class FiniteDifference:
    """Steps of the finite-difference oracles.

    Attributes:
        step: Central-difference step of first derivatives.
        second_step: Step of second differences.
        richardson_step: Coarse step of the Richardson pair (fine step is half).
    """
    step: float
    second_step: float
    richardson_step: float


@dataclass(frozen=True)
class SuiteDefaults:
    """Sizes and parameter sets of the verification suites.

    Attributes:
        cases: Default randomized cases per check.
        lambdas: Means the samplers draw at.
        max_support: Support cap of sampled ULC members.
        alphas: Thinning parameters of the algebraic checks.
        betas: Poisson rates of the algebraic checks.
        curve_points: Grid points of curve-shape checks.
    """
    cases: int
    lambdas: tuple[float, ...]
    max_support: int
    alphas: tuple[float, ...]
    betas: tuple[float, ...]
    curve_points: int


def _build(cls, data: dict[str, Any]):
    """Instantiate a settings dataclass, rejecting unknown or missing keys."""
    names = {f.name for f in fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise KeyError(f'unknown {cls.__name__} keys: {sorted(unknown)}')
    missing = names - set(data)
    if missing:
        raise KeyError(f'missing {cls.__name__} keys: {sorted(missing)}')
    kwargs = {k: tuple(v) if isinstance(v, list) else v for k, v in data.items()}
    return cls(**kwargs)


@lru_cache(maxsize=1)
def default_policy() -> TruncationPolicy:
    """Truncation policy of library calls without an explicit policy."""
    return TruncationPolicy(**param.load_config('policy')['default'])


@lru_cache(maxsize=1)
def oracle_policy() -> TruncationPolicy:
    """Tighter policy for finite-difference work."""
    return TruncationPolicy(**param.load_config('policy')['oracle'])


@lru_cache(maxsize=1)
def default_tolerances() -> Tolerances:
    """Tolerances of the verification checks."""
    return _build(Tolerances, param.load_config('tolerances'))


@lru_cache(maxsize=1)
def finite_difference() -> FiniteDifference:
    """Finite-difference steps."""
    return _build(FiniteDifference, param.load_config('finite_difference'))


@lru_cache(maxsize=1)
def suite_defaults() -> SuiteDefaults:
    """Suite sizes and parameter sets."""
    return _build(SuiteDefaults, param.load_config('suites'))


def resolve_policy(policy: TruncationPolicy | None) -> TruncationPolicy:
    """Explicit policy, or the default one."""
    return default_policy() if policy is None else policy
