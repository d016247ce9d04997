"""Building blocks shared by the verification suites.

A check is a function of a random generator and a ``CheckContext`` that
returns an ``Outcome``; the pipeline turns outcomes into ``CaseResult``
entries with stable case ids.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
import logging
from typing import Any, Protocol

import numpy as np

from pmaxent.core import concavity, functionals
from pmaxent.core.config import settings
from pmaxent.core.domain.contracts import MarginReport, Pmf, TruncationPolicy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckContext:
    """Numeric settings a check runs with.

    Attributes:
        tol: Tolerances of the checks.
        fd: Finite-difference steps.
        suite: Sampler sizes and parameter sets.
        policy: Truncation policy of ordinary computations.
        oracle: Tighter policy for finite differences.
    """
    tol: settings.Tolerances
    fd: settings.FiniteDifference
    suite: settings.SuiteDefaults
    policy: TruncationPolicy
    oracle: TruncationPolicy

    @classmethod
    def from_defaults(cls) -> CheckContext:
        """Context built from the active defaults file."""
        return cls(
            tol=settings.default_tolerances(),
            fd=settings.finite_difference(),
            suite=settings.suite_defaults(),
            policy=settings.default_policy(),
            oracle=settings.oracle_policy(),
        )


@dataclass(frozen=True)
class Outcome:
    """Result of one evaluation of a check.

    Attributes:
        value: Residual or margin that was compared.
        tolerance: Tolerance it was compared against.
        passed: Verdict.
        details: Inputs and intermediate numbers worth reporting.
    """
    value: float
    tolerance: float
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)


class CheckFunction(Protocol):
    """Signature of a check."""

    def __call__(self, rng: np.random.Generator, ctx: CheckContext) -> Outcome:
        """Evaluate one case.

        Args:
            rng: Generator seeded for this case only.
            ctx: Numeric settings.

        Returns:
            Outcome of the case.
        """
        ...


@dataclass(frozen=True)
class Check:
    """Registered check.

    Attributes:
        name: Stable name, prefix of its case ids.
        fn: Check function.
        randomized: Whether the check runs once per case or just once.
        weight: Share of the case count run by expensive checks.
    """
    name: str
    fn: CheckFunction
    randomized: bool = True
    weight: float = 1.0

    def n_cases(self, cases: int) -> int:
        """Number of cases given the suite case count."""
        if not self.randomized: return 1
        return max(1, int(round(cases * self.weight)))


def check(name: str, randomized: bool = True, weight: float = 1.0) -> Callable[[CheckFunction], Check]:
    """Decorator turning a check function into a ``Check``."""

    def wrap(fn: CheckFunction) -> Check:
        return Check(name=name, fn=fn, randomized=randomized, weight=weight)

    return wrap


def at_most(value: float, tolerance: float, **details) -> Outcome:
    """Outcome of ``value <= tolerance``."""
    return Outcome(value=float(value), tolerance=float(tolerance), passed=bool(value <= tolerance), details=details)


def at_least(value: float, bound: float, slack: float, **details) -> Outcome:
    """Outcome of ``value >= bound - slack``, reporting the margin ``value - bound``."""
    margin = float(value) - float(bound)
    return Outcome(value=margin, tolerance=float(slack), passed=bool(margin >= -slack), details=details)


def draw_lambda(rng: np.random.Generator, ctx: CheckContext) -> float:
    """One of the configured means."""
    return float(rng.choice(ctx.suite.lambdas))


def draw_ulc(rng: np.random.Generator, ctx: CheckContext, lam: float | None = None) -> tuple[Pmf, float]:
    """Random ultra log-concave member and its mean."""
    lam = draw_lambda(rng, ctx) if lam is None else lam
    return concavity.random_ulc(lam, ctx.suite.max_support, rng), lam


def draw_weights(rng: np.random.Generator, size: int) -> np.ndarray:
    """Positive random weights bounded away from zero."""
    return rng.uniform(0.05, 1.0, size=size)


def budget(*pmfs: Pmf) -> float:
    """Truncation allowance of a comparison between ``pmfs``."""
    return functionals.deficit_budget(*pmfs)


def from_report(report: MarginReport, **details) -> Outcome:
    """Outcome of a class predicate, reporting its smallest margin."""
    return Outcome(
        value=float(report.min_margin),
        tolerance=float(report.slack),
        passed=bool(report.passed),
        details={'argmin': report.argmin, **details},
    )
