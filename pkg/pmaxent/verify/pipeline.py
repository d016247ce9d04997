"""Verification pipeline running named suites of checks.

Each suite is a ``SuiteConfig`` built by a factory; ``VerificationPipeline``
plans the cases, seeds every case independently and assembles a
``VerificationReport`` whose content depends only on the seed.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
import logging
import time

import numpy as np

from pmaxent import const
from pmaxent.core.domain.contracts import CaseResult, VerificationReport
from pmaxent.core.domain.errors import PmaxentError
from pmaxent.verify import algebra, classes, cramer_rao, derivatives, maxent
from pmaxent.verify.base import Check, CheckContext

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuiteConfig:
    """Configuration of one suite.

    Attributes:
        name: Suite name as accepted by the command line.
        checks: Checks in run order.
    """
    name: str
    checks: tuple[Check, ...]


@dataclass(frozen=True)
class PlannedCase:
    """One case of one check.

    Attributes:
        suite: Suite the check belongs to.
        check: The check.
        check_index: Position of the check across all suites, part of its seed.
        case: Case number within the check.
    """
    suite: str
    check: Check
    check_index: int
    case: int

    @property
    def case_id(self) -> str:
        """Stable id ``<check>-<case:04d>``."""
        return f'{self.check.name}-{self.case:04d}'


def algebra_suite_config() -> SuiteConfig:
    """Thinning, Poisson addition and flow identities."""
    return SuiteConfig(name='algebra', checks=tuple(algebra.CHECKS))


def concavity_suite_config() -> SuiteConfig:
    """Membership and closure of the concavity classes."""
    return SuiteConfig(name='concavity-classes', checks=tuple(classes.CHECKS))


def derivatives_suite_config() -> SuiteConfig:
    """Heat equation and flow derivatives against finite differences."""
    return SuiteConfig(name='flow-derivatives', checks=tuple(derivatives.CHECKS))


def maxent_suite_config() -> SuiteConfig:
    """Maximum-entropy inequalities."""
    return SuiteConfig(name='maxent', checks=tuple(maxent.CHECKS))


def cramer_rao_suite_config() -> SuiteConfig:
    """Discrete Cramer-Rao sums."""
    return SuiteConfig(name='cramer-rao', checks=tuple(cramer_rao.CHECKS))


SUITE_CONFIGS: dict[str, Callable[[], SuiteConfig]] = {
    'algebra': algebra_suite_config,
    'concavity-classes': concavity_suite_config,
    'flow-derivatives': derivatives_suite_config,
    'maxent': maxent_suite_config,
    'cramer-rao': cramer_rao_suite_config,
}


def suite_configs(suite: str) -> list[SuiteConfig]:
    """Configs of a named suite, or of every suite in order for ``all``.

    Raises:
        ValueError: for an unknown suite name.
    """
    if suite == const.ALL_SUITES: return [SUITE_CONFIGS[name]() for name in const.SUITES]
    if suite not in SUITE_CONFIGS:
        raise ValueError(f'unknown suite {suite!r}; expected one of {[*const.SUITES, const.ALL_SUITES]}')
    return [SUITE_CONFIGS[suite]()]


def _check_indices() -> dict[str, int]:
    """Position of every check across all suites; names are unique."""
    names = [c.name for cfg in suite_configs(const.ALL_SUITES) for c in cfg.checks]
    return {name: i for i, name in enumerate(names)}


class VerificationPipeline:
    """Runs suites of checks with per-case seeding (Template Method)."""

    def __init__(self, suite: str, ctx: CheckContext | None = None):
        """Initialize pipeline.

        Args:
            suite: Suite name or ``all``.
            ctx: Numeric settings (defaults file if None).
        """
        self.suite = suite
        self.configs = suite_configs(suite)
        self.ctx = CheckContext.from_defaults() if ctx is None else ctx

    def run(self, seed: int, cases: int | None = None, only: str | None = None) -> VerificationReport:
        """Execute the pipeline.

        Args:
            seed: Root seed of every case generator.
            cases: Randomized cases per check (suite default if None).
            only: Replay a single case id.

        Returns:
            VerificationReport with cases sorted by id.
        """
        cases = self.ctx.suite.cases if cases is None else cases
        if cases < 0:
            raise ValueError(f'case count must be >= 0, got {cases}')
        start = time.perf_counter()

        # Step 1: Plan cases
        planned = self._plan(cases)
        if only is not None:
            planned = [p for p in planned if p.case_id == only]
            if not planned:
                raise ValueError(f'case id {only!r} is not part of suite {self.suite!r} with {cases} cases')

        # Step 2: Execute
        results = [self._execute(p, seed) for p in planned]

        # Step 3: Assemble
        results.sort(key=lambda r: r.case_id)
        report = VerificationReport(
            suite=self.suite,
            cases=tuple(results),
            seed=seed,
            wall_time=time.perf_counter() - start,
            summary=self._summarize(planned, results),
        )
        logger.info(
            'suite %s: %d cases, %d failed in %.2fs',
            self.suite, len(results), len(report.failures()), report.wall_time,
        )
        return report

    def _plan(self, cases: int) -> list[PlannedCase]:
        indices = _check_indices()
        return [
            PlannedCase(suite=cfg.name, check=c, check_index=indices[c.name], case=k)
            for cfg in self.configs
            for c in cfg.checks
            for k in range(c.n_cases(cases) if cases else 0)
        ]

    def _execute(self, planned: PlannedCase, seed: int) -> CaseResult:
        rng = np.random.default_rng(np.random.SeedSequence([seed, planned.check_index, planned.case]))
        try:
            outcome = planned.check.fn(rng, self.ctx)
        except PmaxentError as e:
            logger.warning('case %s (seed %d) raised %s: %s', planned.case_id, seed, type(e).__name__, e)
            return CaseResult(
                case_id=planned.case_id, passed=False, value=float('nan'), tolerance=float('nan'),
                details={'suite': planned.suite, 'error': f'{type(e).__name__}: {e}'},
            )
        if not outcome.passed:
            logger.warning(
                'case %s (seed %d) failed: value %.6g vs tolerance %.3g',
                planned.case_id, seed, outcome.value, outcome.tolerance,
            )
        return CaseResult(
            case_id=planned.case_id,
            passed=outcome.passed,
            value=outcome.value,
            tolerance=outcome.tolerance,
            details={'suite': planned.suite, **outcome.details},
        )

    @staticmethod
    def _summarize(planned: list[PlannedCase], results: list[CaseResult]) -> dict:
        by_id = {r.case_id: r for r in results}
        checks: dict[str, dict[str, int]] = {}
        for p in planned:
            entry = checks.setdefault(p.check.name, {'cases': 0, 'failed': 0})
            entry['cases'] += 1
            entry['failed'] += int(not by_id[p.case_id].passed)
        return {
            'checks': checks,
            'failed_checks': sorted(name for name, v in checks.items() if v['failed']),
        }


def run_suite(suite: str, seed: int, cases: int | None = None, only: str | None = None) -> VerificationReport:
    """Run a named suite with the packaged defaults.

    Examples:
        >>> run_suite('cramer-rao', seed=3, cases=2).passed
        True
    """
    return VerificationPipeline(suite).run(seed=seed, cases=cases, only=only)
