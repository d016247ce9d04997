"""Core contracts for discrete-distribution calculus.

This module defines the immutable Value Objects shared by the numeric
modules, the verification harness and the command line: mass functions,
truncation policy, score vectors, margin reports, functional values, flow
paths and curves, and verification reports.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from functools import partial
import math
from typing import Any

import numpy as np
import pandas as pd

from pmaxent import const
from pmaxent.core.domain.errors import ConstructionError


def _frozen_array(values: Any) -> np.ndarray:
    """Copy ``values`` into a read-only float array."""
    arr = np.array(values, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TruncationPolicy:
    """Truncation of infinite-support masses (Value Object).

    Attributes:
        tail_epsilon: Largest tail mass that may be dropped, in (0, 1e-6].
        max_support: Cap on the top index N of a truncated mass function.
    """
    tail_epsilon: float
    max_support: int

    def __post_init__(self):
        if not 0.0 < self.tail_epsilon <= 1e-6:
            raise ConstructionError(f'tail_epsilon must lie in (0, 1e-6], got {self.tail_epsilon}')
        if int(self.max_support) != self.max_support or self.max_support < 1:
            raise ConstructionError(f'max_support must be a positive integer, got {self.max_support}')


@dataclass(frozen=True, eq=False)
class Pmf:
    """Dense mass function on {0, ..., N} with recorded truncation deficit.

    Trailing exact zeros are dropped at construction, so ``probs[-1] > 0``
    and ``top == len(probs) - 1`` is the highest represented index.

    Attributes:
        probs: Read-only masses indexed from 0.
        deficit: Tail mass that was truncated away and not renormalized.

    Examples:
        >>> Pmf([0.25, 0.5, 0.25]).support
        (0, 2)
        >>> Pmf([0.0, 1.0, 0.0]).top
        1
    """
    probs: np.ndarray
    deficit: float = 0.0

    def __post_init__(self):
        try:
            arr = np.array(self.probs, dtype=float, copy=True)
        except (TypeError, ValueError) as e:
            raise ConstructionError(f'probs must be numbers: {e}') from e
        if arr.ndim != 1 or arr.size == 0:
            raise ConstructionError('probs must be a non-empty 1-d sequence')
        if not np.all(np.isfinite(arr)):
            raise ConstructionError('probs must be finite')
        if np.any(arr < 0.0):
            raise ConstructionError(f'probs must be non-negative, min = {arr.min()!r}')
        nonzero = np.flatnonzero(arr)
        if nonzero.size == 0:
            raise ConstructionError('probs carry no positive mass')
        deficit = float(self.deficit)
        if not math.isfinite(deficit) or deficit < 0.0:
            raise ConstructionError(f'deficit must be finite and >= 0, got {deficit!r}')
        arr = arr[:nonzero[-1] + 1]
        total = float(arr.sum()) + deficit
        if abs(total - 1.0) > const.NORM_TOL:
            raise ConstructionError(f'sum(probs) + deficit = {total!r} is not 1 within {const.NORM_TOL}')
        object.__setattr__(self, 'probs', _frozen_array(arr))
        object.__setattr__(self, 'deficit', deficit)

    def __len__(self) -> int:
        """Number of represented indices, top + 1."""
        return int(self.probs.size)

    @property
    def top(self) -> int:
        """Highest represented index."""
        return int(self.probs.size) - 1

    @property
    def support(self) -> tuple[int, int]:
        """Indices ``(lo, hi)`` of the first and last positive mass."""
        nonzero = np.flatnonzero(self.probs)
        return int(nonzero[0]), int(nonzero[-1])

    @property
    def is_interval(self) -> bool:
        """Whether masses are strictly positive exactly on ``[lo, hi]``."""
        lo, hi = self.support
        return bool(np.all(self.probs[lo:hi + 1] > 0.0))

    @property
    def mass(self) -> float:
        """Represented mass, ``1 - deficit`` up to rounding."""
        return float(self.probs.sum())

    def at(self, x: int) -> float:
        """Mass at ``x``, zero outside the represented range."""
        if 0 <= x < self.probs.size: return float(self.probs[x])
        return 0.0

    def padded(self, size: int) -> np.ndarray:
        """Masses zero-padded (never cut) to length ``size``."""
        out = np.zeros(max(size, self.probs.size))
        out[:self.probs.size] = self.probs
        return out

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready form ``{"probs": [...], "deficit": x}``."""
        return {'probs': [float(p) for p in self.probs], 'deficit': float(self.deficit)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Pmf:
        """Inverse of ``to_dict``.

        Raises:
            ConstructionError: if ``probs`` is missing or the masses are invalid.
        """
        if 'probs' not in data:
            raise ConstructionError('mass function JSON needs a "probs" list')
        return cls(probs=data['probs'], deficit=data.get('deficit', 0.0))


@dataclass(frozen=True, eq=False)
class MassSequence:
    """Unnormalized non-negative sequence with its recorded total.

    Attributes:
        values: Read-only masses indexed from 0.
        total: Sum of ``values``.
    """
    values: np.ndarray
    total: float

    def __post_init__(self):
        object.__setattr__(self, 'values', _frozen_array(self.values))
        object.__setattr__(self, 'total', float(self.total))


@dataclass(frozen=True, eq=False)
class ScoreVector:
    """Scaled score on the support interval of a mass function.

    ``values[k]`` is the score at index ``lo + k``; the last entry is the
    top-of-support value -1.

    Attributes:
        values: Read-only scores.
        lo: First support index.
        lam: Rate used in the denominator.
    """
    values: np.ndarray
    lo: int
    lam: float

    def __post_init__(self):
        object.__setattr__(self, 'values', _frozen_array(self.values))

    @property
    def hi(self) -> int:
        """Last support index."""
        return self.lo + int(self.values.size) - 1

    def at(self, i: int) -> float:
        """Score at index ``i`` of the support."""
        if not self.lo <= i <= self.hi:
            raise IndexError(f'index {i} outside support [{self.lo}, {self.hi}]')
        return float(self.values[i - self.lo])

    def dense(self, size: int) -> np.ndarray:
        """Scores laid out on ``0..size-1``, zero off the support."""
        out = np.zeros(max(size, self.hi + 1))
        out[self.lo:self.hi + 1] = self.values
        return out


@dataclass(frozen=True, eq=False)
class MarginReport:
    """Outcome of an inequality checked at every index (Value Object).

    Attributes:
        passed: Whether every margin clears its slack band.
        min_margin: Smallest raw margin ``lhs - rhs``.
        argmin: Index of the smallest margin, ``None`` when nothing was checked.
        slack: Relative slack the check was run with.
        all_equal: Whether every margin is zero within the equality tolerance.
        margins: Raw margins, aligned with ``indices``.
        indices: Indices the margins refer to.
    """
    passed: bool
    min_margin: float
    argmin: int | None
    slack: float
    all_equal: bool = False
    margins: np.ndarray = field(default_factory=lambda: np.zeros(0))
    indices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))

    def __bool__(self) -> bool:
        """Verdict of the check."""
        return bool(self.passed)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready form ``{"pass", "min_margin", "argmin", "slack"}``."""
        return {
            'pass': bool(self.passed),
            'min_margin': float(self.min_margin),
            'argmin': None if self.argmin is None else int(self.argmin),
            'slack': float(self.slack),
        }


@dataclass(frozen=True)
class FunctionalValue:
    """Computed information functional in nats.

    Attributes:
        value: Functional value; ``math.inf`` signals an infinite divergence.
        deficit_budget: Truncation slack to add to any tolerance on ``value``.
    """
    value: float
    deficit_budget: float = 0.0

    def __float__(self) -> float:
        """Plain float value."""
        return float(self.value)

    @property
    def is_infinite(self) -> bool:
        """Whether the value is the infinite-divergence signal."""
        return math.isinf(self.value)


def _zero(alpha: float) -> float:
    return 0.0


def _u_flow_rate(alpha: float, lam: float) -> float:
    return lam * (1.0 - alpha)


def _u_flow_drift(alpha: float, lam: float) -> float:
    return lam / alpha


# Probe grid and step for the consistency check of custom paths
PATH_PROBES = (0.1, 0.3, 0.5, 0.7, 0.9)
PATH_STEP = 1e-6
PATH_TOL = 1e-6


@dataclass(frozen=True)
class FlowPath:
    """Poisson-rate path of a thinning-plus-Poisson flow.

    The flowed state at ``alpha`` is ``v_map(P, alpha, f(alpha))`` and its
    heat equation carries the drift ``g(alpha) = f(alpha)/alpha - f'(alpha)``.

    Attributes:
        lam: Preserved mean of the flow.
        kind: One of ``constant-zero``, ``u-flow``, ``custom``.
        f: Poisson rate as a function of alpha.
        g: Drift as a function of alpha.
    """
    lam: float
    kind: str
    f: Callable[[float], float]
    g: Callable[[float], float]

    def __post_init__(self):
        if self.kind not in ('constant-zero', 'u-flow', 'custom'):
            raise ConstructionError(f'unknown path kind {self.kind!r}')
        if not math.isfinite(self.lam) or self.lam < 0.0:
            raise ConstructionError(f'path mean must be finite and >= 0, got {self.lam}')
        if self.kind != 'custom': return
        for alpha in PATH_PROBES:
            slope = (self.f(alpha + PATH_STEP) - self.f(alpha - PATH_STEP)) / (2.0 * PATH_STEP)
            expected = self.f(alpha) / alpha - slope
            if abs(self.g(alpha) - expected) > PATH_TOL:
                raise ConstructionError(
                    f'g({alpha}) = {self.g(alpha)!r} inconsistent with f/alpha - df/dalpha = {expected!r}'
                )

    @classmethod
    def constant_zero(cls, lam: float = 0.0) -> FlowPath:
        """Pure thinning: no Poisson rate, no drift."""
        return cls(lam=lam, kind='constant-zero', f=_zero, g=_zero)

    @classmethod
    def u_flow(cls, lam: float) -> FlowPath:
        """Mean-preserving flow with ``f = lam(1 - alpha)`` and ``g = lam/alpha``."""
        return cls(
            lam=lam, kind='u-flow',
            f=partial(_u_flow_rate, lam=lam), g=partial(_u_flow_drift, lam=lam),
        )

    @classmethod
    def custom(cls, lam: float, f: Callable[[float], float], g: Callable[[float], float]) -> FlowPath:
        """Caller-supplied path, checked for consistency on a probe grid."""
        return cls(lam=lam, kind='custom', f=f, g=g)


@dataclass(frozen=True, eq=False)
class FlowCurve:
    """Per-alpha functionals and derivatives along the mean-preserving flow.

    Attributes:
        lam: Preserved mean.
        table: One row per alpha with columns ``const.CURVE_COLS``.
    """
    lam: float
    table: pd.DataFrame

    def __post_init__(self):
        missing = [c for c in const.CURVE_COLS if c not in self.table.columns]
        if missing:
            raise ConstructionError(f'curve table misses columns {missing}')
        alphas = self.table['alpha'].to_numpy(dtype=float)
        if alphas.size and (alphas[0] < 0.0 or alphas[-1] > 1.0 or np.any(np.diff(alphas) <= 0.0)):
            raise ConstructionError('curve grid must be strictly increasing within [0, 1]')

    def column(self, name: str) -> np.ndarray:
        """Column as a float array."""
        return self.table[name].to_numpy(dtype=float)


@dataclass(frozen=True)
class CaseResult:
    """Outcome of one randomized or fixed check.

    Attributes:
        case_id: Stable identifier, ``<check>-<index>``.
        passed: Whether the check held.
        value: Residual or margin that was compared.
        tolerance: Tolerance ``value`` was compared against.
        details: Inputs needed to replay the case.
    """
    case_id: str
    passed: bool
    value: float
    tolerance: float
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready form."""
        return {
            'id': self.case_id,
            'pass': bool(self.passed),
            'value': _json_float(self.value),
            'tolerance': _json_float(self.tolerance),
            'details': {k: _json_value(v) for k, v in self.details.items()},
        }


@dataclass(frozen=True)
class VerificationReport:
    """Machine-readable outcome of a verification run.

    Attributes:
        suite: Suite name.
        cases: Case results, sorted by case id.
        seed: Seed the run was driven by.
        wall_time: Seconds spent, excluded from JSON unless asked for.
        summary: Suite-level numbers, e.g. the largest observed entropy.
    """
    suite: str
    cases: tuple[CaseResult, ...]
    seed: int
    wall_time: float = 0.0
    summary: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """Overall pass: every case passed (vacuously true when empty)."""
        return all(c.passed for c in self.cases)

    def failures(self) -> list[CaseResult]:
        """Failing cases in report order."""
        return [c for c in self.cases if not c.passed]

    def to_dict(self, include_timing: bool = False) -> dict[str, Any]:
        """JSON-ready form with a stable key order.

        Args:
            include_timing: add ``wall_time``; off by default so reports are byte-stable.
        """
        res = {
            'suite': self.suite,
            'seed': int(self.seed),
            'pass': self.passed,
            'n_cases': len(self.cases),
            'n_failed': len(self.failures()),
            'summary': {k: _json_value(v) for k, v in self.summary.items()},
            'cases': [c.to_dict() for c in self.cases],
        }
        if include_timing: res['wall_time'] = float(self.wall_time)
        return res


def _json_float(x: float) -> float | str:
    """Floats for JSON; non-finite values become strings."""
    x = float(x)
    if math.isfinite(x): return x
    return str(x)


def _json_value(v: Any) -> Any:
    if isinstance(v, (bool, np.bool_)): return bool(v)
    if isinstance(v, (int, np.integer)): return int(v)
    if isinstance(v, (float, np.floating)): return _json_float(v)
    if isinstance(v, (list, tuple, np.ndarray)): return [_json_value(x) for x in v]
    if isinstance(v, dict): return {k: _json_value(x) for k, x in v.items()}
    return v
