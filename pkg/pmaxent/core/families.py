"""Named distribution families.

Two grammars feed the command line:

- ``family:param,param`` builds one member, e.g. ``binomial:20,0.25``;
- a base name (``bernoulli``, ``poisson``, ``binomial:m``) builds the member
  with a given mean, for the accumulation experiment.
"""

from __future__ import annotations

from collections.abc import Callable
import logging

from pmaxent.core import concavity, pmf_core
from pmaxent.core.domain.contracts import Pmf, TruncationPolicy
from pmaxent.core.domain.errors import DomainError
from pmaxent.core.utils import utils

logger = logging.getLogger(__name__)


def _arity(name: str, params: list[float], n: int):
    if len(params) != n:
        raise ValueError(f'{name} takes {n} parameter(s), got {len(params)}')


def _as_int(name: str, v: float) -> int:
    if not float(v).is_integer():
        raise ValueError(f'{name} needs an integer, got {v}')
    return int(v)


def _poisson(params, policy):
    _arity('poisson', params, 1)
    return pmf_core.poisson(params[0], policy)


def _binomial(params, policy):
    _arity('binomial', params, 2)
    return pmf_core.binomial(_as_int('binomial', params[0]), params[1])


def _geometric(params, policy):
    _arity('geometric', params, 1)
    return pmf_core.geometric(params[0], policy)


def _bernoulli(params, policy):
    _arity('bernoulli', params, 1)
    return pmf_core.binomial(1, params[0])


def _bernoulli_sum(params, policy):
    return concavity.bernoulli_sum(params)


def _point(params, policy):
    _arity('point', params, 1)
    return pmf_core.point_mass(_as_int('point', params[0]))


def _ulc(params, policy):
    _arity('ulc', params, 3)
    return concavity.random_ulc(params[0], _as_int('ulc', params[1]), _as_int('ulc', params[2]))


FAMILIES: dict[str, Callable[[list[float], TruncationPolicy | None], Pmf]] = {
    'poisson': _poisson,
    'binomial': _binomial,
    'geometric': _geometric,
    'bernoulli': _bernoulli,
    'bernoulli-sum': _bernoulli_sum,
    'point': _point,
    'ulc': _ulc,
}


def parse_family(spec: str, policy: TruncationPolicy | None = None) -> Pmf:
    """Build a member from ``family:param,param``.

    Args:
        spec: e.g. ``'binomial:20,0.25'`` or ``'poisson:3'``
        policy: truncation policy for infinite-support families

    Returns:
        Pmf: the member.

    Raises:
        ValueError: for an unknown family or malformed parameters.

    Examples:
        >>> parse_family('binomial:2,0.5').probs.tolist()
        [0.25, 0.5, 0.25]
    """
    name, _, rest = spec.partition(':')
    name = name.strip().lower()
    if name not in FAMILIES:
        raise ValueError(f'unknown family {name!r}; expected one of {sorted(FAMILIES)}')
    return FAMILIES[name](utils.parse_floats(rest), policy)


def mean_family(base: str) -> Callable[[float], Pmf]:
    """Constructor ``mean -> member`` of an accumulation base.

    Args:
        base: ``'bernoulli'``, ``'poisson'`` or ``'binomial:m'``

    Returns:
        Callable: builds the member with the given mean.

    Raises:
        ValueError: for an unknown base or malformed order.
    """
    name, _, rest = base.partition(':')
    name = name.strip().lower()
    if name == 'bernoulli' and not rest:
        return lambda mu: pmf_core.binomial(1, _probability(mu, 1))
    if name == 'poisson' and not rest:
        return pmf_core.poisson
    if name == 'binomial':
        orders = utils.parse_ints(rest)
        if len(orders) != 1 or orders[0] < 1:
            raise ValueError(f'binomial base needs a positive order, e.g. binomial:4, got {base!r}')
        m = orders[0]
        return lambda mu: pmf_core.binomial(m, _probability(mu, m))
    raise ValueError(f'unknown base {base!r}; expected bernoulli, poisson or binomial:m')


def _probability(mu: float, m: int) -> float:
    """Success probability giving mean ``mu`` with ``m`` trials."""
    p = mu / m
    if not 0.0 <= p <= 1.0:
        raise DomainError(f'mean {mu} is out of reach of {m} Bernoulli trials')
    return p
