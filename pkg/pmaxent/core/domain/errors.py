"""Exception hierarchy for pmaxent.

Every error derives from ``ValueError`` so callers catching the builtin keep
working; the subclasses let the command line map failures to exit codes.
"""


class PmaxentError(ValueError):
    """Base class of all pmaxent errors."""


class ConstructionError(PmaxentError):
    """Invalid weights, policy, mass vector or flow path."""


class TruncationOverflowError(PmaxentError):
    """Support cap reached before the tail mass fell below the threshold."""


class DomainError(PmaxentError):
    """Parameter outside its domain or support of the wrong shape."""


class ContractError(PmaxentError):
    """Input violates an operation contract, e.g. the preserved mean."""


class SamplerError(PmaxentError):
    """Random sampler could not produce a member of the requested class."""


class PropertyError(PmaxentError):
    """A checked identity or inequality does not hold."""
