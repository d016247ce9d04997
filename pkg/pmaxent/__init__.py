"""Discrete-distribution calculus for the Poisson maximum-entropy property.

Main entry point for pmaxent. Numeric modules live in ``pmaxent.core``
(``from pmaxent.core import pmf_core, transforms, ...``); verification
suites and experiments in ``pmaxent.verify``; the ``pmaxent`` command line
in ``pmaxent.cli``.
"""

from importlib.metadata import PackageNotFoundError, version
import logging

try:
    __version__ = version("pmaxent")
except PackageNotFoundError:
    __version__ = "0+unknown"

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())
logger.setLevel(logging.WARNING)

from pmaxent.core import concavity, flow, functionals, pmf_core, transforms  # noqa: E402

__all__ = ['__version__', 'concavity', 'flow', 'functionals', 'pmf_core', 'transforms']
