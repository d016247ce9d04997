"""Supporting utilities of pmaxent.

This package contains:
- utils: grid and list grammars of the command line
"""

from pmaxent.core.utils import utils

__all__ = ['utils']
