"""Domain model of pmaxent.

This package contains the value objects and the error hierarchy:
- contracts: Value Objects (mass functions, policies, reports, flow paths)
- errors: exceptions mapped to command-line exit codes
"""

from pmaxent.core.domain import contracts, errors

__all__ = ['contracts', 'errors']
