"""Configuration of pmaxent.

This package contains the packaged defaults:
- defaults.yml: truncation policies, tolerances, finite-difference steps, suite sizes
- settings: typed, cached access to them
"""

from pmaxent.core.config import settings

__all__ = ['settings']
