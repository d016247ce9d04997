"""I/O utilities for files, configuration and text formats.

This package contains:
- files: paths, folders and payload output
- param: YAML defaults loading and caching
- serialize: JSON mass functions and reports, CSV tables
"""
