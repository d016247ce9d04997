"""Verification suites and experiments.

This package contains:
- base: check registry, context and outcome helpers
- algebra, classes, derivatives, maxent, cramer_rao: the check suites
- pipeline: suite configs and the verification pipeline
- experiments: accumulation, maximum-entropy probe, checked curves
"""
