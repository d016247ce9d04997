import logging

import pytest


def pytest_addoption(parser):

    parser.addoption(
        '--run-slow', action='store_true', default=False,
        help='Run slow tests (full verification suites)'
    )


def pytest_configure(config):
    """Register custom markers and configure pytest."""
    config.addinivalue_line(
        "markers",
        "slow: marks tests that run whole verification suites (requires --run-slow to run)",
    )

    # Let pmaxent loggers emit at the level pytest was asked to show
    log_cli_level = config.getoption('--log-cli-level', default=None)
    if log_cli_level:
        logging.getLogger('pmaxent').setLevel(getattr(logging, log_cli_level.upper(), logging.WARNING))


def pytest_collection_modifyitems(config, items):
    """Skip slow tests unless --run-slow flag is provided."""
    if config.getoption('--run-slow', default=False): return
    skip_slow = pytest.mark.skip(reason='Slow test skipped. Use --run-slow to enable.')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)
