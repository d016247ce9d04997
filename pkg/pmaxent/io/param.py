"""Parameter/config file helpers for pmaxent.

Utilities to locate the packaged defaults YAML (or an override named by
``PMAXENT_CONFIG``) and load it with caching.
"""

from functools import lru_cache
import os
from pathlib import Path
from typing import Any

from ruamel.yaml import YAML

from pmaxent.io import files

PKG_PATH = files.abspath(__file__, 1)

# Environment variable naming an alternative defaults file
CONFIG_ENV = 'PMAXENT_CONFIG'

_yaml = YAML(typ='safe')
_yaml.allow_duplicate_keys = False


def config_file() -> str:
    """Path of the active defaults file.

    Returns:
        str: ``$PMAXENT_CONFIG`` if it names an existing file, else the packaged YAML.
    """
    override = os.environ.get(CONFIG_ENV, '')
    if override and files.exists(override): return Path(override).as_posix()
    return (Path(PKG_PATH) / 'core' / 'config' / 'defaults.yml').as_posix()


@lru_cache(maxsize=8)
def load_yaml(yaml_file: str) -> dict[str, Any]:
    """Load YAML from cache.

    Args:
        yaml_file: YAML file name

    Returns:
        dict: Parsed YAML content (empty dict for an empty file).
    """
    with open(yaml_file) as fp:
        return _yaml.load(fp) or {}


def load_config(section: str = '') -> dict[str, Any]:
    """Load the active defaults, optionally a single section.

    Args:
        section: top-level key, e.g. ``'tolerances'``; empty for everything

    Returns:
        dict: Configuration mapping.

    Examples:
        >>> load_config('policy')['default']['max_support']
        4096
    """
    cfg = load_yaml(config_file())
    if not section: return cfg
    if section not in cfg:
        raise KeyError(f'section {section!r} missing from {config_file()}')
    return cfg[section]
