"""Utility helpers for parsing command-line grammars.

Follows Google-style docstrings as per docs/docstring_style.rst.
"""

from __future__ import annotations

import math

import numpy as np

# Grid points are rounded to this many decimals so 0.1 * 3 prints as 0.3
GRID_DECIMALS = 12


def parse_floats(text: str, sep: str = ',') -> list[float]:
    """Split and convert a list of floats.

    Args:
        text: e.g. ``'0.2,0.7'``
        sep: separator

    Returns:
        list: floats in order.

    Examples:
        >>> parse_floats('0.2, 0.7')
        [0.2, 0.7]
        >>> parse_floats('')
        []
    """
    if not text.strip(): return []
    try:
        return [float(t) for t in text.split(sep)]
    except ValueError as e:
        raise ValueError(f'cannot parse {text!r} as numbers') from e


def parse_ints(text: str, sep: str = ',') -> list[int]:
    """Split and convert a list of integers.

    Examples:
        >>> parse_ints('1,2,4')
        [1, 2, 4]
    """
    res = []
    for v in parse_floats(text, sep=sep):
        if not v.is_integer():
            raise ValueError(f'{v} is not an integer')
        res.append(int(v))
    return res


def parse_grid(spec: str) -> np.ndarray:
    """Parse an inclusive ``lo:hi:step`` grid.

    Args:
        spec: grid specification, e.g. ``'0.05:1:0.05'``

    Returns:
        np.ndarray: ``lo, lo + step, ..., hi`` (hi included when on the lattice).

    Examples:
        >>> parse_grid('0.25:1:0.25').tolist()
        [0.25, 0.5, 0.75, 1.0]
        >>> len(parse_grid('0.05:1:0.05'))
        20
    """
    parts = parse_floats(spec, sep=':')
    if len(parts) != 3:
        raise ValueError(f'grid must read lo:hi:step, got {spec!r}')
    lo, hi, step = parts
    if not all(map(math.isfinite, parts)) or step <= 0.0 or hi < lo:
        raise ValueError(f'grid needs finite lo <= hi and step > 0, got {spec!r}')
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(n), GRID_DECIMALS)


def uniform_grid(lo: float, hi: float, points: int) -> np.ndarray:
    """``points`` equally spaced values from lo to hi inclusive."""
    return np.round(np.linspace(lo, hi, points), GRID_DECIMALS)
