"""Text formats of pmaxent.

Mass functions and reports are JSON with a stable key order; curves and
accumulation tables are CSV with 17 significant digits so a write-read
cycle is bit-exact and repeated runs are byte-identical.
"""

from __future__ import annotations

import json
import logging
from typing import Any

import pandas as pd

from pmaxent import const
from pmaxent.core.domain.contracts import FlowCurve, Pmf, VerificationReport
from pmaxent.core.domain.errors import ConstructionError
from pmaxent.io import files

logger = logging.getLogger(__name__)


def pmf_to_json(P: Pmf) -> str:
    """``{"probs": [...], "deficit": d}``."""
    return json.dumps(P.to_dict(), indent=2)


def pmf_from_json(text: str) -> Pmf:
    """Parse a mass function written by ``pmf_to_json`` or by hand.

    A bare JSON list is read as ``probs`` with zero deficit.

    Raises:
        ConstructionError: for malformed JSON or invalid masses.

    Examples:
        >>> pmf_from_json('[0.25, 0.5, 0.25]').probs.tolist()
        [0.25, 0.5, 0.25]
    """
    try:
        data: Any = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConstructionError(f'mass function is not valid JSON: {e}') from e
    if isinstance(data, list): data = {'probs': data}
    if not isinstance(data, dict):
        raise ConstructionError('mass function JSON must be an object or a list')
    return Pmf.from_dict(data)


def read_pmf(path: str) -> Pmf:
    """Read a mass function JSON file."""
    logger.debug('reading mass function from %s', path)
    return pmf_from_json(files.read_text(path))


def report_to_json(report: VerificationReport, include_timing: bool = False) -> str:
    """Indented JSON of a report; keys keep their insertion order."""
    return json.dumps(report.to_dict(include_timing=include_timing), indent=2, allow_nan=False)


def table_to_csv(table: pd.DataFrame, columns: list[str]) -> str:
    """CSV text of ``table`` restricted to ``columns`` with full float precision."""
    return table.loc[:, columns].to_csv(
        index=False, float_format=const.CSV_FLOAT_FMT, lineterminator='\n', na_rep='nan',
    )


def curve_to_csv(curve: FlowCurve) -> str:
    """CSV with header ``alpha,H,Lambda,D,dLambda,dD,d2Lambda,d2D,heat_residual``."""
    return table_to_csv(curve.table, const.CURVE_COLS)


def curve_from_csv(path: str, lam: float) -> FlowCurve:
    """Read a curve CSV back."""
    return FlowCurve(lam=lam, table=pd.read_csv(path, float_precision='round_trip'))


def accumulation_to_csv(table: pd.DataFrame) -> str:
    """CSV with header ``n,tv``."""
    return table_to_csv(table, const.ACCUMULATE_COLS)
