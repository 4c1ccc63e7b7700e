"""File loaders for Boolean tables and initial amplitudes."""
from __future__ import annotations
import logging
from pathlib import Path
from typing import Dict, Tuple

import numpy as np
import pandas as pd

from ..errors import DataFormatError

log = logging.getLogger(__name__)


def _read(path: Path, names) -> pd.DataFrame:
    p = Path(path)
    if not p.exists():
        raise DataFormatError(f"file not found: {p}")
    try:
        return pd.read_csv(p, header=None, names=names, dtype=str, comment="#",
                           skipinitialspace=True, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataFormatError(f"{p}: {e}") from None


def load_g_table(path: Path) -> Tuple[Dict[str, str], int, int]:
    """
    Rows "h,g(h)" as bit strings, one per input pattern.

    Returns (table, n, m) with n and m taken from the bit widths.
    """
    df = _read(path, ["h", "g"])
    if df.empty:
        raise DataFormatError(f"{path}: empty Boolean table")
    table: Dict[str, str] = {}
    for h, g in zip(df["h"].str.strip(), df["g"].str.strip()):
        if not h or not g or set(h) - {"0", "1"} or set(g) - {"0", "1"}:
            raise DataFormatError(f"{path}: row {h!r},{g!r} is not two bit strings")
        if h in table:
            raise DataFormatError(f"{path}: duplicate row for input {h}")
        table[h] = g
    widths_h = {len(h) for h in table}
    widths_g = {len(g) for g in table.values()}
    if len(widths_h) != 1 or len(widths_g) != 1:
        raise DataFormatError(f"{path}: rows have inconsistent bit widths")
    n, m = widths_h.pop(), widths_g.pop()
    if len(table) != 1 << n:
        raise DataFormatError(f"{path}: table lists {len(table)} of {1 << n} input patterns")
    log.info("Loaded Boolean table %s: n=%d, m=%d", path, n, m)
    return table, n, m


def load_amplitudes(path: Path, dim: int) -> np.ndarray:
    """Rows "re,im"; normalized on load."""
    df = _read(path, ["re", "im"])
    try:
        amps = df["re"].astype(float).to_numpy() + 1j * df["im"].replace("", "0").astype(float).to_numpy()
    except ValueError:
        raise DataFormatError(f"{path}: amplitudes must be numeric re,im pairs") from None
    if amps.size != dim:
        raise DataFormatError(f"{path}: expected {dim} amplitudes, found {amps.size}")
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise DataFormatError(f"{path}: all amplitudes are zero")
    return amps / norm
