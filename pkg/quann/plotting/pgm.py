from __future__ import annotations
import logging
from pathlib import Path

import numpy as np

from ..errors import DataFormatError

log = logging.getLogger(__name__)

RECURRENT = 0    # black
NON_RECURRENT = 255


def encode_pgm(matrix: np.ndarray) -> bytes:
    """Binary P5 image: recurrent pairs black, row 0 at the top."""
    m = np.asarray(matrix, dtype=bool)
    if m.ndim != 2:
        raise DataFormatError(f"recurrence matrix must be 2-d, got shape {m.shape}")
    rows, cols = m.shape
    pixels = np.where(m, RECURRENT, NON_RECURRENT).astype(np.uint8)
    return b"P5\n%d %d\n255\n" % (cols, rows) + pixels.tobytes()


def save_recurrence_pgm(matrix: np.ndarray, out_path: Path) -> Path:
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_bytes(encode_pgm(matrix))
    log.info("Saved recurrence plot %dx%d to %s", matrix.shape[0], matrix.shape[1], out_path)
    return out_path


def read_pgm(path: Path) -> np.ndarray:
    """Inverse of save_recurrence_pgm (P5, maxval 255, no comments)."""
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P5" or parts[2] != b"255":
        raise DataFormatError(f"{path}: not a P5 image with maxval 255")
    cols, rows = (int(v) for v in parts[1].split())
    pixels = np.frombuffer(parts[3], dtype=np.uint8)
    if pixels.size != rows * cols:
        raise DataFormatError(f"{path}: expected {rows * cols} pixels, found {pixels.size}")
    return pixels.reshape(rows, cols) == RECURRENT
