"""
CSV Utility Functions
Deterministic CSV rendering and atomic file output for curves and sweeps

VERSION HISTORY:
1.1.0 - Atomic writes - 18/10/26
      CHANGES:
      - write_atomic() writes to a temporary file and renames it into place
      - No partial CSV is left behind when a command fails
1.0.0 - Fixed 17-significant-digit float format - 18/10/26
KEY FUNCTIONS:
- curve_frame / render_csv (17 significant digits, "\\n" line endings)
- write_atomic (temp file + os.replace)
- read_csv (round-trip float parsing)
"""
import os
import logging
import tempfile
from pathlib import Path
from typing import Iterable, Sequence, Union

import pandas as pd

# Configure logging
logger = logging.getLogger(__name__)

# 17 significant digits reproduce every double exactly
FLOAT_FORMAT = "%.16e"


def curve_frame(rows: Iterable[Sequence[float]], columns: Sequence[str]) -> pd.DataFrame:
    """
    Build a float DataFrame from row tuples

    Args:
        rows: Row values in column order
        columns: Header names

    Returns:
        DataFrame with float64 columns
    """
    return pd.DataFrame(list(rows), columns=list(columns), dtype="float64")


def render_csv(df: pd.DataFrame) -> str:
    """
    Render a DataFrame as CSV text with a fixed float format

    Example:
        >>> render_csv(curve_frame([(0.0, 1.0)], ["t", "value"]))
        't,value\\n0.0000000000000000e+00,1.0000000000000000e+00\\n'
    """
    return df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_atomic(text: str, path: Union[str, Path]):
    """
    Write text to path via a temporary file in the same directory

    Args:
        text: File contents
        path: Destination; replaced only after the write succeeds
    """
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.info(f"Wrote {path}")


def read_csv(path: Union[str, Path]) -> pd.DataFrame:
    """Read a CSV written by render_csv; floats re-parse exactly"""
    return pd.read_csv(path, float_precision="round_trip")
