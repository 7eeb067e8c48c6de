"""
CSV and JSON readers and writers.

Dialect: header row, comma delimiter, '.' decimal point, UTF-8, LF newlines.
Floats are written with the shortest representation that round-trips.
"""

import sys
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from greenspline.schemas import DataSet, SplineFit
from greenspline.utils import InvalidInputError, logger


PathLike = Union[str, Path]
DATA_COLUMNS = ["t", "y"]


# ============================================================================
# Readers
# ============================================================================

def read_dataset(path: PathLike) -> DataSet:
    """
    Load observations from a CSV with header `t,y`.

    Problems are reported with the 1-based line number in the file (the
    header is line 1).

    Raises:
        InvalidInputError: missing file, wrong header, malformed or invalid rows
    """
    path = Path(path)
    if not path.is_file():
        raise InvalidInputError(f"input file not found: {path}")

    try:
        df = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
            skipinitialspace=True,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError:
        raise InvalidInputError(f"{path}: file is empty") from None
    except pd.errors.ParserError as e:
        raise InvalidInputError(f"{path}: malformed CSV ({e})") from None

    header = [str(c).strip() for c in df.columns]
    if header != DATA_COLUMNS:
        raise InvalidInputError(f"{path}: expected header 't,y', got {','.join(header)!r}")
    if df.empty:
        raise InvalidInputError(f"{path}: no observations")

    times = pd.to_numeric(df["t"].str.strip(), errors="coerce").to_numpy(dtype=float)
    values = pd.to_numeric(df["y"].str.strip(), errors="coerce").to_numpy(dtype=float)

    for row, (t, y) in enumerate(zip(times, values)):
        line = row + 2
        if not (np.isfinite(t) and np.isfinite(y)):
            raise InvalidInputError(f"{path}: line {line}: expected two finite numbers")
        if t < 0.0 or t > 1.0:
            raise InvalidInputError(f"{path}: line {line}: time {t} outside [0, 1]")
        if row and t <= times[row - 1]:
            kind = "duplicate" if t == times[row - 1] else "unsorted"
            raise InvalidInputError(f"{path}: line {line}: {kind} time {t}")

    try:
        data = DataSet(times=times.tolist(), values=values.tolist())
    except ValidationError as e:
        raise InvalidInputError(f"{path}: {e.errors()[0]['msg']}") from None
    logger.info(f"Loaded {data.size} observations from {path}")
    return data


def read_table(path: PathLike) -> pd.DataFrame:
    """Read any CSV written by this package back as floats."""
    return pd.read_csv(path, dtype=float, encoding="utf-8")


def load_fit(path: PathLike) -> SplineFit:
    """Load a SplineFit JSON document."""
    path = Path(path)
    if not path.is_file():
        raise InvalidInputError(f"fit file not found: {path}")
    try:
        return SplineFit.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise InvalidInputError(f"{path}: invalid fit document ({e.error_count()} errors)") from None


# ============================================================================
# Writers
# ============================================================================

def _emit(df: pd.DataFrame, out: Optional[PathLike]) -> None:
    text = df.to_csv(index=False, lineterminator="\n")
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(out).write_text(text, encoding="utf-8", newline="\n")
    logger.info(f"Wrote {len(df)} rows to {out}")


def write_curve(out: Optional[PathLike], grid: Sequence[float], values: Sequence[float], column: str) -> None:
    """Two-column CSV `t,<column>`."""
    _emit(pd.DataFrame({"t": np.asarray(grid, dtype=float), column: np.asarray(values, dtype=float)}), out)


def write_paths(out: Optional[PathLike], grid: Sequence[float], paths: np.ndarray) -> None:
    """CSV `t,path_1,...,path_k`: one row per grid point, one column per path."""
    P = np.atleast_2d(np.asarray(paths, dtype=float))
    frame = {"t": np.asarray(grid, dtype=float)}
    frame.update({f"path_{j + 1}": P[j] for j in range(P.shape[0])})
    _emit(pd.DataFrame(frame), out)


def write_matrix(out: Optional[PathLike], grid: Sequence[float], matrix: np.ndarray) -> None:
    """Square matrix over the grid; the first column holds the row times."""
    T = np.asarray(grid, dtype=float)
    df = pd.DataFrame(np.asarray(matrix, dtype=float), columns=[repr(float(t)) for t in T])
    df.insert(0, "t", T)
    _emit(df, out)


def save_fit(path: PathLike, fit: SplineFit) -> None:
    """Write the fit as JSON with a `lambda` key."""
    Path(path).write_text(fit.model_dump_json(by_alias=True, indent=2) + "\n", encoding="utf-8", newline="\n")
    logger.info(f"Saved fit to {path}")
