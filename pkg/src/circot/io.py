"""File formats shared by the command line and scripts.

Histograms: CSV with one real per line (UTF-8, '.' decimal separator, no
header) or a JSON array of reals.  Matrices: CSV with N rows of N
comma-separated reals.  Feature tables: CSV rows of
``class_index, v_0, ..., v_{dim-1}``.

All numeric output is written with 12 significant digits and
newline-terminated rows.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import CircotError, InvalidParameter

FLOAT_FORMAT = "{:.12g}"


def format_float(x: float) -> str:
    return FLOAT_FORMAT.format(float(x))


def read_histogram_values(path: str | Path) -> np.ndarray:
    """Load a mass vector from a one-column CSV or a JSON array."""
    text = Path(path).read_text(encoding="utf-8").strip()
    if not text:
        raise InvalidParameter(f"{path}: empty histogram file")
    if text.lstrip()[0] == "[":
        try:
            values = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidParameter(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(values, list):
            raise InvalidParameter(f"{path}: expected a JSON array")
        return np.asarray(values, dtype=np.float64)
    try:
        return np.asarray(
            [float(line) for line in text.splitlines() if line.strip()],
            dtype=np.float64,
        )
    except ValueError as exc:
        raise InvalidParameter(f"{path}: invalid CSV value ({exc})") from exc


def write_histogram_values(path: str | Path | None, values: np.ndarray,
                           fmt: str | None = None) -> str:
    """Serialize a mass vector; write to ``path`` unless it is ``None``.

    ``fmt`` is ``"csv"`` or ``"json"``; when omitted it is inferred from
    the file suffix (JSON for ``.json``, CSV otherwise).  Returns the
    serialized text either way.
    """
    if fmt is None:
        fmt = "json" if path is not None and str(path).endswith(".json") else "csv"
    if fmt == "json":
        text = "[" + ", ".join(format_float(v) for v in values) + "]\n"
    elif fmt == "csv":
        text = "".join(format_float(v) + "\n" for v in values)
    else:
        raise InvalidParameter(f"unknown histogram format {fmt!r}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_matrix(path: str | Path) -> np.ndarray:
    """Load an ``N x N`` cost matrix from comma-separated CSV rows."""
    text = Path(path).read_text(encoding="utf-8")
    rows = []
    try:
        for line in text.splitlines():
            if line.strip():
                rows.append([float(cell) for cell in line.split(",")])
    except ValueError as exc:
        raise InvalidParameter(f"{path}: invalid CSV value ({exc})") from exc
    if not rows:
        raise InvalidParameter(f"{path}: empty matrix file")
    widths = {len(r) for r in rows}
    if len(widths) != 1 or widths.pop() != len(rows):
        raise InvalidParameter(f"{path}: matrix rows must form a square")
    return np.asarray(rows, dtype=np.float64)


def write_matrix(path: str | Path | None, matrix: np.ndarray) -> str:
    """Serialize a matrix as CSV rows; write to ``path`` unless ``None``."""
    m = np.asarray(matrix, dtype=np.float64)
    text = "".join(
        ",".join(format_float(v) for v in row) + "\n" for row in m
    )
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_feature_rows(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Load ``class_index, v_0, ...`` rows; returns (labels, vectors)."""
    text = Path(path).read_text(encoding="utf-8")
    labels = []
    vectors = []
    for line in text.splitlines():
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) < 2:
            raise InvalidParameter(f"{path}: feature rows need a label and a vector")
        try:
            labels.append(int(float(cells[0])))
            vectors.append([float(c) for c in cells[1:]])
        except ValueError as exc:
            raise InvalidParameter(f"{path}: invalid CSV value ({exc})") from exc
    if not labels:
        raise InvalidParameter(f"{path}: empty feature file")
    widths = {len(v) for v in vectors}
    if len(widths) != 1:
        raise CircotError(f"{path}: feature vectors have mixed lengths")
    return np.asarray(labels, dtype=np.int64), np.asarray(vectors, dtype=np.float64)
