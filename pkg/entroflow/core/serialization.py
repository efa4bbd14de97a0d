"""
Matrix files shared by every command.

Schema (JSON object):

    {
      "schema": "entroflow.matrix/1",
      "rows": 2,
      "cols": 2,
      "data": [[0.5, 0.0], [0.0, 0.0], [0.0, 0.0], [0.5, 0.0]]
    }

`data` lists the entries row-major, each as a [re, im] pair of decimal doubles.
"""

from __future__ import annotations

import json
from typing import Any, Dict

import numpy as np

from entroflow.lib.errors import MatrixFileError

MATRIX_SCHEMA = "entroflow.matrix/1"


def matrix_to_json(matrix: np.ndarray) -> Dict[str, Any]:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2:
        raise ValueError(f"Expected a 2-D matrix, got shape {matrix.shape}")
    rows, cols = matrix.shape
    return {
        "schema": MATRIX_SCHEMA,
        "rows": rows,
        "cols": cols,
        "data": [[float(z.real), float(z.imag)] for z in matrix.ravel()],
    }


def matrix_from_json(payload: Any, source: str = "<memory>") -> np.ndarray:
    if not isinstance(payload, dict):
        raise MatrixFileError(source, "top level must be an object")
    if payload.get("schema") != MATRIX_SCHEMA:
        raise MatrixFileError(source, f"schema must be {MATRIX_SCHEMA!r}")

    rows, cols, data = payload.get("rows"), payload.get("cols"), payload.get("data")
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 1 or cols < 1:
        raise MatrixFileError(source, "rows/cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise MatrixFileError(source, f"data must hold rows*cols={rows * cols} entries")

    try:
        values = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MatrixFileError(source, f"data entries must be numbers: {exc}") from None
    if values.shape != (rows * cols, 2) or not np.all(np.isfinite(values)):
        raise MatrixFileError(source, "every entry must be a finite [re, im] pair")

    return (values[:, 0] + 1j * values[:, 1]).reshape(rows, cols)


def dump_matrix(path: str, matrix: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as file:
        json.dump(matrix_to_json(matrix), file, indent=2)
        file.write("\n")


def load_matrix(path: str) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as file:
            payload = json.load(file)
    except FileNotFoundError:
        raise MatrixFileError(path, "file not found") from None
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MatrixFileError(path, f"unreadable JSON: {exc}") from None
    return matrix_from_json(payload, source=path)
