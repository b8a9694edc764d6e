"""Coefficient file format and diagnostics reports.

A coefficient file is a JSON document carrying a matrix of Laurent
polynomials over one shared power window::

    {
      "rows": 2, "cols": 2,
      "min_power": -1, "max_power": 1,
      "entries": [[[[re, im], ...], ...], ...]
    }

``entries[i][j][k]`` is the coefficient of power ``min_power + k`` of matrix
entry (i, j); every entry is zero padded to the shared window, which keeps
the files diffable and interchange explicit.
"""

import json
import math
from dataclasses import asdict

import numpy as np

from .errors import InputFormatError
from .laurent import LaurentMatrix


def write_coefficient_file(path, matrix):
    lo, hi = matrix.window()
    tensor = matrix.to_tensor((lo, hi))
    doc = {
        "rows": matrix.rows,
        "cols": matrix.cols,
        "min_power": lo,
        "max_power": hi,
        "entries": [
            [
                [[float(c.real), float(c.imag)] for c in tensor[i, j]]
                for j in range(matrix.cols)
            ]
            for i in range(matrix.rows)
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def read_coefficient_file(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputFormatError(f"cannot read coefficient file {path}: {exc}") from exc
    try:
        rows, cols = int(doc["rows"]), int(doc["cols"])
        lo, hi = int(doc["min_power"]), int(doc["max_power"])
        entries = doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed coefficient file {path}: {exc}") from exc
    width = hi - lo + 1
    if rows < 1 or cols < 1 or width < 1:
        raise InputFormatError(f"inconsistent dimensions in {path}")
    tensor = np.zeros((rows, cols, width), dtype=np.complex128)
    try:
        for i in range(rows):
            for j in range(cols):
                cell = entries[i][j]
                if len(cell) != width:
                    raise InputFormatError(
                        f"entry ({i}, {j}) in {path} has {len(cell)} coefficients, "
                        f"expected {width}"
                    )
                for k, pair in enumerate(cell):
                    re, im = float(pair[0]), float(pair[1])
                    if not (math.isfinite(re) and math.isfinite(im)):
                        raise InputFormatError(
                            f"non-finite coefficient at ({i}, {j}) in {path}"
                        )
                    tensor[i, j, k] = complex(re, im)
    except (IndexError, TypeError, ValueError) as exc:
        raise InputFormatError(f"malformed entries array in {path}: {exc}") from exc
    return LaurentMatrix.from_tensor(tensor, lo)


def diagnostics_dict(diag):
    """Diagnostics as a JSON-ready dictionary, field for field."""
    return asdict(diag)


def write_report(path, diag):
    with open(path, "w") as fh:
        json.dump(diagnostics_dict(diag), fh, indent=1)
        fh.write("\n")
