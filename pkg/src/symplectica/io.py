"""JSON file formats for states, symplectic matrices and circuits.

A state file is ``{"n": int, "ordering": "interleaved" | "blocked",
"matrix": [[...], ...]}``.  Writers always emit interleaved ordering;
readers accept both.  Symplectic-matrix files use the same layout.
"""

import json
import os
import tempfile

import numpy as np

from .engineer import Circuit
from .errors import DimensionMismatch
from .gstate import validate_cm
from .symplectic import to_interleaved

ORDERINGS = ("interleaved", "blocked")


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file in the same directory."""
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def matrix_payload(matrix):
    matrix = np.asarray(matrix, dtype=float)
    return {
        "n": matrix.shape[0] // 2,
        "ordering": "interleaved",
        "matrix": [[float(x) for x in row] for row in matrix],
    }


def parse_matrix(payload, ordering=None):
    """Matrix from a state/symplectic payload, converted to interleaved ordering.

    ``ordering`` overrides the ordering recorded in the payload.
    """
    if "matrix" not in payload:
        raise DimensionMismatch("payload has no 'matrix' field")
    matrix = np.array(payload["matrix"], dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
        raise DimensionMismatch(f"matrix shape {matrix.shape} is not 2n x 2n")
    if "n" in payload and int(payload["n"]) * 2 != matrix.shape[0]:
        raise DimensionMismatch(f"n = {payload['n']} does not match matrix size {matrix.shape[0]}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("matrix has non-finite entries")
    order = ordering or payload.get("ordering", "interleaved")
    if order not in ORDERINGS:
        raise ValueError(f"unknown ordering {order!r}")
    return to_interleaved(matrix) if order == "blocked" else matrix


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def read_cm(path, ordering=None, tol=None):
    payload = parse_matrix(load_json(path), ordering)
    return validate_cm(payload) if tol is None else validate_cm(payload, tol)


def write_cm(path, sigma):
    write_atomic(path, dumps(matrix_payload(sigma)))


def read_circuit(path):
    return Circuit.from_dict(load_json(path))


def write_circuit(path, circuit):
    write_atomic(path, dumps(circuit.to_dict()))
