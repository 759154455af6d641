"""JSON documents for frames and operators.

Frame document::

    {"dim": 2, "atoms": [{"label": "w0", "weight": 1.0, "vector": [[1.0, 0.0], [0.0, 0.0]]}, ...]}

Operator document::

    {"dim": 2, "matrix": [[[re, im], ...], ...]}

Complex numbers are ``[re, im]`` pairs. Floats are written with Python's
shortest round-tripping repr, so finite doubles survive a dump/load cycle
bit for bit.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

import numpy as np

from framecal.errors import FrameError, MalformedDocument
from framecal.frame import SampledFrame
from framecal.measure import MeasureSpace


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _complex(value, where: str) -> complex:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        raise MalformedDocument(f"{where}: expected [re, im], got {value!r}")
    re, im = float(value[0]), float(value[1])
    if not (math.isfinite(re) and math.isfinite(im)):
        raise MalformedDocument(f"{where}: non-finite entry")
    return complex(re, im)


def frame_to_dict(f: SampledFrame) -> dict:
    return {
        "dim": f.dim,
        "atoms": [
            {"label": label, "weight": weight, "vector": [_pair(z) for z in vec]}
            for label, weight, vec in zip(f.space.labels, f.space.weights, f.vectors)
        ],
    }


def frame_from_dict(doc) -> SampledFrame:
    if not isinstance(doc, dict) or "dim" not in doc or "atoms" not in doc:
        raise MalformedDocument("frame document needs 'dim' and 'atoms'")
    dim = doc["dim"]
    atoms = doc["atoms"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise MalformedDocument(f"dim must be a positive integer, got {dim!r}")
    if not isinstance(atoms, list) or not atoms:
        raise MalformedDocument("atoms must be a non-empty list")
    labels, weights, rows = [], [], []
    for i, atom in enumerate(atoms):
        if not isinstance(atom, dict) or not {"label", "weight", "vector"} <= atom.keys():
            raise MalformedDocument(f"atom {i}: needs label, weight and vector")
        weight = atom["weight"]
        if not isinstance(weight, (int, float)) or isinstance(weight, bool):
            raise MalformedDocument(f"atom {i}: weight must be a number")
        vector = atom["vector"]
        if not isinstance(vector, list) or len(vector) != dim:
            raise MalformedDocument(f"atom {i}: vector length differs from dim {dim}")
        labels.append(str(atom["label"]))
        weights.append(float(weight))
        rows.append([_complex(z, f"atom {i}") for z in vector])
    try:
        space = MeasureSpace(tuple(labels), tuple(weights))
        return SampledFrame(space, np.array(rows, dtype=np.complex128))
    except FrameError:
        raise
    except Exception as exc:  # numpy shape surprises
        raise MalformedDocument(str(exc)) from exc


def operator_to_dict(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    return {"dim": a.shape[0], "matrix": [[_pair(z) for z in row] for row in a]}


def operator_from_dict(doc) -> np.ndarray:
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise MalformedDocument("operator document needs 'matrix'")
    rows = doc["matrix"]
    if not isinstance(rows, list) or not rows:
        raise MalformedDocument("matrix must be a non-empty list of rows")
    n = len(rows)
    if doc.get("dim", n) != n:
        raise MalformedDocument(f"dim {doc.get('dim')!r} but {n} rows")
    out = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise MalformedDocument(f"row {i} is not of length {n}")
        for j, z in enumerate(row):
            out[i, j] = _complex(z, f"entry ({i}, {j})")
    return out


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, allow_nan=False)


def read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MalformedDocument(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def load_frame(path) -> SampledFrame:
    return frame_from_dict(read_json(path))


def load_operator(path) -> np.ndarray:
    return operator_from_dict(read_json(path))


def save_frame(f: SampledFrame, path) -> None:
    Path(path).write_text(dumps(frame_to_dict(f)) + "\n")


def save_operator(a, path) -> None:
    Path(path).write_text(dumps(operator_to_dict(a)) + "\n")


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
