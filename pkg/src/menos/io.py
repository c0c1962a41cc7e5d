"""JSON encodings for matrices, POVMs, models and reports.

A matrix is a row-major list of rows whose entries are ``[re, im]`` pairs.
Floats are written with Python's shortest round-trip representation, so a
dump/load cycle is bit-exact.  Infinities are written as the string
``"inf"`` (or ``"-inf"``).
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import InvalidInput
from .fisher import MenosReport
from .models import ModelAtPoint
from .povm import Povm


def encode_float(x: float):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def decode_float(x) -> float:
    if isinstance(x, str):
        if x in ("inf", "-inf"):
            return float(x)
        raise InvalidInput(f"expected a number or 'inf', got {x!r}")
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InvalidInput(f"expected a number, got {x!r}")
    return float(x)


def matrix_to_json(a) -> list:
    a = np.asarray(a, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_json(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise InvalidInput("matrix must be a non-empty list of rows")
    n = len(rows)
    out = np.empty((n, n), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise InvalidInput(f"matrix row {i} must have {n} entries")
        for j, entry in enumerate(row):
            if not isinstance(entry, list) or len(entry) != 2:
                raise InvalidInput(f"matrix entry ({i}, {j}) must be a [re, im] pair")
            out[i, j] = complex(decode_float(entry[0]), decode_float(entry[1]))
    return out


def povm_to_json(povm: Povm) -> dict:
    return {"dim": povm.dim, "elements": [matrix_to_json(m) for m in povm]}


def povm_from_json(data) -> Povm:
    try:
        dim = data["dim"]
        elements = [matrix_from_json(m) for m in data["elements"]]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed POVM JSON: {exc}") from exc
    if any(m.shape[0] != dim for m in elements):
        raise InvalidInput(f"POVM elements do not match declared dim {dim}")
    return Povm(elements)


def model_to_json(model: ModelAtPoint) -> dict:
    out = {"theta": model.theta, "rho": matrix_to_json(model.rho), "drho": matrix_to_json(model.drho)}
    if model.qfi_known is not None:
        out["qfi"] = encode_float(model.qfi_known)
    return out


def model_from_json(data) -> ModelAtPoint:
    try:
        theta = decode_float(data["theta"])
        rho = matrix_from_json(data["rho"])
        drho = matrix_from_json(data["drho"])
        qfi = data.get("qfi")
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidInput(f"malformed model JSON: {exc}") from exc
    return ModelAtPoint(theta, rho, drho, None if qfi is None else decode_float(qfi))


def report_to_json(report: MenosReport) -> dict:
    return {
        "chi": encode_float(report.chi),
        "l_min": encode_float(report.l_min),
        "l_max": encode_float(report.l_max),
        "g_max": encode_float(report.g_max),
        "worst_noise": None if report.worst_noise is None else povm_to_json(report.worst_noise),
        "cfi": encode_float(report.cfi),
        "i_min": report.i_min,
        "i_max": report.i_max,
    }


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read JSON from {path}: {exc}") from exc


def load_povm(path) -> Povm:
    return povm_from_json(_read_json(path))


def load_model(path) -> ModelAtPoint:
    return model_from_json(_read_json(path))


def dump_json(data, path) -> None:
    Path(path).write_text(json.dumps(data, indent=1) + "\n")
