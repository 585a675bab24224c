"""JSON/CSV serialization for states, ensembles, channels and reports.

Complex entries are written as ``[re, im]`` pairs, matrices row-major.  Floats
are rounded to 12 significant digits and keys are sorted, so identical
reports serialize to identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .states import Ensemble, as_density

SIG_DIGITS = 12


def _round(x: float) -> float:
    x = float(x)
    if not np.isfinite(x):
        raise ValidationError(f"cannot serialize non-finite value {x!r}")
    r = float(f"{x:.{SIG_DIGITS}g}")
    return 0.0 if r == 0 else r


def clean(obj):
    """Recursively convert numpy scalars/arrays and round floats for output."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(obj)
    if isinstance(obj, complex):
        return [_round(obj.real), _round(obj.imag)]
    return obj


def dumps(obj) -> str:
    return json.dumps(clean(obj), sort_keys=True, indent=2) + "\n"


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{_round(v):.{SIG_DIGITS}g}"
    return v


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


# -- matrices and states ------------------------------------------------------


def matrix_to_json(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[z.real, z.imag] for z in row] for row in M]


def matrix_from_json(obj, what: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"{what} must be a nested list of [re, im] pairs") from None
    if arr.ndim == 2:
        arr = np.stack([arr, np.zeros_like(arr)], axis=-1)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValidationError(f"{what} must be a 2-D array of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_json(rho, dims=None) -> dict:
    R = np.asarray(rho, dtype=complex)
    out = {"dim": R.shape[0], "matrix": matrix_to_json(R)}
    if dims is not None:
        out["dims"] = [int(dims[0]), int(dims[1])]
    return out


def _dims_from(obj, d):
    dims = obj.get("dims")
    if dims is None:
        return None
    if not isinstance(dims, (list, tuple)) or len(dims) != 2:
        raise ValidationError("dims must be a list [dA, dB]")
    dA, dB = int(dims[0]), int(dims[1])
    if dA * dB != d:
        raise ValidationError(f"dims {dims} do not multiply to dimension {d}")
    return (dA, dB)


def state_from_json(obj) -> tuple[np.ndarray, tuple[int, int] | None]:
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise ValidationError("state object needs a 'matrix' field")
    M = matrix_from_json(obj["matrix"], "state matrix")
    if M.shape[0] != M.shape[1]:
        raise ValidationError(f"state matrix must be square, got {M.shape}")
    if "dim" in obj and int(obj["dim"]) != M.shape[0]:
        raise ValidationError(f"declared dim {obj['dim']} does not match matrix size {M.shape[0]}")
    return as_density(M), _dims_from(obj, M.shape[0])


def ensemble_to_json(E: Ensemble) -> dict:
    out = {
        "weights": list(E.weights),
        "states": [state_to_json(s, E.dims) for s in E.states],
    }
    if E.dims is not None:
        out["dims"] = list(E.dims)
    return out


def ensemble_from_json(obj) -> Ensemble:
    """Ensemble object, a report carrying an ``"ensemble"`` key, or a single state (point mass)."""
    if isinstance(obj, dict) and "ensemble" in obj:
        obj = obj["ensemble"]
    if not isinstance(obj, dict):
        raise ValidationError("ensemble file must hold a JSON object")
    if "weights" not in obj:
        if "matrix" in obj:
            rho, dims = state_from_json(obj)
            return Ensemble.point_mass(rho, dims)
        raise ValidationError("ensemble object needs 'weights' and 'states'")
    states = obj.get("states")
    if not isinstance(states, list) or not states:
        raise ValidationError("ensemble 'states' must be a non-empty list")
    parsed = [state_from_json(s) for s in states]
    mats = [p[0] for p in parsed]
    if len({m.shape for m in mats}) != 1:
        raise ValidationError("ensemble states have different dimensions")
    dims = next((p[1] for p in parsed if p[1] is not None), None)
    if "dims" in obj:
        dims = _dims_from(obj, mats[0].shape[0])
    try:
        weights = np.asarray(obj["weights"], dtype=float)
    except (TypeError, ValueError):
        raise ValidationError("ensemble weights must be numbers") from None
    return Ensemble(weights, np.array(mats), dims)


def kraus_from_json(obj) -> list[np.ndarray]:
    if not isinstance(obj, dict) or not isinstance(obj.get("kraus"), list) or not obj["kraus"]:
        raise ValidationError("channel file needs a non-empty 'kraus' list")
    return [matrix_from_json(K, "Kraus operator") for K in obj["kraus"]]


def kraus_to_json(kraus) -> dict:
    return {"kraus": [matrix_to_json(K) for K in kraus]}


# -- files --------------------------------------------------------------------


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})") from None


def load_state(path):
    obj = read_json(path)
    if isinstance(obj, dict) and "state" in obj and "matrix" not in obj:
        obj = obj["state"]
    return state_from_json(obj)


def load_ensemble(path) -> Ensemble:
    return ensemble_from_json(read_json(path))


def load_kraus(path):
    return kraus_from_json(read_json(path))
