"""JSON readers and writers for the two input formats.

Discrete::

    {"variables": {"M": [...], "X": [...], "Y": [...]}, "p": [[[...]]]}

``p`` is nested ``[m][x][y]``.  Gaussian::

    {"dims": {"M": dm, "X": dx, "Y": dy}, "cov": [row-major, length n*n]}

Readers reject probabilities that sum to something other than 1 (tolerance
1e-6, then renormalize) and covariances that are asymmetric or indefinite
beyond 1e-8 relative (then symmetrize).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .exceptions import ValidationError
from .joint import PSD_RTOL, DiscreteJoint, GaussianJoint, check_covariance

FILE_SUM_TOL = 1e-6
FILE_COV_TOL = 1e-8
ROLES = ("M", "X", "Y")


def _load(source: str | Path | dict) -> dict:
    if isinstance(source, dict):
        return source
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: top level must be a JSON object")
    return data


def _require(data: dict, key: str, kind) -> Any:
    if key not in data:
        raise ValidationError(f"missing field {key!r}")
    if not isinstance(data[key], kind):
        raise ValidationError(f"field {key!r} has the wrong type")
    return data[key]


def _roles_in_order(block: dict, what: str) -> list[str]:
    missing = [r for r in ROLES if r not in block]
    extra = [k for k in block if k not in ROLES]
    if missing or extra:
        raise ValidationError(
            f"field {what!r} must have exactly the keys M, X, Y"
            + (f"; missing {missing}" if missing else "")
            + (f"; unexpected {extra}" if extra else "")
        )
    return list(ROLES)


def read_discrete(source: str | Path | dict) -> DiscreteJoint:
    data = _load(source)
    variables = _require(data, "variables", dict)
    _roles_in_order(variables, "variables")
    alphabets = []
    for role in ROLES:
        symbols = variables[role]
        if not isinstance(symbols, list) or not symbols:
            raise ValidationError(f"field 'variables.{role}' must be a non-empty list")
        alphabets.append(tuple(_hashable(s) for s in symbols))
    shape = tuple(len(a) for a in alphabets)
    raw = _require(data, "p", list)
    try:
        p = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError("field 'p' must be a nested array of numbers") from None
    if p.shape != shape:
        raise ValidationError(f"field 'p' has shape {p.shape}, alphabets imply {shape}")
    if not np.all(np.isfinite(p)) or p.min() < 0.0:
        raise ValidationError("field 'p' must hold finite non-negative numbers")
    total = float(p.sum())
    if abs(total - 1.0) > FILE_SUM_TOL:
        raise ValidationError(f"field 'p' sums to {total!r}, not 1 (tolerance {FILE_SUM_TOL})")
    return DiscreteJoint(p / total, ROLES, tuple(alphabets))


def read_gaussian(source: str | Path | dict) -> GaussianJoint:
    data = _load(source)
    dims_field = _require(data, "dims", dict)
    _roles_in_order(dims_field, "dims")
    dims = []
    for role in ROLES:
        d = dims_field[role]
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            raise ValidationError(f"field 'dims.{role}' must be a positive integer")
        dims.append(d)
    n = sum(dims)
    raw = _require(data, "cov", list)
    try:
        flat = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError("field 'cov' must be a flat array of numbers") from None
    if flat.shape != (n * n,):
        raise ValidationError(f"field 'cov' has {flat.size} entries, expected {n * n}")
    if not np.all(np.isfinite(flat)):
        raise ValidationError("field 'cov' must be finite")
    cov = flat.reshape(n, n)
    check_covariance(cov, FILE_COV_TOL, FILE_COV_TOL)
    cov = 0.5 * (cov + cov.T)
    lam, u = np.linalg.eigh(cov)
    if lam[0] < -PSD_RTOL * max(lam[-1], 0.0):
        # within file tolerance but below the type's: clip onto the PSD cone
        cov = (u * np.maximum(lam, 0.0)) @ u.T
        cov = 0.5 * (cov + cov.T)
    return GaussianJoint(cov, tuple(dims), ROLES)


def _hashable(symbol):
    return tuple(_hashable(s) for s in symbol) if isinstance(symbol, list) else symbol


def write_json(obj: dict, path: str | Path) -> None:
    Path(path).write_text(dumps(obj) + "\n")


def dumps(obj: Any) -> str:
    """Stable JSON: sorted keys, fixed separators, floats at full precision."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_default)


def _default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.generic):
        return o.item()
    if hasattr(o, "value"):
        return o.value
    raise TypeError(f"cannot serialize {type(o).__name__}")
