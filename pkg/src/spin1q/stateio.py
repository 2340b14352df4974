"""JSON state files.

A state document is a JSON object with a ``kind`` field and a payload::

    {"kind": "density",  "matrix": [[z, z, z], [z, z, z], [z, z, z]]}
    {"kind": "pure",     "amplitudes": [z, z, z], "normalize": false}
    {"kind": "coherent", "theta": 1.0471975511965976, "phi": 0.0}
    {"kind": "bloch",    "matrix": [[1, 0, 0, 0], ...]}

Complex entries ``z`` are ``[re, im]`` pairs; a bare number is read as a
real value.  The basis is always ``(|1,1>, |1,0>, |1,-1>)``.  Optional
``format`` and ``version`` fields are checked when present.

Hand-written files rarely hit the invariants to machine precision, so
Hermiticity, trace and norm are checked against :data:`FILE_TOL` and then
restored exactly.
"""

from __future__ import annotations

import json
import math
from typing import Any, Union

import numpy as np

from .errors import InvalidInputError, StateFileError, StateInvariantError, StateSchemaError, StateSyntaxError
from .numkernel import PSD_TOL, eigvalsh
from .states import (
    BlochMatrix,
    CoherentAngles,
    DensityMatrix,
    PureSpin1,
    as_density,
    coherent_amplitudes,
    density_from_bloch,
)

FORMAT_NAME = "spin1q-state"
FORMAT_VERSION = 1
FILE_TOL = 1e-9
STATE_KINDS = ("density", "pure", "coherent", "bloch")

State = Union[DensityMatrix, PureSpin1, CoherentAngles, BlochMatrix]


def _number(value: Any, loc: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise StateSchemaError(f"expected a number, got {type(value).__name__}", loc)
    x = float(value)
    if not math.isfinite(x):
        raise StateSchemaError("number is not finite", loc)
    return x


def _complex(value: Any, loc: str) -> complex:
    if isinstance(value, list):
        if len(value) != 2:
            raise StateSchemaError(f"complex number must be [re, im], got {len(value)} entries", loc)
        return complex(_number(value[0], f"{loc}[0]"), _number(value[1], f"{loc}[1]"))
    return complex(_number(value, loc), 0.0)


def _vector(value: Any, n: int, loc: str, parse) -> np.ndarray:
    if not isinstance(value, list) or len(value) != n:
        raise StateSchemaError(f"expected a list of {n} entries", loc)
    return np.array([parse(v, f"{loc}[{i}]") for i, v in enumerate(value)])


def _matrix(value: Any, n: int, loc: str, parse) -> np.ndarray:
    if not isinstance(value, list) or len(value) != n:
        raise StateSchemaError(f"expected a {n}x{n} nested list", loc)
    return np.array([_vector(row, n, f"{loc}[{i}]", parse) for i, row in enumerate(value)])


def _field(doc: dict, name: str) -> Any:
    if name not in doc:
        raise StateSchemaError(f"missing field {name!r}", "$")
    return doc[name]


def _worst(dev: np.ndarray) -> tuple[int, int]:
    i, j = np.unravel_index(int(np.argmax(dev)), dev.shape)
    return int(i), int(j)


def _parse_density(doc: dict) -> DensityMatrix:
    m = _matrix(_field(doc, "matrix"), 3, "$.matrix", _complex)
    dev = np.abs(m - m.conj().T)
    if dev.max() > FILE_TOL:
        i, j = _worst(dev)
        raise StateInvariantError("hermitian", f"matrix is not Hermitian (|m - m^dagger| = {dev.max():.3e})",
                                  f"$.matrix[{i}][{j}]")
    m = 0.5 * (m + m.conj().T)
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > FILE_TOL:
        raise StateInvariantError("trace", f"trace is {tr:.15g}, expected 1", "$.matrix")
    m = m / tr
    lo = float(eigvalsh(m)[0])
    if lo < -PSD_TOL:
        raise StateInvariantError("psd", f"matrix is not positive semi-definite (eigenvalue {lo:.3e})", "$.matrix")
    return DensityMatrix(m)


def _parse_pure(doc: dict) -> PureSpin1:
    v = _vector(_field(doc, "amplitudes"), 3, "$.amplitudes", _complex)
    normalize = doc.get("normalize", False)
    if not isinstance(normalize, bool):
        raise StateSchemaError("normalize must be true or false", "$.normalize")
    norm2 = float(np.sum(np.abs(v) ** 2))
    if normalize:
        if norm2 == 0.0:
            raise StateInvariantError("norm", "cannot normalize the zero vector", "$.amplitudes")
    elif abs(norm2 - 1.0) > FILE_TOL:
        raise StateInvariantError("norm", f"squared norm is {norm2:.15g}, expected 1", "$.amplitudes")
    return PureSpin1.from_vector(v, normalize=True)


def _parse_coherent(doc: dict) -> CoherentAngles:
    theta = _number(_field(doc, "theta"), "$.theta")
    phi = _number(_field(doc, "phi"), "$.phi")
    if not (0.0 <= theta <= math.pi):
        raise StateSchemaError(f"theta must lie in [0, pi], got {theta!r}", "$.theta")
    return CoherentAngles(theta, phi)


def _parse_bloch(doc: dict) -> BlochMatrix:
    x = _matrix(_field(doc, "matrix"), 4, "$.matrix", _number)
    dev = np.abs(x - x.T)
    if dev.max() > FILE_TOL:
        i, j = _worst(dev)
        raise StateInvariantError("symmetric", f"Bloch matrix is not symmetric ({dev.max():.3e})",
                                  f"$.matrix[{i}][{j}]")
    if abs(x[0, 0] - 1.0) > FILE_TOL:
        raise StateInvariantError("bloch", f"X[0][0] is {x[0, 0]:.15g}, expected 1", "$.matrix[0][0]")
    tr = float(np.trace(x))
    if abs(tr - 2.0) > FILE_TOL:
        raise StateInvariantError("trace", f"Bloch matrix trace is {tr:.15g}, expected 2", "$.matrix")
    x = 0.5 * (x + x.T)
    x[0, 0] = 1.0
    x[1:, 1:] += np.eye(3) * (1.0 - np.trace(x[1:, 1:])) / 3.0
    bloch = BlochMatrix(x)
    lo = float(eigvalsh(density_from_bloch(bloch).matrix)[0])
    if lo < -PSD_TOL:
        raise StateInvariantError("psd", f"Bloch matrix does not describe a state (density eigenvalue {lo:.3e})",
                                  "$.matrix")
    return bloch


_PARSERS = {
    "density": _parse_density,
    "pure": _parse_pure,
    "coherent": _parse_coherent,
    "bloch": _parse_bloch,
}


def parse_document(doc: Any) -> State:
    """Build a typed state from an already-decoded JSON object."""
    if not isinstance(doc, dict):
        raise StateSchemaError("state document must be a JSON object", "$")
    fmt = doc.get("format", FORMAT_NAME)
    if fmt != FORMAT_NAME:
        raise StateSchemaError(f"unknown format {fmt!r}", "$.format")
    version = doc.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise StateSchemaError(f"unsupported format version {version!r}", "$.version")
    kind = _field(doc, "kind")
    if kind not in _PARSERS:
        raise StateSchemaError(f"unknown kind {kind!r}; expected one of {STATE_KINDS}", "$.kind")
    return _PARSERS[kind](doc)


def parse_state(text: str) -> State:
    """Parse one JSON state document.

    Raises
    ------
    StateSyntaxError
        Malformed JSON (location gives line and column).
    StateSchemaError
        Missing fields, wrong shapes or types.
    StateInvariantError
        Non-Hermitian, wrong trace or norm, or not positive.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateSyntaxError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return parse_document(doc)


def read_state(path) -> State:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise StateFileError(f"cannot read state file: {exc.strerror}", str(path)) from None
    return parse_state(text)


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def state_document(state: State) -> dict:
    """JSON-ready document for a typed state."""
    head = {"format": FORMAT_NAME, "version": FORMAT_VERSION}
    if isinstance(state, DensityMatrix):
        return {**head, "kind": "density", "matrix": [[_pair(z) for z in row] for row in state.matrix]}
    if isinstance(state, PureSpin1):
        return {**head, "kind": "pure", "amplitudes": [_pair(z) for z in state.amplitudes]}
    if isinstance(state, CoherentAngles):
        return {**head, "kind": "coherent", "theta": state.theta, "phi": state.phi}
    if isinstance(state, BlochMatrix):
        return {**head, "kind": "bloch", "matrix": state.matrix.tolist()}
    raise InvalidInputError(f"cannot serialize {type(state).__name__}")


def serialize_state(state: State, indent: int | None = None) -> str:
    """JSON text for ``state``; floats are written with full round-trip precision."""
    return json.dumps(state_document(state), indent=indent)


def to_density(state: State) -> DensityMatrix:
    """Density matrix of any parsed state."""
    if isinstance(state, CoherentAngles):
        return coherent_amplitudes(state).density()
    if isinstance(state, BlochMatrix):
        return DensityMatrix(density_from_bloch(state).matrix)
    return as_density(state)
