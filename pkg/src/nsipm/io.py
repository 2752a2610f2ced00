"""Problem files (JSON) and iteration traces (CSV)."""

import csv
import json
import math
from numbers import Integral, Real

import numpy as np

from .barriers import ConeSpec
from .errors import ConfigurationError, ProblemFileError
from .hsd import ConicProblem

TRACE_HEADER = ("iter", "phase", "alpha", "mu", "residual_norm", "proximity", "wall_ms")

_CONE_TYPES = {"nonneg": "nonneg", "exp": "exp"}


def _int_field(doc, key):
    if key not in doc:
        raise ProblemFileError(f"missing field '{key}'")
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, Integral) or value < 0:
        raise ProblemFileError(f"field '{key}': expected a non-negative integer, got {value!r}")
    return int(value)


def _real_array(doc, key, length):
    if key not in doc:
        raise ProblemFileError(f"missing field '{key}'")
    values = doc[key]
    if not isinstance(values, list):
        raise ProblemFileError(f"field '{key}': expected an array of reals")
    if len(values) != length:
        raise ProblemFileError(f"field '{key}': expected {length} entries, got {len(values)}")
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, Real) or not math.isfinite(v):
            raise ProblemFileError(f"field '{key}[{i}]': expected a finite real, got {v!r}")
    return np.array(values, dtype=float)


def _cones(doc):
    if "cones" not in doc:
        raise ProblemFileError("missing field 'cones'")
    cones = doc["cones"]
    if not isinstance(cones, list):
        raise ProblemFileError("field 'cones': expected an array")
    blocks = []
    for i, cone in enumerate(cones):
        where = f"cones[{i}]"
        if not isinstance(cone, dict):
            raise ProblemFileError(f"field '{where}': expected an object")
        kind = cone.get("type")
        if kind not in _CONE_TYPES:
            raise ProblemFileError(f"field '{where}.type': expected 'nonneg' or 'exp', got {kind!r}")
        dim = cone.get("dim")
        if isinstance(dim, bool) or not isinstance(dim, Integral) or dim < 1:
            raise ProblemFileError(f"field '{where}.dim': expected a positive integer, got {dim!r}")
        if kind == "exp" and dim != 3:
            raise ProblemFileError(f"field '{where}.dim': exponential cones have dim 3, got {dim}")
        blocks.append((_CONE_TYPES[kind], int(dim)))
    return ConeSpec(tuple(blocks))


def problem_from_dict(doc) -> ConicProblem:
    """Validate a decoded problem document and build the problem."""
    if not isinstance(doc, dict):
        raise ProblemFileError("top level: expected a JSON object")
    m, n = _int_field(doc, "m"), _int_field(doc, "n")
    if n == 0:
        raise ProblemFileError("field 'n': problem has no variables")
    A = _real_array(doc, "A", m * n).reshape(m, n)
    b = _real_array(doc, "b", m)
    c = _real_array(doc, "c", n)
    cone = _cones(doc)
    if cone.dim != n:
        raise ProblemFileError(f"field 'cones': dimensions sum to {cone.dim}, expected n = {n}")
    try:
        return ConicProblem(A, b, c, cone)
    except ConfigurationError as exc:
        raise ProblemFileError(f"field 'A': {exc}") from exc


def parse_problem_text(text) -> ConicProblem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return problem_from_dict(doc)


def parse_problem(path) -> ConicProblem:
    """Read and validate a JSON problem file.

    Raises
    ------
    ProblemFileError
        If the file is unreadable, is not valid JSON (message carries line
        and column), or fails validation (message names the field).
    """
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ProblemFileError(f"{path}: cannot read problem file: {exc}") from exc
    try:
        return parse_problem_text(text)
    except ProblemFileError as exc:
        raise ProblemFileError(f"{path}: {exc}") from exc


def problem_to_dict(p: ConicProblem) -> dict:
    return {
        "m": p.m,
        "n": p.n,
        "A": [float(v) for v in p.A.reshape(-1)],
        "b": [float(v) for v in p.b],
        "c": [float(v) for v in p.c],
        "cones": [{"type": kind, "dim": dim} for kind, dim in p.cone.blocks],
    }


def serialize(p: ConicProblem) -> str:
    """JSON text for ``p``; floats use the shortest exact round-trip form."""
    return json.dumps(problem_to_dict(p))


def write_problem(p: ConicProblem, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(p))
        fh.write("\n")


def trace_rows(trace, deterministic=False):
    """Rows for the trace CSV; ``proximity`` is the value after the step."""
    for r in trace:
        yield (r.iter, r.phase, repr(float(r.alpha)), repr(float(r.mu)),
               repr(float(r.residual_norm)), repr(float(r.proximity_after)),
               "0" if deterministic else f"{r.wall_ms:.3f}")


def write_trace(trace, path, deterministic=False):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        writer.writerows(trace_rows(trace, deterministic))


def read_trace(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader]


def _jsonable(v):
    if v is None:
        return None
    if isinstance(v, np.ndarray):
        return [_jsonable(float(x)) for x in v]
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    return v


def outcome_to_dict(out) -> dict:
    """Machine-readable summary of a :class:`SolveOutcome`."""
    return {
        "status": out.status,
        "primal_objective": _jsonable(out.primal_objective),
        "dual_objective": _jsonable(out.dual_objective),
        "x": _jsonable(out.x),
        "y": _jsonable(out.y),
        "s": _jsonable(out.s),
        "iterations": out.iterations,
        "mu": _jsonable(out.mu),
        "residual_norm": _jsonable(out.residual_norm),
        "tau": _jsonable(out.tau),
        "kappa": _jsonable(out.kappa),
        "diagnostics": {k: _jsonable(v) for k, v in out.diagnostics.items()},
    }
