"""Problem documents: the JSON interchange format and schema validation.

Complex matrices travel as ``{"rows": r, "cols": c, "entries": [[[re, im],
...], ...]}`` with row-major nesting; dimension fields are explicit and
checked on load.  Every validation failure raises ProblemFormatError with
a message that starts with the dotted path of the offending field.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .dilations import Dilation
from .errors import GqcError, ProblemFormatError, ValidationError
from .gksl import BenchmarkSpec, GkslGenerator, StandardDilationSpec
from .intrinsic import AdmissibleConstraints, OptimizerOptions

__all__ = [
    "ProblemSpec",
    "PROBLEM_KINDS",
    "matrix_to_payload",
    "matrix_from_payload",
    "dilation_to_payload",
    "dilation_from_payload",
    "result_to_payload",
    "load_problem",
    "parse_problem",
]

PROBLEM_KINDS = ("unitary", "channel", "noise", "intrinsic", "gksl_bound",
                 "benchmark", "verify")


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """A fully validated computation request."""

    kind: str
    payload: dict
    tolerances: ToleranceConfig
    seed: int


# ---------------------------------------------------------------------------
# Matrix interchange
# ---------------------------------------------------------------------------

def matrix_to_payload(m) -> dict:
    arr = np.asarray(m, dtype=complex)
    return {
        "rows": int(arr.shape[0]),
        "cols": int(arr.shape[1]),
        "entries": [[[float(v.real), float(v.imag)] for v in row] for row in arr],
    }


def matrix_from_payload(doc, field: str) -> np.ndarray:
    if not isinstance(doc, dict):
        raise ProblemFormatError(f"{field}: expected a matrix object, got {type(doc).__name__}")
    for key in ("rows", "cols", "entries"):
        if key not in doc:
            raise ProblemFormatError(f"{field}.{key}: missing")
    rows, cols = doc["rows"], doc["cols"]
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 1 or cols < 1:
        raise ProblemFormatError(f"{field}.rows/cols: expected positive integers")
    entries = doc["entries"]
    if not isinstance(entries, list) or len(entries) != rows:
        raise ProblemFormatError(
            f"{field}.entries: expected {rows} rows, got "
            f"{len(entries) if isinstance(entries, list) else type(entries).__name__}")
    out = np.empty((rows, cols), dtype=complex)
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != cols:
            raise ProblemFormatError(f"{field}.entries[{i}]: expected {cols} cells")
        for j, cell in enumerate(row):
            if (not isinstance(cell, list) or len(cell) != 2
                    or not all(isinstance(x, (int, float)) for x in cell)):
                raise ProblemFormatError(
                    f"{field}: entry [{i}][{j}] must be a [re, im] pair")
            re, im = float(cell[0]), float(cell[1])
            if not (np.isfinite(re) and np.isfinite(im)):
                raise ProblemFormatError(f"{field}: entry [{i}][{j}] is not finite")
            out[i, j] = re + 1j * im
    return out


def _square_matrix(doc, field: str, dim: int | None = None) -> np.ndarray:
    arr = matrix_from_payload(doc, field)
    if arr.shape[0] != arr.shape[1]:
        raise ProblemFormatError(f"{field}: expected a square matrix, got {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ProblemFormatError(
            f"{field}: dimension {arr.shape[0]} does not match declared {dim}")
    return arr


# ---------------------------------------------------------------------------
# Field helpers
# ---------------------------------------------------------------------------

def _require(doc: dict, field: str, context: str):
    if field not in doc:
        raise ProblemFormatError(f"{context}{field}: missing")
    return doc[field]


def _number(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProblemFormatError(f"{field}: expected a number")
    if not np.isfinite(float(value)):
        raise ProblemFormatError(f"{field}: not finite")
    return float(value)


def _integer(value, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProblemFormatError(f"{field}: expected an integer")
    return value


def _time_grid(value, field: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) < 1:
        raise ProblemFormatError(f"{field}: expected a nonempty list of times")
    grid = np.array([_number(v, f"{field}[{i}]") for i, v in enumerate(value)])
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ProblemFormatError(f"{field}: times must be strictly increasing")
    if grid[0] < 0:
        raise ProblemFormatError(f"{field}: times must be nonnegative")
    return grid


# ---------------------------------------------------------------------------
# Composite objects
# ---------------------------------------------------------------------------

def dilation_to_payload(d: Dilation) -> dict:
    return {
        "d_S": d.d_S,
        "d_E": d.d_E,
        "rho_E": matrix_to_payload(d.rho_E),
        "h_tot": matrix_to_payload(d.h_tot),
    }


def dilation_from_payload(doc, tol: ToleranceConfig, field: str = "dilation") -> Dilation:
    if not isinstance(doc, dict):
        raise ProblemFormatError(f"{field}: expected an object")
    prefix = f"{field}." if field else ""
    d_S = _integer(_require(doc, "d_S", prefix), f"{prefix}d_S")
    d_E = _integer(_require(doc, "d_E", prefix), f"{prefix}d_E")
    if d_S < 1 or d_E < 1:
        raise ProblemFormatError(f"{prefix}d_S/d_E: dimensions must be positive")
    rho = _square_matrix(_require(doc, "rho_E", prefix), f"{prefix}rho_E", d_E)
    h_tot = _square_matrix(_require(doc, "h_tot", prefix), f"{prefix}h_tot", d_S * d_E)
    try:
        return Dilation(d_S, d_E, rho, h_tot, tol)
    except GqcError as exc:
        raise ProblemFormatError(f"{prefix}{exc}") from exc


def _generator_from_payload(doc, tol: ToleranceConfig, field: str) -> GkslGenerator:
    if not isinstance(doc, dict):
        raise ProblemFormatError(f"{field}: expected an object")
    h_S = _square_matrix(_require(doc, "h_S", f"{field}."), f"{field}.h_S")
    ops_doc = doc.get("lindblad_ops", [])
    if not isinstance(ops_doc, list):
        raise ProblemFormatError(f"{field}.lindblad_ops: expected a list")
    ops = tuple(_square_matrix(o, f"{field}.lindblad_ops[{i}]", h_S.shape[0])
                for i, o in enumerate(ops_doc))
    try:
        return GkslGenerator(h_S, ops, tol)
    except GqcError as exc:
        raise ProblemFormatError(f"{field}: {exc}") from exc


def _bath_from_payload(doc, tol: ToleranceConfig, field: str) -> StandardDilationSpec:
    if not isinstance(doc, dict):
        raise ProblemFormatError(f"{field}: expected an object")
    h_E = _square_matrix(_require(doc, "h_E", f"{field}."), f"{field}.h_E")
    ops_doc = _require(doc, "bath_ops", f"{field}.")
    if not isinstance(ops_doc, list) or not ops_doc:
        raise ProblemFormatError(f"{field}.bath_ops: expected a nonempty list")
    ops = tuple(_square_matrix(o, f"{field}.bath_ops[{i}]", h_E.shape[0])
                for i, o in enumerate(ops_doc))
    beta = _number(_require(doc, "beta", f"{field}."), f"{field}.beta")
    rho = doc.get("rho_E")
    if rho is not None:
        rho = _square_matrix(rho, f"{field}.rho_E", h_E.shape[0])
    try:
        return StandardDilationSpec(h_E, ops, beta, rho, tol)
    except GqcError as exc:
        raise ProblemFormatError(f"{field}: {exc}") from exc


def _constraints_from_payload(doc, tol: ToleranceConfig, field: str) -> AdmissibleConstraints:
    if not isinstance(doc, dict):
        raise ProblemFormatError(f"{field}: expected an object")
    prefix = f"{field}."
    d_E_max = _integer(_require(doc, "d_E_max", prefix), f"{prefix}d_E_max")
    j_max = _number(_require(doc, "J_max", prefix), f"{prefix}J_max")
    grid = _time_grid(_require(doc, "t_grid", prefix), f"{prefix}t_grid")
    e_max = doc.get("E_max")
    if e_max is not None:
        e_max = _number(e_max, f"{prefix}E_max")
    h_E = doc.get("h_E")
    if h_E is not None:
        h_E = _square_matrix(h_E, f"{prefix}h_E")
    channel_tol = doc.get("channel_tol", 1e-6)
    channel_tol = _number(channel_tol, f"{prefix}channel_tol")
    try:
        return AdmissibleConstraints(d_E_max, j_max, grid, e_max, h_E, channel_tol)
    except GqcError as exc:
        raise ProblemFormatError(f"{field}: {exc}") from exc


def _options_from_payload(doc, field: str) -> OptimizerOptions:
    if doc is None:
        return OptimizerOptions()
    if not isinstance(doc, dict):
        raise ProblemFormatError(f"{field}: expected an object")
    known = {"starts", "seed", "max_iters", "fd_step", "mu1", "mu2",
             "polish_tol", "n_threads"}
    unknown = set(doc) - known
    if unknown:
        raise ProblemFormatError(f"{field}.{sorted(unknown)[0]}: unknown option")
    kwargs = {}
    for key in ("starts", "seed", "max_iters", "n_threads"):
        if key in doc:
            kwargs[key] = _integer(doc[key], f"{field}.{key}")
    for key in ("fd_step", "mu1", "mu2", "polish_tol"):
        if key in doc:
            kwargs[key] = _number(doc[key], f"{field}.{key}")
    try:
        return OptimizerOptions(**kwargs)
    except GqcError as exc:
        raise ProblemFormatError(f"{field}: {exc}") from exc


def _benchmark_spec_from_payload(doc, field: str) -> BenchmarkSpec:
    if not isinstance(doc, dict):
        raise ProblemFormatError(f"{field}: expected an object")
    kind = _require(doc, "kind", f"{field}.")
    omega = _number(_require(doc, "omega", f"{field}."), f"{field}.omega")
    rates_doc = _require(doc, "rates", f"{field}.")
    if not isinstance(rates_doc, list):
        raise ProblemFormatError(f"{field}.rates: expected a list")
    rates = tuple(_number(r, f"{field}.rates[{i}]") for i, r in enumerate(rates_doc))
    try:
        return BenchmarkSpec(kind, omega, rates)
    except GqcError as exc:
        raise ProblemFormatError(f"{field}: {exc}") from exc


def result_to_payload(result) -> dict:
    """Serialize an optimization result with the winning dilation embedded."""
    return {
        "best_value": result.best_value,
        "objective": result.objective,
        "channel_residual": result.channel_residual,
        "norm_residual": result.norm_residual,
        "feasible": result.feasible,
        "starts_used": result.starts_used,
        "seed": result.seed,
        "simplified_value": result.simplified_value,
        "best_dilation": dilation_to_payload(result.best_dilation),
    }


# ---------------------------------------------------------------------------
# Per-kind payload parsing
# ---------------------------------------------------------------------------

def _parse_unitary(doc: dict, tol: ToleranceConfig) -> dict:
    h = _square_matrix(_require(doc, "h", ""), "h")
    if "t_grid" in doc:
        grid = _time_grid(doc["t_grid"], "t_grid")
    elif "t" in doc:
        grid = np.array([_number(doc["t"], "t")])
    else:
        raise ProblemFormatError("t: missing (provide t or t_grid)")
    return {"h": h, "t_grid": grid}


def _parse_channel(doc: dict, tol: ToleranceConfig) -> dict:
    dil = dilation_from_payload(_require(doc, "dilation", ""), tol)
    h_S = _square_matrix(_require(doc, "h_S", ""), "h_S", dil.d_S)
    grid = _time_grid(_require(doc, "t_grid", ""), "t_grid")
    return {"dilation": dil, "h_S": h_S, "t_grid": grid}


def _parse_intrinsic(doc: dict, tol: ToleranceConfig) -> dict:
    target = dilation_from_payload(_require(doc, "target", ""), tol, "target")
    h_S = _square_matrix(_require(doc, "h_S", ""), "h_S", target.d_S)
    constraints = _constraints_from_payload(_require(doc, "constraints", ""),
                                            tol, "constraints")
    t_eval = _number(_require(doc, "t_eval", ""), "t_eval")
    options = _options_from_payload(doc.get("options"), "options")
    seeds_doc = doc.get("seed_dilations", [])
    if not isinstance(seeds_doc, list):
        raise ProblemFormatError("seed_dilations: expected a list")
    seeds = tuple(dilation_from_payload(s, tol, f"seed_dilations[{i}]")
                  for i, s in enumerate(seeds_doc))
    objective = doc.get("objective", "complexity")
    if objective not in ("complexity", "noise"):
        raise ProblemFormatError(
            f"objective: expected 'complexity' or 'noise', got {objective!r}")
    return {"target": target, "h_S": h_S, "constraints": constraints,
            "t_eval": t_eval, "options": options, "seed_dilations": seeds,
            "objective": objective}


def _parse_gksl_bound(doc: dict, tol: ToleranceConfig) -> dict:
    generator = _generator_from_payload(_require(doc, "generator", ""), tol, "generator")
    bath = _bath_from_payload(_require(doc, "bath", ""), tol, "bath")
    grid = _time_grid(_require(doc, "t_grid", ""), "t_grid")
    if len(bath.bath_ops) != generator.m:
        raise ProblemFormatError(
            f"bath.bath_ops: {len(bath.bath_ops)} operators for "
            f"{generator.m} lindblad operators")
    return {"generator": generator, "bath": bath, "t_grid": grid}


def _parse_benchmark(doc: dict, tol: ToleranceConfig) -> dict:
    specs_doc = _require(doc, "specs", "")
    if not isinstance(specs_doc, list) or not specs_doc:
        raise ProblemFormatError("specs: expected a nonempty list")
    specs = [_benchmark_spec_from_payload(s, f"specs[{i}]")
             for i, s in enumerate(specs_doc)]
    bath = doc.get("bath")
    if bath is not None:
        bath = _bath_from_payload(bath, tol, "bath")
    grid = _time_grid(_require(doc, "t_grid", ""), "t_grid")
    return {"specs": specs, "bath": bath, "t_grid": grid}


def _parse_verify(doc: dict, tol: ToleranceConfig) -> dict:
    suite = doc.get("suite", "all")
    if not (suite == "all" or (isinstance(suite, list)
                               and all(isinstance(s, str) for s in suite))):
        raise ProblemFormatError("suite: expected 'all' or a list of suite names")
    return {"suite": suite}


_PARSERS = {
    "unitary": _parse_unitary,
    "channel": _parse_channel,
    "noise": _parse_channel,
    "intrinsic": _parse_intrinsic,
    "gksl_bound": _parse_gksl_bound,
    "benchmark": _parse_benchmark,
    "verify": _parse_verify,
}


def _tolerances_from_payload(doc) -> ToleranceConfig:
    if doc is None:
        return DEFAULT_TOLERANCES
    if not isinstance(doc, dict):
        raise ProblemFormatError("tolerances: expected an object")
    known = set(ToleranceConfig.field_names())
    overrides = {}
    for key, value in doc.items():
        if key not in known:
            raise ProblemFormatError(f"tolerances.{key}: unknown tolerance")
        if key == "dim_cap":
            overrides[key] = _integer(value, f"tolerances.{key}")
        else:
            overrides[key] = _number(value, f"tolerances.{key}")
    return DEFAULT_TOLERANCES.replace(**overrides)


def parse_problem(doc: dict) -> ProblemSpec:
    """Validate a decoded problem document into a ProblemSpec."""
    if not isinstance(doc, dict):
        raise ProblemFormatError("document: expected a JSON object at top level")
    kind = _require(doc, "kind", "")
    if kind not in PROBLEM_KINDS:
        raise ProblemFormatError(f"kind: {kind!r} not one of {PROBLEM_KINDS}")
    tolerances = _tolerances_from_payload(doc.get("tolerances"))
    seed = doc.get("seed", 0)
    seed = _integer(seed, "seed")
    payload_doc = _require(doc, "payload", "")
    if not isinstance(payload_doc, dict):
        raise ProblemFormatError("payload: expected an object")
    payload = _PARSERS[kind](payload_doc, tolerances)
    return ProblemSpec(kind, payload, tolerances, seed)


def load_problem(path) -> ProblemSpec:
    """Read, parse, and fully validate a problem file."""
    p = Path(path)
    if not p.exists():
        raise ProblemFormatError(f"file: {p} does not exist")
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"file: {p} is not valid JSON ({exc})") from exc
    return parse_problem(doc)
