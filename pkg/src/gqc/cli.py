"""Command-line front end.

Subcommands: unitary, channel, noise, intrinsic, gksl-bound, bench,
verify.  Every run is a pure function of (problem file, flags, seed) up
to the timestamp stored in the metadata sidecar; CSV bodies are
reproducible byte for byte.

Exit codes: 0 success, 2 validation or usage error, 3 infeasible
optimization, 4 property-suite failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .complexity import channel_complexity
from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .dilations import Dilation
from .errors import GqcError, InfeasibleError, ProblemFormatError, ValidationError
from .geometry import hs_complexity_static
from .gksl import benchmark_bounds_table, growth_bound, standard_dilation, _coarse_bound_value
from .intrinsic import OptimizerOptions, intrinsic_complexity, intrinsic_noise
from .operators import validate_hermitian
from .problems import (
    ProblemSpec,
    load_problem,
    matrix_from_payload,
    result_to_payload,
)
from .reports import ReportTable, emit_report
from .verify import run_suites

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_PROPERTY_FAILURE = 4


def _parse_t_grid(text: str) -> np.ndarray:
    """Parse 'start:stop:n' into a linspace grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ProblemFormatError(f"--t-grid: expected start:stop:n, got {text!r}")
    try:
        start, stop, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ProblemFormatError(f"--t-grid: could not parse {text!r}")
    if n < 1 or stop < start or start < 0:
        raise ProblemFormatError(f"--t-grid: invalid range {text!r}")
    return np.linspace(start, stop, n)


def _parse_tolerances(pairs, base: ToleranceConfig) -> ToleranceConfig:
    overrides = {}
    known = set(ToleranceConfig.field_names())
    for pair in pairs or ():
        if "=" not in pair:
            raise ProblemFormatError(f"--tol: expected name=value, got {pair!r}")
        name, _, value = pair.partition("=")
        if name not in known:
            raise ProblemFormatError(f"--tol: unknown tolerance {name!r}")
        try:
            overrides[name] = int(value) if name == "dim_cap" else float(value)
        except ValueError:
            raise ProblemFormatError(f"--tol: could not parse value in {pair!r}")
    return base.replace(**overrides) if overrides else base


def _metadata(seed: int, tol: ToleranceConfig) -> dict:
    return {
        "artifact_version": __version__,
        "seed": seed,
        "tolerances": {name: getattr(tol, name) for name in ToleranceConfig.field_names()},
    }


def _resolve_grid(args, payload_grid) -> np.ndarray:
    if getattr(args, "t_grid", None):
        return _parse_t_grid(args.t_grid)
    if getattr(args, "t", None) is not None:
        return np.array([float(args.t)])
    if payload_grid is not None:
        return payload_grid
    raise ProblemFormatError("t: missing (provide --t, --t-grid, or a grid in the spec)")


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------

def _cmd_unitary(args) -> int:
    tol = _parse_tolerances(args.tol, DEFAULT_TOLERANCES)
    seed = args.seed or 0
    if args.spec:
        spec = load_problem(args.spec)
        if spec.kind != "unitary":
            raise ProblemFormatError(f"kind: expected 'unitary', got {spec.kind!r}")
        tol = _parse_tolerances(args.tol, spec.tolerances)
        seed = args.seed if args.seed is not None else spec.seed
        h = spec.payload["h"]
        grid = _resolve_grid(args, spec.payload["t_grid"])
    elif args.h:
        doc = json.loads(Path(args.h).read_text(encoding="utf-8"))
        h = matrix_from_payload(doc, "h")
        grid = _resolve_grid(args, None)
    else:
        raise ProblemFormatError("unitary: provide --spec or --h")
    h = validate_hermitian(h, tol, "h")
    d = h.shape[0]
    rows = [(float(t), hs_complexity_static(h, t, d, tol)) for t in grid]
    for t, value in rows:
        print(f"G_hs(exp(-itH)) at t={t:g}: {value:.12g}")
    table = ReportTable(("t", "complexity"), rows, _metadata(seed, tol))
    written = emit_report(table, args.out, f"unitary_seed{seed}", _formats(args))
    _announce(written)
    return EXIT_OK


def _channel_rows(dilation: Dilation, h_S, grid, tol) -> list[tuple]:
    rows = []
    for t in grid:
        rep = channel_complexity(dilation, h_S, t, tol, include_noise=True)
        rows.append((float(t), rep.total_term, rep.surrogate_term, rep.value,
                     rep.noise_value))
    return rows


def _cmd_channel(args, kind: str) -> int:
    spec = load_problem(args.spec)
    if spec.kind not in ("channel", "noise"):
        raise ProblemFormatError(f"kind: expected 'channel' or 'noise', got {spec.kind!r}")
    tol = _parse_tolerances(args.tol, spec.tolerances)
    seed = args.seed if args.seed is not None else spec.seed
    grid = _resolve_grid(args, spec.payload["t_grid"])
    rows = _channel_rows(spec.payload["dilation"], spec.payload["h_S"], grid, tol)
    headline = "noise_value" if kind == "noise" else "value"
    for row in rows:
        value = row[4] if kind == "noise" else row[3]
        print(f"{headline} at t={row[0]:g}: {value:.12g}")
    table = ReportTable(("t", "total_term", "surrogate_term", "value", "noise_value"),
                        rows, _metadata(seed, tol))
    written = emit_report(table, args.out, f"{kind}_seed{seed}", _formats(args))
    _announce(written)
    return EXIT_OK


def _cmd_intrinsic(args) -> int:
    spec = load_problem(args.spec)
    if spec.kind != "intrinsic":
        raise ProblemFormatError(f"kind: expected 'intrinsic', got {spec.kind!r}")
    tol = _parse_tolerances(args.tol, spec.tolerances)
    seed = args.seed if args.seed is not None else spec.seed
    payload = spec.payload
    opts = payload["options"]
    opts = OptimizerOptions(starts=opts.starts, seed=seed, max_iters=opts.max_iters,
                            fd_step=opts.fd_step, mu1=opts.mu1, mu2=opts.mu2,
                            polish_tol=opts.polish_tol, n_threads=opts.n_threads)
    runner = intrinsic_noise if payload["objective"] == "noise" else intrinsic_complexity
    result = runner(payload["target"], payload["constraints"], payload["h_S"],
                    payload["t_eval"], opts, payload["seed_dilations"], tol)
    print(f"intrinsic {result.objective} best value: {result.best_value:.12g} "
          f"(channel residual {result.channel_residual:.3g}, "
          f"starts {result.starts_used})")
    rows = [(payload["t_eval"], result.best_value, result.channel_residual,
             result.norm_residual, result.feasible, result.starts_used, result.seed)]
    table = ReportTable(("t", "best_value", "channel_residual", "norm_residual",
                         "feasible", "starts_used", "seed"), rows,
                        _metadata(seed, tol))
    written = emit_report(table, args.out, f"intrinsic_seed{seed}", _formats(args))
    result_path = Path(args.out) / f"intrinsic_seed{seed}_result.json"
    result_path.write_text(json.dumps(result_to_payload(result), indent=2) + "\n",
                           encoding="utf-8")
    written.append(result_path)
    _announce(written)
    return EXIT_OK


def _cmd_gksl_bound(args) -> int:
    spec = load_problem(args.spec)
    if spec.kind != "gksl_bound":
        raise ProblemFormatError(f"kind: expected 'gksl_bound', got {spec.kind!r}")
    tol = _parse_tolerances(args.tol, spec.tolerances)
    seed = args.seed if args.seed is not None else spec.seed
    g = spec.payload["generator"]
    bath = spec.payload["bath"]
    grid = _resolve_grid(args, spec.payload["t_grid"])
    dilation = standard_dilation(g, bath, tol)
    rows = []
    for t in grid:
        rep = channel_complexity(dilation, g.h_S, t, tol, include_noise=True)
        full, reduced = growth_bound(g, bath, t, tol)
        coarse = _coarse_bound_value(g, bath, t)
        rows.append((float(t), rep.value, rep.noise_value, reduced, coarse, full))
    table = ReportTable(("t", "complexity_value", "noise_value", "bound_reduced",
                         "bound_coarse", "bound_full"), rows, _metadata(seed, tol))
    print(f"gksl bounds over {len(rows)} grid points "
          f"(final reduced bound {rows[-1][3]:.12g})")
    written = emit_report(table, args.out, f"gksl_bound_seed{seed}", _formats(args))
    _announce(written)
    return EXIT_OK


def _cmd_bench(args) -> int:
    spec = load_problem(args.spec)
    if spec.kind != "benchmark":
        raise ProblemFormatError(f"kind: expected 'benchmark', got {spec.kind!r}")
    tol = _parse_tolerances(args.tol, spec.tolerances)
    seed = args.seed if args.seed is not None else spec.seed
    grid = _resolve_grid(args, spec.payload["t_grid"])
    table = benchmark_bounds_table(spec.payload["specs"], spec.payload["bath"],
                                   grid, tol)
    table.metadata.update(_metadata(seed, tol))
    written = []
    kinds = []
    for kind in dict.fromkeys(table.column("kind")):
        kinds.append(kind)
        sub = ReportTable(table.columns,
                          [r for r in table.rows if r[0] == kind],
                          dict(table.metadata))
        written += emit_report(sub, args.out, f"bench_{kind}_seed{seed}", ("csv",))
    if "svg" in _formats(args):
        written += emit_report(table, args.out, f"bench_seed{seed}", ("svg",))
    print(f"benchmark table: {len(table.rows)} rows over kinds {', '.join(kinds)}")
    _announce(written)
    return EXIT_OK


def _cmd_verify(args) -> int:
    suites = "all"
    if args.suite and args.suite != "all":
        suites = [s.strip() for s in args.suite.split(",") if s.strip()]
    seed = args.seed if args.seed is not None else 7
    tol = _parse_tolerances(args.tol, DEFAULT_TOLERANCES)
    results = run_suites(suites, seed, tol)
    failures = 0
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        print(f"[{tag}] {r.suite}/{r.name}: {r.detail}")
        failures += 0 if r.passed else 1
    print(f"{len(results) - failures}/{len(results)} checks passed (seed {seed})")
    return EXIT_OK if failures == 0 else EXIT_PROPERTY_FAILURE


def _formats(args) -> tuple:
    text = getattr(args, "format", None) or "csv"
    formats = tuple(f.strip() for f in text.split(",") if f.strip())
    for f in formats:
        if f not in ("csv", "svg"):
            raise ProblemFormatError(f"--format: unknown format {f!r}")
    return formats


def _announce(paths) -> None:
    for p in paths:
        print(f"wrote {p}")


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gqc",
        description="Geometric complexity of unitary evolutions and dilated channels")
    parser.add_argument("--version", action="version", version=f"gqc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec_required=True):
        if spec_required:
            p.add_argument("--spec", required=True, help="problem file (JSON)")
        else:
            p.add_argument("--spec", help="problem file (JSON)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--t", type=float, help="single evaluation time")
        p.add_argument("--t-grid", dest="t_grid", help="time grid start:stop:n")
        p.add_argument("--seed", type=int, help="seed override")
        p.add_argument("--tol", action="append", metavar="name=value",
                       help="tolerance override (repeatable)")
        p.add_argument("--format", default="csv", help="output formats: csv,svg")

    p = sub.add_parser("unitary", help="closed-form unitary complexity")
    common(p, spec_required=False)
    p.add_argument("--h", help="Hermitian generator matrix file (JSON)")

    common(sub.add_parser("channel", help="subtractive channel complexity"))
    common(sub.add_parser("noise", help="noise complexity relative to the ideal evolution"))
    common(sub.add_parser("intrinsic", help="constrained minimization over dilations"))
    common(sub.add_parser("gksl-bound", help="dissipator-controlled growth bounds"))
    common(sub.add_parser("bench", help="benchmark channel trend tables"))

    v = sub.add_parser("verify", help="run the property suites")
    v.add_argument("--suite", default="all", help="'all' or comma-separated suite names")
    v.add_argument("--seed", type=int, help="verifier seed (default 7)")
    v.add_argument("--tol", action="append", metavar="name=value",
                   help="tolerance override (repeatable)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(exc.code or 0)
    if os.environ.get("GQC_THREADS", "").strip():
        # validated here so a bad value fails fast with exit 2
        try:
            int(os.environ["GQC_THREADS"])
        except ValueError:
            print("GQC_THREADS must be an integer", file=sys.stderr)
            return EXIT_VALIDATION
    try:
        if args.command == "unitary":
            return _cmd_unitary(args)
        if args.command == "channel":
            return _cmd_channel(args, "channel")
        if args.command == "noise":
            return _cmd_channel(args, "noise")
        if args.command == "intrinsic":
            return _cmd_intrinsic(args)
        if args.command == "gksl-bound":
            return _cmd_gksl_bound(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "verify":
            return _cmd_verify(args)
        parser.error(f"unknown subcommand {args.command!r}")
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ProblemFormatError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except GqcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON ({exc})", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
