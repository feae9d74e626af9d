"""Command-line front end.

Subcommands: `compare` (full pipeline), `drill` (pipeline, report only),
`eigensurface` (single-stage surface dump), `synth` (fixture generation),
and `validate` (ingestion check). Every run with an output directory
writes a `config.json` echo sufficient to reproduce it exactly.

Exit codes: 0 success, 1 internal numerical failure, 2 input/usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .eigensurface import build_eigensurface
from .errors import (AlignmentError, MatrixFormatError, PipelineError,
                     WindowError)
from .matrix_io import load_matrix, write_matrix, write_report, write_surface
from .multires import PipelineConfig, run_pipeline
from .synth import antidiag_matrix, diag_matrix, planted_pair, scaled_pair

_INPUT_ERRORS = (FileNotFoundError, MatrixFormatError, AlignmentError,
                 WindowError, ValueError)


def _parse_schedule(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"schedule must be a comma list of integers, got '{text}'") from None


def _parse_dims(text: str) -> tuple[int, int]:
    try:
        m, n = text.lower().split("x")
        return int(m), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"dims must look like 200x100, got '{text}'") from None


def _resolve_threads(value: int | None) -> int | None:
    if value is not None:
        return value
    env = os.environ.get("EIGENSURF_THREADS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"EIGENSURF_THREADS must be an integer, got '{env}'") from None
    return None


def _config_from(args) -> PipelineConfig:
    return PipelineConfig(
        n_target=args.n_target,
        schedule=args.k_schedule,
        mode=args.mode,
        axis=args.axis,
        top_k=args.top_k,
        normalize=not args.no_normalize,
        threads=_resolve_threads(args.threads),
    )


def _write_config_echo(out_dir: Path, command: str, config: PipelineConfig | None,
                       extra: dict) -> None:
    doc = {"command": command, "version": __version__}
    if config is not None:
        doc.update(config.echo())
        doc["threads"] = config.threads
    doc.update(extra)
    with open(out_dir / "config.json", "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_pass_surfaces(report, out_dir: Path) -> None:
    cmp = report.comparison
    k = cmp.k
    named = {
        f"E_control_k{k}.csv": cmp.control_bundle.E,
        f"E_deformed_k{k}.csv": cmp.deformed_bundle.E,
        f"D1_control_k{k}.csv": cmp.control_bundle.D1,
        f"D1_deformed_k{k}.csv": cmp.deformed_bundle.D1,
        f"D2_control_k{k}.csv": cmp.control_bundle.D2,
        f"D2_deformed_k{k}.csv": cmp.deformed_bundle.D2,
        f"dist_E_k{k}.csv": cmp.surfaces["dist_E"],
        f"dist_D1_k{k}.csv": cmp.surfaces["dist_D1"],
        f"dist_D2_k{k}.csv": cmp.surfaces["dist_D2"],
        f"freedist_E_k{k}.csv": cmp.surfaces["freedist_E"],
        f"freedist_D1_k{k}.csv": cmp.surfaces["freedist_D1"],
        f"freedist_D2_k{k}.csv": cmp.surfaces["freedist_D2"],
        f"jacobian_k{k}.csv": cmp.surfaces["jacobian"],
    }
    for name, surface in named.items():
        write_surface(surface, out_dir / name)
        report.surface_files[name.removesuffix(".csv").removesuffix(f"_k{k}")] = name


def cmd_compare(args) -> int:
    config = _config_from(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    report = run_pipeline(args.control, args.deformed, config)
    if not args.report_only:
        _write_pass_surfaces(report, out_dir)
    write_report(report, out_dir / "report.json")
    _write_config_echo(out_dir, args.command, config,
                       {"control": str(args.control), "deformed": str(args.deformed)})
    print(f"wrote {out_dir / 'report.json'} "
          f"({len(report.candidates)} candidate rows, "
          f"{len(report.extrema)} seeds)")
    return 0


def cmd_eigensurface(args) -> int:
    threads = _resolve_threads(args.threads)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    matrix = load_matrix(args.matrix)
    surface = build_eigensurface(matrix.values, args.k, mode=args.mode,
                                 threads=threads)
    path = out_dir / f"E_k{args.k}.csv"
    write_surface(surface, path)
    _write_config_echo(out_dir, args.command, None,
                       {"matrix": str(args.matrix), "k": args.k,
                        "mode": args.mode, "threads": threads})
    print(f"wrote {path} ({surface.values.shape[0]}x{surface.values.shape[1]})")
    return 0


def cmd_synth(args) -> int:
    m, n = args.dims
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if args.fixture == "diag":
        write_matrix(diag_matrix(m, n), out_dir / "diag.csv")
        written = ["diag.csv"]
    elif args.fixture == "antidiag":
        write_matrix(antidiag_matrix(m, n), out_dir / "antidiag.csv")
        written = ["antidiag.csv"]
    elif args.fixture == "scaled":
        a, b = scaled_pair(m, n)
        write_matrix(a, out_dir / "scaled_control.csv")
        write_matrix(b, out_dir / "scaled_deformed.csv")
        written = ["scaled_control.csv", "scaled_deformed.csv"]
    else:
        control, deformed, truth = planted_pair(m, n)
        write_matrix(control, out_dir / "planted_control.csv")
        write_matrix(deformed, out_dir / "planted_deformed.csv")
        with open(out_dir / "planted_truth.json", "w") as fh:
            json.dump(truth, fh, indent=2, sort_keys=True)
            fh.write("\n")
        written = ["planted_control.csv", "planted_deformed.csv",
                   "planted_truth.json"]
    _write_config_echo(out_dir, args.command, None,
                       {"fixture": args.fixture, "dims": [m, n]})
    print(f"wrote {', '.join(written)} in {out_dir}")
    return 0


def cmd_validate(args) -> int:
    matrix = load_matrix(args.matrix)
    print(f"OK: {args.matrix} ({matrix.m} rows x {matrix.n} columns)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eigensurf",
        description="Multiscale Eigensurface comparison of time-series matrices")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_pipeline_flags(p):
        p.add_argument("control", help="control matrix CSV/TSV")
        p.add_argument("deformed", help="deformed matrix CSV/TSV")
        p.add_argument("-o", "--out", required=True, help="output directory")
        p.add_argument("--k-schedule", type=_parse_schedule, default=(40, 20, 10, 5),
                       help="comma list of strictly decreasing window sizes "
                            "(default 40,20,10,5)")
        p.add_argument("--n-target", type=int, default=100,
                       help="row interpolation target length (default 100)")
        p.add_argument("--mode", choices=("eigen", "svd"), default="eigen",
                       help="spectral sum per window (default eigen)")
        p.add_argument("--axis", choices=("row", "col", "mixed"), default="mixed",
                       help="derivative axis for surface calculus (default mixed)")
        p.add_argument("--top-k", type=int, default=10,
                       help="number of seed extrema to drill (default 10)")
        p.add_argument("--no-normalize", action="store_true",
                       help="skip min-max normalization of Eigensurfaces")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: EIGENSURF_THREADS or all cores); "
                            "affects wall time only, never output")

    p = sub.add_parser("compare", help="run the full comparison pipeline")
    add_pipeline_flags(p)
    p.set_defaults(func=cmd_compare, report_only=False)

    p = sub.add_parser("drill", help="run the pipeline, write report only "
                                     "(no surface CSV dumps)")
    add_pipeline_flags(p)
    p.set_defaults(func=cmd_compare, report_only=True)

    p = sub.add_parser("eigensurface", help="single-stage Eigensurface dump")
    p.add_argument("matrix", help="matrix CSV/TSV")
    p.add_argument("-k", type=int, required=True, help="window size")
    p.add_argument("--mode", choices=("eigen", "svd"), default="eigen")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("-o", "--out", required=True, help="output directory")
    p.set_defaults(func=cmd_eigensurface)

    p = sub.add_parser("synth", help="generate a synthetic fixture")
    p.add_argument("fixture", choices=("diag", "antidiag", "scaled", "planted"))
    p.add_argument("dims", type=_parse_dims, help="matrix dims, e.g. 200x100")
    p.add_argument("-o", "--out", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("validate", help="check that a matrix file ingests cleanly")
    p.add_argument("matrix", help="matrix CSV/TSV")
    p.set_defaults(func=cmd_validate)

    return parser


def _is_input_error(exc: BaseException) -> bool:
    import numpy as np
    if isinstance(exc, np.linalg.LinAlgError):  # subclasses ValueError
        return False
    return isinstance(exc, _INPUT_ERRORS)


def _exit_code_for(exc: Exception) -> int:
    if isinstance(exc, PipelineError):
        cause = exc.__cause__
        # stage preconditions raise bare PipelineErrors; numerical failures
        # arrive wrapped with their original cause attached
        if cause is None or _is_input_error(cause):
            return 2
        return 1
    return 2 if _is_input_error(exc) else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
