"""Command line front end: ``transwidth {orbit,width,witness,decompose,sweep,verify}``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import experiments as ex
from .decompose import projector_checksum, reynolds_invariant_subspaces
from .errors import TransWidthError
from .groups import (
    group_from_json,
    orbit_enumerate,
    sup_correlation,
    virtual_set,
)
from .measures import (
    dyadic_measure,
    haar_measure,
    haar_witness,
    measure_to_json,
    projected_dyadic_measure,
)
from .numeric import Tolerance, vector_from_json, vector_to_json
from .width import SolverConfig, width_report

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_INPUT = 0, 1, 2


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _global_options(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="64-bit RNG seed")
    p.add_argument("--tol", type=float, default=d(1e-9), help="equality tolerance")
    p.add_argument("--threads", type=int, default=d(1))
    p.add_argument("--out", default=d(None), help="write output to this path")
    p.add_argument("--format", choices=("csv", "json"), default=d("csv"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="transwidth", description=__doc__)
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        p = sub.add_parser(name, **kw)
        _global_options(p, suppress=True)
        return p

    p = add("orbit", help="enumerate an orbit")
    p.add_argument("--group", required=True)
    p.add_argument("--vector", required=True)
    p.add_argument("--max-size", type=int, default=100_000)
    p.add_argument("--points", action="store_true", help="include the point list")

    p = add("width", help="two-sided width bounds")
    p.add_argument("--group", required=True)
    p.add_argument("--vector", required=True)
    p.add_argument("--virtual", action="store_true", help="do not enumerate the orbit")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--max-size", type=int, default=100_000)

    p = add("witness", help="print a witness measure")
    p.add_argument("kind", choices=("dyadic", "projected", "haar"))
    p.add_argument("--dim", type=int)
    p.add_argument("--group")
    p.add_argument("--vector")
    p.add_argument("--virtual", action="store_true", help="do not enumerate the orbit")
    p.add_argument("--max-size", type=int, default=100_000)
    p.add_argument("--samples", type=int, default=10_000)

    p = add("decompose", help="invariant subspaces by group averaging")
    p.add_argument("--group", required=True)

    p = add("sweep", help="width sweep over a family")
    p.add_argument("--family", choices=ex.FAMILIES, default="sharpness")
    p.add_argument("--dims", default=",".join(str(2 ** k) for k in range(1, 13)))
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--svg", help="also write an SVG plot here")

    p = add("verify", help="run verification suites")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--suite", choices=sorted(ex.SUITES))
    g.add_argument("--all", action="store_true")
    return parser


def _transitive_set(args, tol):
    group = group_from_json(_load_json(args.group), tol)
    v = vector_from_json(_load_json(args.vector))
    if getattr(args, "virtual", False):
        return virtual_set(group, v, tol)
    return orbit_enumerate(group, v, args.max_size, tol)


def _cmd_orbit(args, tol):
    X = orbit_enumerate(group_from_json(_load_json(args.group), tol),
                        vector_from_json(_load_json(args.vector)), args.max_size, tol)
    out = {"size": len(X)}
    if args.points:
        out["points"] = [vector_to_json(p) for p in X.points]
    _emit(args, json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def _cmd_width(args, tol):
    X = _transitive_set(args, tol)
    cfg = SolverConfig(restarts=args.restarts, max_iters=args.max_iters, seed=args.seed)
    _emit(args, width_report(X, cfg).dumps() + "\n")
    return EXIT_OK


def _cmd_witness(args, tol):
    if args.kind in ("dyadic", "projected"):
        if not args.dim:
            raise ValueError("--dim is required")
        mu = dyadic_measure(args.dim, tol) if args.kind == "dyadic" else projected_dyadic_measure(args.dim, tol)
        _emit(args, json.dumps(measure_to_json(mu), indent=2) + "\n")
        return EXIT_OK
    if args.group and args.vector:
        X = _transitive_set(args, tol)
        w, val = haar_witness(X, args.samples, args.seed)
        out = {"witness": vector_to_json(w), "sup_correlation": val,
               "check": sup_correlation(X, w)}
    else:
        if not args.dim:
            raise ValueError("haar needs --dim, or --group and --vector")
        out = measure_to_json(haar_measure(args.dim, n_samples=args.samples, seed=args.seed))
    _emit(args, json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def _cmd_decompose(args, tol):
    g = group_from_json(_load_json(args.group), tol)
    dec = reynolds_invariant_subspaces(g, args.seed, tol=tol)
    out = {"dims": dec.dims,
           "projector_checksums": [projector_checksum(P) for P in dec.projectors()],
           "projector_traces": [float(np.real(np.trace(P))) for P in dec.projectors()]}
    _emit(args, json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def _cmd_sweep(args, tol):
    dims = [int(s) for s in args.dims.split(",") if s.strip()]
    cfg = ex.RunConfig(dims=dims, family=args.family, seed=args.seed, format=args.format,
                       threads=args.threads, solver=SolverConfig(restarts=args.restarts, seed=args.seed))
    rows = ex.run_sweep(cfg)
    _emit(args, ex.format_rows(rows, args.format))
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(ex.rows_to_svg(rows))
    return EXIT_OK


def _cmd_verify(args, tol):
    names = list(ex.SUITES) if args.all else [args.suite]
    ok = True
    lines = []
    for name in names:
        res = ex.run_verify(name, args.seed)
        ok &= res.passed
        lines.append(res.summary())
        lines.extend("    " + s for s in res.lines)
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


COMMANDS = {
    "orbit": _cmd_orbit,
    "width": _cmd_width,
    "witness": _cmd_witness,
    "decompose": _cmd_decompose,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = Tolerance(eq_tol=args.tol)
        return COMMANDS[args.command](args, tol)
    except (TransWidthError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
