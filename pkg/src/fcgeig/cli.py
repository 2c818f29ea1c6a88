"""Command-line interface: ``fcgeig {solve,bench,check,oracle,gen}``.

Exit codes: 0 when every solve converged, 2 when some did not, 1 on usage,
parse or configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import nullcontext
from pathlib import Path

import numpy as np

from .bench import (
    RunConfig,
    build_objective,
    config_from_dict,
    format_summary,
    load_config,
    run_trials,
)
from .errors import FCGError
from .generators import GenSpec, gen_tensor, rng
from .io import write_tensor_file
from .oracle import enumerate_n2, enumerate_n3, fd_check_gradient, fd_check_hessian
from .solver import solve

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 means "some trials failed" here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--tensor-file", help="tensor JSON file (overrides the config tensor)")
    p.add_argument("--family", help="tensor family ex1..ex6 (overrides the config tensor)")
    p.add_argument("--order", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--tensor-seed", type=int)
    p.add_argument("--bform", help="identity2, diagpower, ex7 or ex8")
    p.add_argument("--bform-order", type=int)
    p.add_argument("--bform-seed", type=int)
    p.add_argument("--sense", choices=["min", "max"])
    p.add_argument("--seed", type=int, help="seed of the start-vector stream")
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--delta", type=float, help="constant initial step (default: curvature estimate)")


def _run_config(args) -> RunConfig:
    """Config file first, then command-line overrides."""
    if args.config:
        cfg = load_config(args.config)
        doc = cfg.to_dict()
    else:
        doc = {}
    if args.tensor_file:
        doc["tensor"] = {"file": str(Path(args.tensor_file).resolve())}
    elif args.family or args.order is not None or args.dim is not None or args.tensor_seed is not None:
        t = dict(doc.get("tensor", {}))
        if "file" in t or args.family:
            t = {"family": args.family or t.get("family")}
        for key, val in (("order", args.order), ("dim", args.dim), ("seed", args.tensor_seed)):
            if val is not None:
                t[key] = val
        doc["tensor"] = t
    if args.bform or args.bform_order is not None or args.bform_seed is not None:
        b = dict(doc.get("bform", {}))
        if args.bform:
            b = {"family": args.bform}
        if args.bform_order is not None:
            b["order"] = args.bform_order
        if args.bform_seed is not None:
            b["seed"] = args.bform_seed
        doc["bform"] = b
    if args.sense:
        doc["sense"] = args.sense
    if args.seed is not None:
        doc["seed"] = args.seed
    solver = dict(doc.get("solver", {}))
    for key, val in (("tol", args.tol), ("max_iter", args.max_iter), ("delta", args.delta)):
        if val is not None:
            solver[key] = val
    doc["solver"] = solver
    for key in ("trials", "workers"):
        if getattr(args, key, None) is not None:
            doc[key] = getattr(args, key)
    if "tensor" not in doc:
        raise _UsageError("no tensor given: use --config, --family or --tensor-file")
    return config_from_dict(doc)


class _UsageError(Exception):
    pass


def _open_out(path):
    return open(path, "w", encoding="utf-8") if path else nullcontext(sys.stdout)


def cmd_solve(args) -> int:
    cfg = _run_config(args)
    obj = build_objective(cfg)
    if args.x0:
        x0 = np.array([float(v) for v in args.x0.split(",")])
        if x0.shape[0] != obj.dim:
            raise _UsageError(f"--x0 has {x0.shape[0]} entries, expected {obj.dim}")
    else:
        x0 = rng(cfg.seed).uniform(-1.0, 1.0, obj.dim)
    res = solve(obj, x0, cfg.solver)
    doc = {
        "lambda": res.lam,
        "res": res.residual,
        "iters": res.iterations,
        "backtracks": res.total_backtracks,
        "converged": res.converged,
        "message": res.message,
    }
    if args.print_x:
        doc["x"] = res.x.tolist()
    print(json.dumps(doc))
    if args.trace:
        with open(args.trace, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "lambda", "grad_norm", "res", "alpha"])
            for e in res.trace:
                w.writerow([e.k, *(repr(float(v)) for v in (e.lam, e.grad_norm, e.res, e.alpha))])
    return EXIT_OK if res.converged else EXIT_FAILED


def cmd_bench(args) -> int:
    cfg = _run_config(args)
    with _open_out(args.out) as out:
        report = run_trials(cfg, out=out)
        out.flush()
    # keep stdout pure JSONL when records go there
    stream = sys.stderr if not args.out else sys.stdout
    print(format_summary(report), file=stream)
    if args.summary_json:
        doc = {"config": cfg.to_dict(), **report.to_dict()}
        Path(args.summary_json).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK if report.suc == report.trials else EXIT_FAILED


def cmd_check(args) -> int:
    cfg = _run_config(args)
    obj = build_objective(cfg)
    gen = rng(cfg.seed)
    worst_g = worst_h = 0.0
    for _ in range(args.points):
        x = obj.B.normalize(gen.uniform(-1.0, 1.0, obj.dim))
        eg = fd_check_gradient(obj, x, args.step)
        eh = fd_check_hessian(obj, x, args.step)
        worst_g, worst_h = max(worst_g, eg), max(worst_h, eh)
        print(json.dumps({"grad_err": eg, "hess_err": eh}))
    ok = worst_g <= args.grad_tol and worst_h <= args.hess_tol
    print(f"max grad err {worst_g:.3e}, max hess err {worst_h:.3e}: {'ok' if ok else 'FAIL'}",
          file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_oracle(args) -> int:
    cfg = _run_config(args)
    obj = build_objective(cfg)
    if obj.dim == 2:
        found = enumerate_n2(obj, args.grid)
    elif obj.dim == 3:
        found = enumerate_n3(obj, args.starts, cfg.seed, cfg.solver)
    else:
        raise _UsageError(f"oracle supports n = 2 or 3, got {obj.dim}")
    for p in found.pairs:
        print(json.dumps({"lambda": p.lam, "res": p.residual, "x": p.x.tolist()}))
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = GenSpec(args.family, args.order, args.dim, args.seed)
    write_tensor_file(gen_tensor(spec), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fcgeig", description="B-eigenpairs of symmetric tensors.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="single run from one start vector")
    _add_problem_args(p)
    p.add_argument("--x0", help="comma-separated start vector (default: seeded uniform draw)")
    p.add_argument("--trace", help="write the per-iteration trace as CSV")
    p.add_argument("--print-x", action="store_true", help="include the eigenvector in the output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="multi-start experiment")
    _add_problem_args(p)
    p.add_argument("--trials", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="JSONL output path (default: stdout)")
    p.add_argument("--summary-json", help="write the cluster summary as JSON")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("check", help="finite-difference derivative checks")
    _add_problem_args(p)
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--step", type=float, default=1e-5)
    p.add_argument("--grad-tol", type=float, default=1e-5)
    p.add_argument("--hess-tol", type=float, default=1e-4)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="enumerate eigenpairs for n = 2 or 3")
    _add_problem_args(p)
    p.add_argument("--grid", type=int, default=2048)
    p.add_argument("--starts", type=int, default=1000)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write a generated tensor to a JSON file")
    p.add_argument("family")
    p.add_argument("output")
    p.add_argument("--order", type=int)
    p.add_argument("--dim", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (_UsageError, FCGError, ValueError, OSError) as exc:
        print(f"fcgeig: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
