"""Command-line front end: ``symharm {info,realify,basis,verify,eval,mesh}``.

Usage errors exit with status 2 (argparse).  Invariant failures exit with
status 1 and print a JSON report on standard output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .basis import FLAVORS, assemble_basis, get_context
from .errors import SymHarmError
from .groups import GROUP_NAMES
from .irreps import load_irreps
from .surface import MIN_THETA, MeshSpec, build_mesh, parse_grid, write_grid_csv, write_obj
from .tables import load_block, save_block, save_real_irrep, save_similarity
from .verify import Thresholds, realification_errors, run_protocol


def _fail(report: dict) -> int:
    print(json.dumps({"ok": False, **report}, indent=1, sort_keys=True))
    return 1


def _check_p(parser, ctx, p):
    if p is not None and not 1 <= p <= len(ctx.irreps):
        parser.error(f"--p must be in 1..{len(ctx.irreps)} for group {ctx.group.name}")


def cmd_info(args, parser) -> int:
    irreps = load_irreps(args.group)
    group = irreps[0].group
    dims = ",".join(str(ir.dim) for ir in irreps)
    real = ",".join(str(ir.p) for ir in irreps if ir.realness == "potentially_real")
    labels = ",".join(ir.label for ir in irreps)
    print(
        f"group={group.name} N_g={group.order} N_classes={len(group.classes)} N_rep={len(irreps)} "
        f"dims {dims} labels {labels} potentially_real {real}"
    )
    return 0


def cmd_realify(args, parser) -> int:
    ctx = get_context(args.group)
    _check_p(parser, ctx, args.p)
    ps = [args.p] if args.p is not None else [ir.p for ir in ctx.irreps]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    errors = realification_errors(ctx)
    failures = []
    for p in ps:
        if p not in ctx.realified:
            if args.p is not None:
                failures.append({"p": p, "error": f"irrep is {ctx.irrep(p).realness}, no real form"})
            continue
        bad = {k: v for k, v in errors[p].items() if not v < args.tol}
        if bad:
            failures.append({"p": p, "residuals": bad, "threshold": args.tol})
            continue
        res = ctx.realified[p]
        a = save_real_irrep(args.group, p, res.gamma_r, out / f"real_irrep_{args.group}_p{p}.json")
        b = save_similarity(args.group, p, res.S, out / f"similarity_{args.group}_p{p}.json")
        print(a)
        print(b)
    if failures:
        return _fail({"command": "realify", "group": args.group, "failures": failures})
    return 0


def cmd_basis(args, parser) -> int:
    ctx = get_context(args.group)
    _check_p(parser, ctx, args.p)
    if args.p is not None and args.p not in ctx.realified:
        return _fail(
            {
                "command": "basis",
                "group": args.group,
                "failures": [{"p": args.p, "error": f"irrep is {ctx.irrep(args.p).realness}, no real basis"}],
            }
        )
    basis = assemble_basis(ctx, args.l)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for block in basis.blocks(args.flavor):
        if args.p is not None and block.p != args.p:
            continue
        name = f"basis_{block.group}_l{block.l}_p{block.p}_n{block.n}_{block.flavor}.json"
        print(save_block(block, out / name))
    return 0


def cmd_verify(args, parser) -> int:
    thresholds = Thresholds(
        realify=args.tol_realify,
        orthogonality=args.tol_orthogonality,
        flavor=args.tol_flavor,
        transformation=args.tol_transformation,
        realness=args.tol_realness,
        quadrature=args.tol_quadrature,
    )
    report = run_protocol(args.group, args.lmax, args.seed, args.directions, thresholds)
    print(json.dumps(report.as_dict(), indent=1))
    return 0 if report.ok else 1


def _grid(parser, text: str) -> tuple[int, int]:
    try:
        return parse_grid(text)
    except ValueError as exc:
        parser.error(str(exc))


def cmd_eval(args, parser) -> int:
    nt, nphi = _grid(parser, args.grid)
    if nt < 2 or nphi < 1:
        parser.error("--grid needs NTHETA >= 2 and NPHI >= 1")
    block = load_block(args.input)
    write_grid_csv(block, nt, nphi, args.out)
    return 0


def cmd_mesh(args, parser) -> int:
    nt, nphi = _grid(parser, args.grid)
    if nt < MIN_THETA or nphi < 3:
        parser.error(f"--grid needs NTHETA >= {MIN_THETA} and NPHI >= 3")
    block = load_block(args.input)
    if not 1 <= args.j <= block.dim:
        parser.error(f"--j must be in 1..{block.dim} for this block")
    mesh = build_mesh(block, args.j, MeshSpec(nt, nphi))
    comment = f"symharm {__version__} group={block.group} p={block.p} l={block.l} n={block.n} j={args.j}"
    write_obj(mesh, args.out, comment)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symharm", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def group_arg(p):
        p.add_argument("--group", required=True, choices=GROUP_NAMES)

    p = sub.add_parser("info", help="group order, irrep count, dimensions and realness")
    group_arg(p)
    p.set_defaults(func=cmd_info, subparser=p)

    p = sub.add_parser("realify", help="write real irrep matrices and similarity matrices")
    group_arg(p)
    p.add_argument("--p", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--tol", type=float, default=Thresholds.realify)
    p.set_defaults(func=cmd_realify, subparser=p)

    p = sub.add_parser("basis", help="write coefficient blocks of degree L")
    group_arg(p)
    p.add_argument("--l", type=int, required=True, choices=range(0, 61), metavar="L")
    p.add_argument("--p", type=int)
    p.add_argument("--flavor", choices=FLAVORS, default="real")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_basis, subparser=p)

    p = sub.add_parser("verify", help="run the verification protocol for l = 0..LMAX")
    group_arg(p)
    p.add_argument("--lmax", type=int, required=True, choices=range(0, 61), metavar="LMAX")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--directions", type=int, default=100)
    defaults = Thresholds()
    for name in ("realify", "orthogonality", "flavor", "transformation", "realness", "quadrature"):
        p.add_argument(f"--tol-{name}", type=float, default=getattr(defaults, name))
    p.set_defaults(func=cmd_verify, subparser=p)

    p = sub.add_parser("eval", help="tabulate a block on a theta/phi grid as CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--grid", required=True, metavar="NTHETAxNPHI")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval, subparser=p)

    p = sub.add_parser("mesh", help="write the radial surface of one basis function as OBJ")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--grid", default="91x180", metavar="NTHETAxNPHI")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mesh, subparser=p)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, args.subparser)
    except (SymHarmError, ArithmeticError, OSError) as exc:
        return _fail({"command": args.command, "error": type(exc).__name__, "message": str(exc)})


if __name__ == "__main__":
    sys.exit(main())
