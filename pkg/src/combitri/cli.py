"""Command line front end.

Exit codes: 0 ok, 2 parse error, 3 illegal move, 4 failed precondition,
5 internal assertion, 6 search budget exhausted.

Inputs are facet-list or JSON files; ``fixture:NAME`` loads a built-in
fixture instead.  The search budget defaults to $COMBITRI_BUDGET when set.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import constructions as cons
from .complex_core import (
    boundary_f_vector,
    double,
    euler_characteristic,
    f_vector,
    is_closed,
    simplex,
    verify_manifold,
)
from .errors import CombitriError, ParseError
from .fvector import FVector, d_vector, ds_residual_boundary, ds_residual_closed, solve_virtual_plan
from .io import read_complex, read_log, write_facet_list, write_log
from .moves import (
    MoveLog,
    apply_bistellar,
    apply_shelling,
    enumerate_bistellar,
    enumerate_shellings,
    induced_boundary_move,
    move_from_json,
    star_subdivide_along_face,
)


def _budget_default() -> int:
    return int(os.environ.get("COMBITRI_BUDGET", cons.DEFAULT_BUDGET))


def _load(source: str):
    if source.startswith("fixture:"):
        return cons.fixture(source.split(":", 1)[1])
    try:
        return read_complex(source)
    except OSError as exc:
        raise ParseError(f"cannot read {source}: {exc}")


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"expected a list of integers, got {text!r}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _move_arg(text: str):
    try:
        return move_from_json(json.loads(text))
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"bad move JSON: {exc}")


def _fmt(vals) -> str:
    return ",".join(str(v) for v in vals)


# ---- subcommands ----------------------------------------------------------------

def cmd_fvec(args) -> int:
    C = _load(args.path)
    fv = f_vector(C)
    parts = [f"f = {fv}", f"chi = {euler_characteristic(C)}"]
    if is_closed(C):
        ok = not any(ds_residual_closed(fv))
        parts.append("DS: closed-ok" if ok else f"DS: closed-FAIL {_fmt(ds_residual_closed(fv))}")
    else:
        bf = boundary_f_vector(C)
        res = ds_residual_boundary(fv, bf)
        parts.append(f"boundary f = {bf}")
        parts.append("DS(2): ok" if not any(res) else f"DS(2): FAIL {_fmt(res)}")
    print("; ".join(parts))
    return 0


def cmd_check(args) -> int:
    p = Path(args.path)
    if p.suffix == ".json" and p.exists():
        rec = json.loads(p.read_text())
        if rec.get("kind") in ("plump", "mold"):
            cert = cons.verify_cell(cons.cell_from_json(rec))
            print(cert.summary())
            return 0 if cert.ok else 4
    C = _load(args.path)
    cert = verify_manifold(C, budget=args.budget, seed=args.seed)
    print(f"status = {cert.status}; exact = {str(cert.checked_dim_exact).lower()}; {cert.detail}")
    if cert.witness is not None:
        print(f"witness = {list(cert.witness)}")
    return 0 if cert.ok else 4


def cmd_moves(args) -> int:
    C = _load(args.path)
    if args.shellings:
        moves = enumerate_shellings(C)
    else:
        moves = enumerate_bistellar(C, args.i)
    for m in moves:
        print(json.dumps(m.to_json(), sort_keys=True))
    return 0


def _write_step(C, new, kind, params, args) -> None:
    _emit(write_facet_list(new), args.output)
    if args.log:
        log = MoveLog()
        log.append(kind, params, C, new)
        Path(args.log).write_text(write_log(log))


def cmd_apply(args) -> int:
    C = _load(args.path)
    m = _move_arg(args.move).resolved(C)
    new = apply_bistellar(C, m)
    _write_step(C, new, "bistellar", m.to_json(), args)
    return 0


def cmd_shell(args) -> int:
    C = _load(args.path)
    m = _move_arg(args.move)
    induced = induced_boundary_move(C, m)
    new = apply_shelling(C, m)
    _write_step(C, new, "shelling", m.to_json(), args)
    print(json.dumps({"induced_boundary_move": induced.to_json()}, sort_keys=True), file=sys.stderr)
    return 0


def cmd_subdivide(args) -> int:
    C = _load(args.path)
    F, G = simplex(_ints(args.facet)), simplex(_ints(args.face))
    new = star_subdivide_along_face(C, F, G)
    _write_step(C, new, "star-subdivide", {"facet": list(F), "face": list(G)}, args)
    return 0


def cmd_double(args) -> int:
    C = _load(args.path)
    _emit(write_facet_list(double(C)), args.output)
    return 0


def cmd_dvec(args) -> int:
    print(_fmt(d_vector(args.n, args.i).d))
    return 0


def cmd_solve(args) -> int:
    src = FVector.from_counts(_ints(args.source))
    dst = FVector.from_counts(_ints(args.target))
    for fv in (src, dst):
        if fv.n != args.n:
            raise ParseError(f"expected {args.n + 1} entries, got {fv.n + 1}")
    print(solve_virtual_plan(src, dst).describe())
    return 0


def _cell_out(cell, to_json, verify, args) -> int:
    rec = to_json(cell)
    rec["seed"], rec["budget"] = args.seed, args.budget
    text = json.dumps(rec, sort_keys=True, indent=1) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    cert = verify(cell)
    print(f"seed = {args.seed}; budget = {args.budget}; facets = {len(cell.disk)}")
    print(cert.summary())
    if not args.output:
        sys.stdout.write(text)
    return 0 if cert.ok else 5


def cmd_plump(args) -> int:
    cell = cons.build_plump_cell(args.n, seed=args.seed, budget=args.budget)
    return _cell_out(cell, cons.plump_to_json, cons.verify_plump, args)


def cmd_mold(args) -> int:
    cell = cons.build_mold_cell(args.n, seed=args.seed, budget=args.budget)
    return _cell_out(cell, cons.mold_to_json, cons.verify_mold, args)


def cmd_equalize(args) -> int:
    from .equalizer import equalize_boundary, equalize_closed, equalize_full, replay, write_result

    A, B = _load(args.a), _load(args.b)
    fn = equalize_full if args.full else equalize_boundary if args.boundary else equalize_closed
    res = fn(A, B, seed=args.seed, budget=args.budget)
    cells = res.report["cells"]
    if replay(A, res.log1, cells).facets != res.c1_star.facets or \
            replay(B, res.log2, cells).facets != res.c2_star.facets:
        from .errors import InternalAssertFailed

        raise InternalAssertFailed("replay of the written logs failed")
    if args.output:
        write_result(res, args.output)
    rep = res.report
    print(f"mode = {rep['mode']}; seed = {args.seed}; budget = {args.budget}")
    if "plan" in rep:
        print(f"plan = {res.plan.describe()}")
    if "boundary_plan" in rep:
        print(f"boundary plan = {_fmt(rep['boundary_plan'])}; N = {rep['boundary_N']}")
    print(f"f out = {_fmt(rep['f_output'][0])} | {_fmt(rep['f_output'][1])}")
    if "boundary_f_output" in rep:
        b = rep["boundary_f_output"]
        print(f"boundary f out = {_fmt(b[0])} | {_fmt(b[1])}")
    print("replay = ok")
    return 0


def cmd_replay(args) -> int:
    from .equalizer import replay

    C = _load(args.path)
    log = read_log(Path(args.log).read_text())
    cells = {}
    if args.cells:
        cells = json.loads(Path(args.cells).read_text()).get("cells", {})
    out = replay(C, log, cells)
    if args.expect:
        want = _load(args.expect)
        if want.facets != out.facets:
            from .errors import ReplayMismatch

            raise ReplayMismatch("replayed complex differs from the expected one")
    _emit(write_facet_list(out), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="combitri", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, output=True):
        sp.add_argument("--seed", type=int, default=cons.DEFAULT_SEED, help="search seed")
        sp.add_argument("--budget", type=int, default=_budget_default(), help="search budget")
        if output:
            sp.add_argument("-o", "--output", help="output path (default: stdout)")

    sp = sub.add_parser("fvec", help="f-vector, Euler characteristic and Dehn–Sommerville check")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_fvec)

    sp = sub.add_parser("check", help="verify a manifold, or a plump/mold cell JSON file")
    sp.add_argument("path")
    common(sp, output=False)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("moves", help="list legal bistellar moves (or shellings)")
    sp.add_argument("path")
    sp.add_argument("-i", type=int, default=None, help="only moves of this type")
    sp.add_argument("--shellings", action="store_true", help="list elementary shellings instead")
    sp.set_defaults(func=cmd_moves)

    for name, func, hlp in (("apply", cmd_apply, "apply a bistellar move"),
                            ("shell", cmd_shell, "apply an elementary shelling")):
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("path")
        sp.add_argument("--move", required=True, help='JSON, e.g. {"kind":"bistellar","sigma":[1,2,3],"tau":[5],"i":0}')
        sp.add_argument("-o", "--output")
        sp.add_argument("--log", help="write a one-record move log here")
        sp.set_defaults(func=func)

    sp = sub.add_parser("subdivide", help="star subdivision of a facet along a free face")
    sp.add_argument("path")
    sp.add_argument("--facet", required=True)
    sp.add_argument("--face", required=True)
    sp.add_argument("-o", "--output")
    sp.add_argument("--log")
    sp.set_defaults(func=cmd_subdivide)

    sp = sub.add_parser("double", help="glue two copies along the boundary")
    sp.add_argument("path")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_double)

    sp = sub.add_parser("dvec", help="f-vector change of an n-dimensional i-move")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-i", type=int, required=True)
    sp.set_defaults(func=cmd_dvec)

    sp = sub.add_parser("solve", help="virtual move plan between two f-vectors")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--from", dest="source", required=True, help="f_0,...,f_n")
    sp.add_argument("--to", dest="target", required=True, help="f_0,...,f_n")
    sp.set_defaults(func=cmd_solve)

    for name, func in (("plump", cmd_plump), ("mold", cmd_mold)):
        sp = sub.add_parser(name, help=f"build and certify a {name} cell")
        sp.add_argument("-n", type=int, required=True)
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("equalize", help="retriangulate two manifolds to equal f-vectors")
    sp.add_argument("a")
    sp.add_argument("b")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--boundary", action="store_true", help="equalize boundary f-vectors only")
    mode.add_argument("--full", action="store_true", help="equalize f and boundary f")
    common(sp)
    sp.set_defaults(func=cmd_equalize)

    sp = sub.add_parser("replay", help="replay a move log with legality checks")
    sp.add_argument("path")
    sp.add_argument("log")
    sp.add_argument("--cells", help="report.json holding the implanted cells")
    sp.add_argument("--expect", help="complex the replay must reproduce")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_replay)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CombitriError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        witness = getattr(exc, "witness", None)
        if witness is not None:
            print(f"witness: {witness}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
