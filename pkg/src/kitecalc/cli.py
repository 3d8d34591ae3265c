"""kitecalc command-line interface.

Exit codes: 0 ok / holds, 1 counterexample or failed verification,
2 parse error or unknown identity, 3 shape mismatch, 4 evaluation cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import approx, covers, structure
from .checker import BudgetExceeded, UnboundVariable, check_identity, eval_term
from .kite import ShapeError, conform
from .lgroup import DimensionError
from .literals import LiteralError, format_element, format_shape, parse_element, parse_shape
from .terms import ParseError, catalog, parse_identity, parse_identity_file, parse_term

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_SHAPE, EXIT_CAP = 0, 1, 2, 3, 4


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    shape: str | None = None
    bound: int = 2
    identity: str | None = None
    levels: int = 4
    fmt: str = "human"
    workers: int = 1
    max_evals: int | None = None


def _bindings(pairs: list[str]) -> dict[str, object]:
    out = {}
    for p in pairs or []:
        name, sep, lit = p.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"binding must look like name=literal, got {p!r}")
        out[name.strip()] = parse_element(lit)
    return out


def _emit(args, human: str, payload) -> None:
    if args.format == "json":
        print(json.dumps(payload))
    else:
        print(human)


def _load_identities(spec: str):
    cat = catalog()
    if spec in cat:
        return [cat[spec]], False
    if os.path.isfile(spec):
        with open(spec, encoding="utf-8") as fh:
            return parse_identity_file(fh.read()), True
    if "=" in spec:
        return [parse_identity(spec, name=spec)], False
    raise UsageError(f"unknown identity {spec!r}; catalog names: {', '.join(cat)}")


def cmd_eval(args) -> int:
    shape = parse_shape(args.shape)
    term = parse_term(args.term)
    env = _bindings(args.bind)
    for x in env.values():
        conform(shape, x)
    value = eval_term(shape, term, env)
    _emit(args, format_element(value), {"value": format_element(value)})
    return EXIT_OK


def cmd_check(args) -> int:
    shape = parse_shape(args.shape)
    if not shape.is_finite:
        raise ShapeError("grid checks need a finite shape")
    idents, as_list = _load_identities(args.identity)
    reports = [check_identity(shape, ident, args.bound, workers=args.workers, max_evals=args.max_evals)
               for ident in idents]
    lines = []
    for r in reports:
        if r.holds:
            lines.append(f"{r.identity}: holds on {format_shape(shape)} bound {args.bound} "
                         f"({r.evaluations} evaluations)")
        else:
            cex = ", ".join(f"{k}={format_element(v)}" for k, v in r.counterexample.items())
            lines.append(f"{r.identity}: counterexample {cex} ({r.evaluations} evaluations)")
    payload = [r.to_json() for r in reports] if as_list else reports[0].to_json()
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK if all(r.holds for r in reports) else EXIT_FAIL


def _witness_json(res):
    if res.witness is None:
        return None
    return {"I": list(res.witness[0]), "J": list(res.witness[1])}


def cmd_classify(args) -> int:
    shape = parse_shape(args.shape)
    res = structure.classify(shape)
    human = str(res.type_tag)
    if res.witness is not None:
        human += f"\nwitness: I -> {list(res.witness[0])}, J -> {list(res.witness[1])}"
    _emit(args, human, {"shape": format_shape(shape), "si": res.si,
                        "type": str(res.type_tag), "witness": _witness_json(res)})
    return EXIT_OK


def cmd_decompose(args) -> int:
    shape = parse_shape(args.shape)
    if not shape.is_finite:
        raise ShapeError("decomposition needs a finite shape")
    rep = structure.decompose(shape, args.bound)
    lines = [f"{format_shape(f.shape)}  {f.classification.type_tag}  I={list(f.i_index)} J={list(f.j_index)}"
             for f in rep.factors]
    lines.append(f"embedding on bound {args.bound}: injective={rep.injective} preserving={rep.preserving}")
    lines.extend(rep.failures)
    payload = {
        "shape": format_shape(shape),
        "factors": [{"shape": format_shape(f.shape), "type": str(f.classification.type_tag),
                     "I": list(f.i_index), "J": list(f.j_index)} for f in rep.factors],
        "injective": rep.injective, "preserving": rep.preserving, "bound": args.bound,
    }
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_approx(args) -> int:
    env = _bindings(args.bind)
    if "u" not in env:
        raise UsageError("approx needs --bind u=<element> (and w=<element> for binary operations)")
    if args.op not in approx.OPS:
        raise UsageError(f"unknown operation {args.op!r}; choose from {', '.join(approx.OPS)}")
    binary = args.op not in approx.UNARY
    if binary and "w" not in env:
        raise UsageError(f"{args.op} needs --bind w=<element>")
    u, w = env["u"], env.get("w") if binary else None
    N = args.levels
    src = approx.source_shape(args.kind)
    conform(src, u)
    if w is not None:
        conform(src, w)
    fam_map = approx.MAPS[args.kind]
    lhs_src = approx.apply_op(src, args.op, u, w)
    lhs = approx._truncate(args.kind, lhs_src, N, src.group_dim)
    rhs = approx.family_op(args.op, fam_map(u, N), None if w is None else fam_map(w, N))
    if lhs.side is not rhs.side:
        diffs = [None] * (N + 1)
        k = None
    else:
        diffs = approx.diff_sets(lhs, rhs)
        if args.kind == "mu":
            k = approx.least_k(lhs, rhs)
        else:
            k = 0 if not any(diffs) else None
    verified = k is not None
    payload = {"op": args.op, "k": k, "N": N, "verified": verified,
               "kind": args.kind, "diff_sets": diffs}
    lines = [f"level {n}: {d}" for n, d in enumerate(diffs)]
    lines.append(f"{args.kind} {args.op}: k={k} verified to N={N}: {verified}")
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK if verified else EXIT_FAIL


def cmd_covers(args) -> int:
    rows = covers.covers_table(args.n_max, args.bound)
    lines = ["n  exponent  eq3  sharp  separates"]
    for r in rows:
        seps = " ".join(f"m={m}:{'yes' if ok else 'no'}" for m, ok in r.separations.items()) or "-"
        lines.append(f"{r.n}  {r.exponent}  {'holds' if r.holds else 'FAILS'}  "
                     f"{'yes' if r.sharp else 'no'}  {seps}")
    payload = [{"n": r.n, "exponent": r.exponent, "holds": r.holds, "sharp": r.sharp,
                "separations": {str(m): ok for m, ok in r.separations.items()}} for r in rows]
    _emit(args, "\n".join(lines), payload)
    ok = all(r.holds and r.sharp and all(r.separations.values()) for r in rows)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kitecalc", description="Exact computation in kite pseudo BL-algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, shape=True):
        if shape:
            sp.add_argument("--shape", required=True, help="e.g. 'kite{I=2,J=1,lam=[0],rho=[1]}'")
        sp.add_argument("--format", choices=("human", "json"), default="human")

    sp = sub.add_parser("eval", help="evaluate a term")
    common(sp)
    sp.add_argument("--term", required=True)
    sp.add_argument("--bind", action="append", default=[], metavar="NAME=ELEMENT")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("check", help="check an identity on the bounded grid")
    common(sp)
    sp.add_argument("--identity", required=True, help="catalog name, identity file, or inline identity")
    sp.add_argument("--bound", type=int, default=2)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--max-evals", type=int, default=None,
                    help="evaluation cap (default $KITECALC_MAX_EVALS or 10^8)")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("classify", help="subdirect irreducibility and canonical type")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("decompose", help="component decomposition with embedding check")
    common(sp)
    sp.add_argument("--bound", type=int, default=2)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("approx", help="compare map(op(u,w)) with op levelwise")
    common(sp, shape=False)
    sp.add_argument("--kind", choices=approx.KINDS, default="mu")
    sp.add_argument("--op", required=True)
    sp.add_argument("--bind", action="append", default=[], metavar="u=ELEMENT")
    sp.add_argument("--levels", type=int, default=4)
    sp.set_defaults(func=cmd_approx)

    sp = sub.add_parser("covers", help="Z_n^dagger separation table")
    common(sp, shape=False)
    sp.add_argument("--n-max", type=int, default=3)
    sp.add_argument("--bound", type=int, default=2)
    sp.set_defaults(func=cmd_covers)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "bound", 0) < 0:
        parser.error("--bound must be >= 0")
    if getattr(args, "levels", 1) < 1:
        parser.error("--levels must be >= 1")
    try:
        return args.func(args)
    except (LiteralError, ParseError, UsageError, UnboundVariable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ShapeError, DimensionError) as exc:
        print(f"shape mismatch: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except BudgetExceeded as exc:
        print(f"evaluation cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
