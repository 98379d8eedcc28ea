"""Command line entry point.

Exit codes: 0 success, 1 suite failure, 2 parse or validation error, 3 usage error.
"""
from __future__ import annotations

import argparse
import sys

from . import mutations
from .bridge import postnikov_truncate, to_filtered, to_mixed
from .chain import ChainComplex, homology, tensor_chain
from .errors import InvariantViolation, NotInHeart, ParseError, UnsupportedInput
from .filtered import FilteredComplex, beilinson_truncate, complete, gr, tensor_fil
from .generate import GenConfig
from .graded import GradedComplex, tensor_graded
from .harness import SUITES, run_suite
from .mixed import (MixedComplex, clever_truncate, dualizability_check, naive_truncate, ncw,
                    realization, tate_realization, tensor_mixed)
from .serialize import dumps, parse


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(path, *kinds):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(path, f"cannot read: {exc.strerror}") from None
    doc = parse(text)
    if kinds and doc.kind not in kinds:
        raise UsageError(f"{path}: expected a {' or '.join(kinds)} document, got {doc.kind}")
    return doc.payload


def table(obj) -> str:
    """Homology summary: one table, or one per weight."""
    if isinstance(obj, ChainComplex):
        return "\n".join(homology(obj).lines()) + "\n"
    lines = []
    if isinstance(obj, FilteredComplex):
        for p in range(obj.lo, obj.hi + 1):
            lines.append(f"term {p}:")
            lines += ["  " + s for s in homology(obj.term(p)).lines()]
        lines.append(f"above: {obj.above}")
        return "\n".join(lines) + "\n"
    g = obj.graded if isinstance(obj, MixedComplex) else obj
    if g.is_zero():
        return "H = 0\n"
    for p in g.weights():
        lines.append(f"weight {p}:")
        lines += ["  " + s for s in homology(g.part(p)).lines()]
    return "\n".join(lines) + "\n"


def _emit(args, text):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _result(args, obj):
    _emit(args, table(obj) if getattr(args, "table", False) else dumps(obj))


# ---------------------------------------------------------------- commands

def cmd_homology(args):
    _emit(args, table(_load(args.file)))


def cmd_realize(args):
    m = _load(args.file, "mixed")
    _result(args, tate_realization(m) if args.tate else realization(m))


def cmd_ncw(args):
    m = _load(args.file, "mixed")
    weights = None
    if args.weights:
        lo, _, hi = args.weights.partition(":")
        try:
            weights = range(int(lo), int(hi) + 1)
        except ValueError:
            raise UsageError("--weights expects LO:HI") from None
    _result(args, ncw(m, weights))


def cmd_fil(args):
    _result(args, to_filtered(_load(args.file, "mixed")))


def cmd_epsgr(args):
    _result(args, to_mixed(_load(args.file, "filtered")))


def cmd_gr(args):
    _result(args, gr(_load(args.file, "filtered"), args.weight))


def cmd_complete(args):
    _result(args, complete(_load(args.file, "filtered")))


def cmd_truncate(args):
    if args.structure == "beilinson":
        obj = beilinson_truncate(_load(args.file, "filtered"), args.dir, args.n)
    else:
        m = _load(args.file, "mixed")
        op = {"postnikov": postnikov_truncate, "naive": naive_truncate,
              "clever": clever_truncate}[args.structure]
        obj = op(m, args.dir, args.n)
    _result(args, obj)


def cmd_tensor(args):
    kind = {"chain": "chain", "graded": "graded", "mixed": "mixed", "filtered": "filtered"}[args.cat]
    a, b = _load(args.a, kind), _load(args.b, kind)
    op = {"chain": tensor_chain, "graded": tensor_graded, "mixed": tensor_mixed,
          "filtered": tensor_fil}[args.cat]
    _result(args, op(a, b))


def cmd_dualcheck(args):
    m, n = _load(args.m, "mixed"), _load(args.n, "mixed")
    _emit(args, ("true" if dualizability_check(m, n) else "false") + "\n")


def cmd_check(args):
    try:
        cfg = GenConfig(seed=args.seed, max_dim=args.max_dim, trials=args.trials)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = run_suite(args.suite, cfg)
    _emit(args, dumps(report.to_json()))
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mixedgraded", description=__doc__.splitlines()[0])
    ap.add_argument("--mutation", help=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def command(name, fn, help_, table_flag=True):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("-o", "--output", help="write here instead of standard output")
        if table_flag:
            p.add_argument("--table", action="store_true", help="print homology instead of the document")
        return p

    p = command("homology", cmd_homology, "homology table of any document", table_flag=False)
    p.add_argument("file")
    p = command("realize", cmd_realize, "realization of a mixed complex")
    p.add_argument("--tate", action="store_true", help="Tate realization over all weights")
    p.add_argument("file")
    p = command("ncw", cmd_ncw, "weighted negative cyclic complex")
    p.add_argument("--weights", help="LO:HI window (default: the weight span of the input)")
    p.add_argument("file")
    p = command("fil", cmd_fil, "associated filtered tower of a mixed complex")
    p.add_argument("file")
    p = command("epsgr", cmd_epsgr, "associated mixed complex of a tower")
    p.add_argument("file")
    p = command("gr", cmd_gr, "graded piece of a tower")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("file")
    p = command("complete", cmd_complete, "completion of a tower")
    p.add_argument("file")
    p = command("truncate", cmd_truncate, "t-structure and weight truncations")
    p.add_argument("--structure", required=True, choices=["beilinson", "postnikov", "naive", "clever"])
    p.add_argument("--dir", required=True, choices=["le", "ge"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("file")
    p = command("tensor", cmd_tensor, "tensor product of two documents")
    p.add_argument("--cat", required=True, choices=["chain", "graded", "mixed", "filtered"])
    p.add_argument("a")
    p.add_argument("b")
    p = command("dualcheck", cmd_dualcheck, "is m^∨ ⊗ n -> Hom(m, n) a quasi-isomorphism", table_flag=False)
    p.add_argument("m")
    p.add_argument("n")
    p = command("check", cmd_check, "run a verification suite", table_flag=False)
    p.add_argument("--suite", required=True, choices=list(SUITES) + ["all"])
    p.add_argument("--trials", type=int, default=GenConfig.trials)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-dim", type=int, default=GenConfig.max_dim)
    return ap


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        if args.mutation:
            if args.mutation not in mutations.KNOWN:
                raise UsageError(f"unknown mutation {args.mutation!r}")
            with mutations.inject(args.mutation):
                return args.fn(args) or 0
        return args.fn(args) or 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 3
    except ParseError as exc:
        print(f"parse error at {exc.position}: {exc.message}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except (UnsupportedInput, NotInHeart) as exc:
        print(f"unsupported input: {exc}", file=sys.stderr)
        return 2


def main(argv=None):
    sys.exit(run(argv))
