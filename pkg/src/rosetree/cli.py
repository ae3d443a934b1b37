"""Command-line interface.

Exit codes: 0 success, 2 malformed input, 3 input outside an operation's
domain, 4 inconclusive (classification gave up, or an oracle said Unknown).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import reports
from .blockseq import parse_blockseq, parse_finseq
from .errors import ParseError, RosetreeError
from .families import parse_point
from .subtrees import parse_generator
from .tree_core import Branch, IndexSet, parse_index_set, parse_node

FAMILY_HELP = """\
family specs:
  proto:<i>          builtin prototype i (1..7)
  expr:<expression>  a family built from
      v(N)           indicator of the cylinder above node N
      xplus(N.b)     1 at points ⪰ N⌢b^∞ (b is 0 or 1)
      xminus(N.b)    1 at points ≻ N⌢b^∞
      const(N.b)     the constant binary real N⌢b^∞
      scale(E)       E divided by |N|+1
      pair(E, F)     E on copy 1 and F on copy 2 (top level only)
      zero
    where the node N is t or q(N), q being the (001,101) padding subtree.
    Example: expr:pair(v(q(t)), xplus(q(t).0))
"""


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None


def _generator(path: Optional[str]):
    return None if path is None else parse_generator(_read(path))


def _index_set(args) -> IndexSet:
    if args.set is not None:
        return parse_index_set(args.set)
    if args.set_file is not None:
        return parse_index_set(_read(args.set_file))
    raise ParseError("give an index set with --set or --set-file")


def _window(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise ParseError(f"window must look like 4,12, got {text!r}") from None
    return a, b


def _branches(items: Optional[Sequence[str]]) -> Optional[list[Branch]]:
    return None if not items else [Branch.parse(x) for x in items]


def _finseqs(path: str) -> list[tuple[int, ...]]:
    return [parse_finseq(ln) for ln in _read(path).splitlines() if ln.strip() and not ln.startswith("#")]


# -- handlers --------------------------------------------------------------


def _tree(args) -> reports.Report:
    if args.op == "meet":
        return reports.tree_meet(parse_node(args.a), parse_node(args.b))
    if args.op == "lex":
        return reports.tree_lex(reports.parse_node_or_branch(args.a), reports.parse_node_or_branch(args.b))
    if args.op == "index":
        return reports.tree_index(parse_node(args.t))
    if args.set is not None:
        nodes = parse_index_set(args.set).enumerate(args.depth)
    else:
        nodes = reports.parse_nodes(args.nodes or [])
    return reports.tree_converges(nodes, Branch.parse(args.branch), args.depth)


def _antichain(args) -> reports.Report:
    nodes = reports.parse_nodes(args.nodes)
    T = _generator(args.subtree)
    if args.op == "classify":
        return reports.antichain_classify(nodes, T)
    if args.op == "extract":
        return reports.antichain_extract(nodes, T, args.method)
    return reports.antichain_limit(nodes, T)


def _proto(args) -> reports.Report:
    if args.op == "eval":
        return reports.proto_eval(args.id, parse_node(args.t), parse_point(args.point))
    if args.op == "member":
        return reports.proto_member(args.id, _index_set(args))
    x = None if args.x is None else reports.parse_fraction(args.x)
    return reports.proto_helly(parse_node(args.t), x)


def _classify(args) -> reports.Report:
    return reports.classify(
        args.family,
        _generator(args.transport),
        _window(args.window),
        reports.parse_fraction(args.tol),
        _branches(args.sigma),
        _branches(args.grid),
        args.budget,
    )


def _equiv(args) -> reports.Report:
    battery = None if args.battery is None else reports.parse_battery(_read(args.battery))
    return reports.equiv(args.left, args.right, battery)


def _block(args) -> reports.Report:
    if args.op == "dominated":
        return reports.block_dominated(_finseqs(args.family_file), args.n)
    if args.op == "fan":
        return reports.block_fan(_finseqs(args.family_file))
    b = parse_blockseq(_read(args.blocks))
    if args.op == "chain":
        return reports.block_chain(b)
    if args.op == "antichain":
        return reports.block_antichain(b)
    s = parse_node(args.s)
    if args.op == "beta":
        return reports.block_beta(s, b)
    return reports.block_c3(s, b, args.samples)


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rosetree",
        description="Cantor-tree combinatorics and the seven prototype families.",
        epilog=FAMILY_HELP + "\nROSETREE_SEED fixes every randomized step (default 0).",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--json", action="store_true", help="print the full report as JSON")
    sub = p.add_subparsers(dest="command", required=True)

    tree = sub.add_parser("tree", help="node and branch calculations")
    tsub = tree.add_subparsers(dest="op", required=True)
    for name in ("meet", "lex"):
        q = tsub.add_parser(name)
        q.add_argument("a")
        q.add_argument("b")
    tsub.add_parser("index").add_argument("t")
    q = tsub.add_parser("converges", help="three-valued convergence of a node sample")
    q.add_argument("--nodes", nargs="*", help="nodes, space or comma separated")
    q.add_argument("--set", help="index set to enumerate instead of --nodes")
    q.add_argument("--branch", required=True)
    q.add_argument("--depth", type=int, required=True)
    tree.set_defaults(handler=_tree)

    anti = sub.add_parser("antichain", help="monotone antichain tools")
    asub = anti.add_subparsers(dest="op", required=True)
    for name in ("classify", "extract", "limit"):
        q = asub.add_parser(name)
        q.add_argument("nodes", nargs="+")
        q.add_argument("--subtree", help="generator file; nodes are read relative to it")
        if name == "extract":
            q.add_argument("--method", choices=("auto", "exhaustive", "pipeline"), default="auto")
    anti.set_defaults(handler=_antichain)

    proto = sub.add_parser("proto", help="the seven prototype families")
    psub = proto.add_subparsers(dest="op", required=True)
    q = psub.add_parser("eval", help="exact value of family i at node t and a point")
    q.add_argument("id", type=int)
    q.add_argument("--t", required=True)
    q.add_argument("--point", required=True, help="branch, or copy:branch for ids 6 and 7")
    q = psub.add_parser("member", help="does family i converge along an index set")
    q.add_argument("id", type=int)
    q.add_argument("--set", help="inline index set, items separated by ';'")
    q.add_argument("--set-file")
    q = psub.add_parser("helly", help="Helly interval of a node, optionally h_t(x)")
    q.add_argument("--t", required=True)
    q.add_argument("--x")
    proto.set_defaults(handler=_proto)

    cl = sub.add_parser("classify", help="match a family to a prototype", epilog=FAMILY_HELP,
                        formatter_class=argparse.RawDescriptionHelpFormatter)
    cl.add_argument("--family", required=True)
    cl.add_argument("--transport", help="generator file to read the family through")
    cl.add_argument("--window", default="4,12")
    cl.add_argument("--tol", default="1/1000000000")
    cl.add_argument("--sigma", action="append", help="sample branch (repeatable)")
    cl.add_argument("--grid", action="append", help="grid branch (repeatable)")
    cl.add_argument("--budget", type=int, default=8, help="random subtrees to try before giving up")
    cl.set_defaults(handler=_classify)

    eq = sub.add_parser("equiv", help="compare two families on a battery", epilog=FAMILY_HELP,
                        formatter_class=argparse.RawDescriptionHelpFormatter)
    eq.add_argument("left")
    eq.add_argument("right")
    eq.add_argument("--battery", help="file with one index set per line")
    eq.set_defaults(handler=_equiv)

    blk = sub.add_parser("block", help="block sequences and the β recursion")
    bsub = blk.add_subparsers(dest="op", required=True)
    for name in ("chain", "antichain"):
        bsub.add_parser(name).add_argument("--blocks", required=True)
    for name in ("beta", "c3"):
        q = bsub.add_parser(name)
        q.add_argument("--s", required=True)
        q.add_argument("--blocks", required=True)
        if name == "c3":
            q.add_argument("--samples", type=int, default=20)
    q = bsub.add_parser("dominated")
    q.add_argument("--family-file", required=True, help="one finite sequence per line")
    q.add_argument("--n", type=int, required=True)
    bsub.add_parser("fan").add_argument("--family-file", required=True)
    blk.set_defaults(handler=_block)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    handler: Callable[..., reports.Report] = args.handler
    try:
        report = handler(args)
    except RosetreeError as e:
        report = reports.error_report(args.command, e)
        print(report.to_json() if args.json else f"error: {e}", file=err)
        return report.exit_code
    print(report.to_json() if args.json else report.text, file=out)
    return report.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
