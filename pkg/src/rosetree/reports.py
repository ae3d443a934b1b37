"""Report builders shared by the command line and the HTTP service.

Each builder takes already-parsed inputs, runs the computation and returns
a Report whose ``as_dict`` is the machine form and ``text`` the human one.
"""
from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import antichains, blockseq, canonicalizer, equivalence, prototypes
from .errors import OracleUnknown, ParseError
from .families import Family, Point, format_point, parse_family_spec
from .subtrees import SubtreeGenerator
from .tree_core import (
    Branch,
    IndexSet,
    canonical_index,
    converges_to,
    format_node,
    lex_less,
    meet,
    parse_index_set,
    parse_node,
)

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_INCONCLUSIVE = 0, 2, 3, 4


@dataclass
class Report:
    command: str
    inputs: dict
    result: Any
    text: str
    diagnostics: dict = field(default_factory=dict)
    exit_code: int = EXIT_OK

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "diagnostics": self.diagnostics,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2, ensure_ascii=False)


def seed() -> int:
    raw = os.environ.get("ROSETREE_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"ROSETREE_SEED must be an integer, got {raw!r}") from None


def parse_node_or_branch(text: str) -> str | Branch:
    return Branch.parse(text) if "*" in text else parse_node(text)


def parse_nodes(items: Sequence[str]) -> list[str]:
    """Nodes given as separate arguments or comma-separated."""
    out = []
    for item in items:
        out += [parse_node(x) for x in item.split(",") if x.strip()]
    return out


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text!r}") from None


# -- tree ------------------------------------------------------------------


def tree_meet(a: str, b: str) -> Report:
    w = meet(a, b)
    return Report("tree meet", {"a": a, "b": b}, format_node(w), format_node(w))


def tree_lex(a: str | Branch, b: str | Branch) -> Report:
    less = lex_less(a, b)
    return Report("tree lex", {"a": str(a), "b": str(b)}, less, str(less).lower())


def tree_index(t: str) -> Report:
    k = canonical_index(t)
    return Report("tree index", {"t": t}, k, str(k))


def tree_converges(nodes: list[str], sigma: Branch, depth: int) -> Report:
    verdict = converges_to(nodes, sigma, depth).value
    inputs = {"nodes": nodes, "branch": str(sigma), "depth": depth}
    return Report("tree converges", inputs, verdict, verdict)


# -- antichains ------------------------------------------------------------


def _tree_name(T: Optional[SubtreeGenerator]) -> Optional[str]:
    return None if T is None else str(T)


def antichain_classify(nodes: list[str], T: Optional[SubtreeGenerator] = None) -> Report:
    kind = antichains.classify_antichain(nodes, T or antichains.FULL_TREE)
    inputs = {"nodes": nodes, "subtree": _tree_name(T)}
    return Report("antichain classify", inputs, kind.value, kind.value)


def antichain_extract(nodes: list[str], T: Optional[SubtreeGenerator] = None, method: str = "auto") -> Report:
    kind, sub = antichains.extract_monotone(nodes, T or antichains.FULL_TREE, method)
    inputs = {"nodes": nodes, "subtree": _tree_name(T), "method": method}
    result = {"kind": kind.value, "nodes": sub}
    return Report("antichain extract", inputs, result, f"{kind.value} {' '.join(sub)}")


def antichain_limit(nodes: list[str], T: Optional[SubtreeGenerator] = None) -> Report:
    prefix = antichains.antichain_limit(nodes, T or antichains.FULL_TREE)
    inputs = {"nodes": nodes, "subtree": _tree_name(T)}
    return Report("antichain limit", inputs, prefix, format_node(prefix))


# -- prototypes ------------------------------------------------------------


def proto_eval(i: int, t: str, point: Point) -> Report:
    v = prototypes.eval_prototype(i, t, point)
    inputs = {"id": i, "t": t, "point": format_point(point)}
    return Report("proto eval", inputs, str(v), str(v))


def _verdict_text(v: prototypes.Verdict) -> str:
    if v.status is prototypes.Status.CONVERGENT:
        return "Convergent" if v.limit is None else f"Convergent {v.limit}"
    if v.status is prototypes.Status.DIVERGENT:
        w = v.witness
        return f"Divergent\n  {w.left} -> {w.left_limit}\n  {w.right} -> {w.right_limit}"
    return "Unknown"


def proto_member(i: int, L: IndexSet) -> Report:
    v = prototypes.membership(i, L)
    inputs = {"id": i, "set": str(L)}
    code = EXIT_OK if v.status is not prototypes.Status.UNKNOWN else EXIT_INCONCLUSIVE
    return Report("proto member", inputs, v.as_dict(), _verdict_text(v), exit_code=code)


def proto_helly(t: str, x: Optional[Fraction] = None) -> Report:
    a, b = prototypes.helly_interval(t)
    result: dict[str, Any] = {"a": str(a), "b": str(b)}
    text = f"[{a}, {b}]"
    inputs: dict[str, Any] = {"t": t}
    if x is not None:
        h = prototypes.helly_eval(t, x)
        result["h"] = str(h)
        inputs["x"] = str(x)
        text += f"\nh({x}) = {h}"
    return Report("proto helly", inputs, result, text)


# -- classification and equivalence ----------------------------------------


def classify(
    family_spec: str,
    transport: Optional[SubtreeGenerator] = None,
    window: tuple[int, int] = (4, 12),
    tol: Fraction = canonicalizer.DEFAULT_TOL,
    sigmas: Optional[list[Branch]] = None,
    grid: Optional[list[Branch]] = None,
    budget: int = 8,
) -> Report:
    fam = parse_family_spec(family_spec)
    if transport is not None:
        fam = fam.transport(transport)
    rng = random.Random(seed())
    c = canonicalizer.classify(
        fam, sigmas or canonicalizer.DEFAULT_SIGMAS, grid, window, tol, budget, rng
    )
    inputs = {
        "family": family_spec,
        "transport": None if transport is None else str(transport),
        "window": list(window),
        "tol": str(tol),
        "budget": budget,
        "seed": seed(),
    }
    cert = c.as_dict()
    if c.conclusive:
        pattern = ", ".join(cert["pattern"]["equalities"]) or "no equalities"
        varies = "varies" if c.pattern.g0_varies else "constant"
        text = f"{c.id} {prototypes.PROTOTYPE_NAMES[c.id]}\n  g0 {varies}; {pattern}"
        return Report("classify", inputs, cert, text)
    text = "Inconclusive\n" + "\n".join(f"  {a}" for a in c.attempts)
    return Report("classify", inputs, cert, text, exit_code=EXIT_INCONCLUSIVE)


def family_oracle(spec: str, depth: int = 24) -> equivalence.Oracle:
    """Exact membership for builtin prototypes, numeric convergence otherwise."""
    kind, _, body = spec.partition(":")
    fam: Family = parse_family_spec(spec)
    if kind == "proto":
        return equivalence.prototype_oracle(int(body))

    def oracle(L: IndexSet) -> prototypes.Verdict:
        n = prototypes.numeric_convergence(fam, L, depth=depth)
        return prototypes.Verdict(n.status)

    return oracle


def parse_battery(text: str) -> list[IndexSet]:
    """One index set per line, items separated by ';'."""
    out = [parse_index_set(ln) for ln in text.splitlines() if ln.split("#", 1)[0].strip()]
    if not out:
        raise ParseError("battery file has no index sets")
    return out


def equiv(left: str, right: str, battery: Optional[list[IndexSet]] = None) -> Report:
    bat = battery if battery is not None else equivalence.standard_battery()
    inputs = {"left": left, "right": right, "battery_size": len(bat)}
    try:
        v = equivalence.equivalent(family_oracle(left), family_oracle(right), bat)
    except OracleUnknown as e:
        return Report("equiv", inputs, {"verdict": "Unknown", "reason": str(e)}, f"Unknown: {e}", exit_code=EXIT_INCONCLUSIVE)
    diag = {"assumption": "family members isolated in their closures"}
    if v.equivalent:
        return Report("equiv", inputs, v.as_dict(), "Equivalent", diag)
    text = (
        f"DistinguishedBy {v.witness}\n"
        f"  {left}: {_verdict_text(v.left).splitlines()[0]}\n"
        f"  {right}: {_verdict_text(v.right).splitlines()[0]}"
    )
    return Report("equiv", inputs, v.as_dict(), text, diag)


# -- block sequences -------------------------------------------------------


def _lines(seqs: Sequence[blockseq.FinSeq]) -> str:
    return "\n".join(blockseq.format_finseq(s) for s in seqs)


def block_chain(b: blockseq.BlockSeq) -> Report:
    out = blockseq.chain_map(b)
    res = [blockseq.format_finseq(s) for s in out]
    return Report("block chain", {"blocks": len(b)}, res, _lines(out))


def block_antichain(b: blockseq.BlockSeq) -> Report:
    out = blockseq.antichain_map(b)
    res = [blockseq.format_finseq(s) for s in out]
    return Report("block antichain", {"blocks": len(b)}, res, _lines(out))


def block_beta(s: str, b: blockseq.BlockSeq) -> Report:
    text = blockseq.format_beta(blockseq.beta(s, b))
    return Report("block beta", {"s": s, "blocks": len(b)}, text, text)


def block_c3(s: str, b: blockseq.BlockSeq, samples: int = 20) -> Report:
    ok = blockseq.verify_c3(s, b, samples, random.Random(seed()))
    inputs = {"s": s, "blocks": len(b), "samples": samples, "seed": seed()}
    return Report("block c3", inputs, ok, str(ok).lower())


def block_dominated(B: list[blockseq.FinSeq], n: int) -> Report:
    w = blockseq.dominated(B, n)
    res = None if w is None else [blockseq.format_finseq(t) for t in w]
    return Report("block dominated", {"size": len(B), "n": n}, res, "none" if w is None else _lines(w))


def block_fan(seqs: list[blockseq.FinSeq]) -> Report:
    f = blockseq.is_fan(seqs)
    if f is None:
        return Report("block fan", {"size": len(seqs)}, None, "not a fan")
    stem, nxt = f
    res = {"stem": blockseq.format_finseq(stem), "next": list(nxt)}
    return Report("block fan", {"size": len(seqs)}, res, f"stem {blockseq.format_finseq(stem)}; next {' '.join(map(str, nxt))}")


def error_report(command: str, err: Exception) -> Report:
    code = EXIT_PARSE if isinstance(err, ParseError) else EXIT_DOMAIN
    if isinstance(err, OracleUnknown):
        code = EXIT_INCONCLUSIVE
    kind = type(err).__name__
    return Report(command, {}, None, str(err), {"error": kind, "message": str(err)}, code)
