"""HTTP service over the report builders.

Run with ``uvicorn rosetree.service:app``.  Every endpoint returns the same
report dictionary the CLI prints with ``--json``; malformed input gives 400,
input outside an operation's domain 422.
"""
from __future__ import annotations

from typing import Any, Callable, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import reports
from .blockseq import make_blockseq, parse_finseq
from .errors import DomainError, ParseError
from .families import parse_point
from .subtrees import parse_generator
from .tree_core import Branch, parse_index_set, parse_node

app = FastAPI(title="rosetree", version="0.1.0")


class NodePair(BaseModel):
    a: str
    b: str


class NodeList(BaseModel):
    nodes: list[str]
    subtree: Optional[str] = Field(None, description="generator text, e.g. 'root=; 001,101'")
    method: str = "auto"


class ConvergesRequest(BaseModel):
    nodes: list[str] = []
    set: Optional[str] = None
    branch: str
    depth: int


class EvalRequest(BaseModel):
    id: int
    t: str
    point: str


class MemberRequest(BaseModel):
    id: int
    set: str


class HellyRequest(BaseModel):
    t: str
    x: Optional[str] = None


class ClassifyRequest(BaseModel):
    family: str
    transport: Optional[str] = None
    window: tuple[int, int] = (4, 12)
    tol: str = "1/1000000000"
    sigmas: Optional[list[str]] = None
    budget: int = 8


class EquivRequest(BaseModel):
    left: str
    right: str
    battery: Optional[list[str]] = None


class BlocksRequest(BaseModel):
    blocks: list[str]
    s: str = ""
    samples: int = 20


class DominatedRequest(BaseModel):
    family: list[str]
    n: int


class FanRequest(BaseModel):
    family: list[str]


class ReportModel(BaseModel):
    command: str
    inputs: dict
    result: Any
    diagnostics: dict


def _call(build: Callable[[], reports.Report]) -> dict:
    """Run ``build`` (parsing included) and map library errors to HTTP codes."""
    try:
        return build().as_dict()
    except ParseError as e:
        raise HTTPException(400, detail={"error": type(e).__name__, "message": str(e)})
    except DomainError as e:
        raise HTTPException(422, detail={"error": type(e).__name__, "message": str(e)})


def _gen(text: Optional[str]):
    return None if text is None else parse_generator(text)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/tree/meet", response_model=ReportModel)
def tree_meet(req: NodePair):
    return _call(lambda: reports.tree_meet(parse_node(req.a), parse_node(req.b)))


@app.post("/tree/lex", response_model=ReportModel)
def tree_lex(req: NodePair):
    return _call(lambda: reports.tree_lex(reports.parse_node_or_branch(req.a), reports.parse_node_or_branch(req.b)))


@app.get("/tree/index/{t}", response_model=ReportModel)
def tree_index(t: str):
    return _call(lambda: reports.tree_index(parse_node(t)))


@app.post("/tree/converges", response_model=ReportModel)
def tree_converges(req: ConvergesRequest):
    def build():
        nodes = parse_index_set(req.set).enumerate(req.depth) if req.set else [parse_node(t) for t in req.nodes]
        return reports.tree_converges(nodes, Branch.parse(req.branch), req.depth)

    return _call(build)


@app.post("/antichain/{op}", response_model=ReportModel)
def antichain(op: str, req: NodeList):
    def build():
        nodes = [parse_node(t) for t in req.nodes]
        T = _gen(req.subtree)
        if op == "classify":
            return reports.antichain_classify(nodes, T)
        if op == "extract":
            return reports.antichain_extract(nodes, T, req.method)
        if op == "limit":
            return reports.antichain_limit(nodes, T)
        raise HTTPException(404, detail=f"unknown antichain operation {op!r}")

    return _call(build)


@app.post("/proto/eval", response_model=ReportModel)
def proto_eval(req: EvalRequest):
    return _call(lambda: reports.proto_eval(req.id, parse_node(req.t), parse_point(req.point)))


@app.post("/proto/member", response_model=ReportModel)
def proto_member(req: MemberRequest):
    return _call(lambda: reports.proto_member(req.id, parse_index_set(req.set)))


@app.post("/proto/helly", response_model=ReportModel)
def proto_helly(req: HellyRequest):
    return _call(lambda: reports.proto_helly(parse_node(req.t), None if req.x is None else reports.parse_fraction(req.x)))


@app.post("/classify", response_model=ReportModel)
def classify(req: ClassifyRequest):
    return _call(
        lambda: reports.classify(
            req.family,
            _gen(req.transport),
            tuple(req.window),
            reports.parse_fraction(req.tol),
            None if req.sigmas is None else [Branch.parse(s) for s in req.sigmas],
            None,
            req.budget,
        )
    )


@app.post("/equiv", response_model=ReportModel)
def equiv(req: EquivRequest):
    return _call(
        lambda: reports.equiv(
            req.left, req.right, None if req.battery is None else [parse_index_set(x) for x in req.battery]
        )
    )


@app.post("/block/dominated", response_model=ReportModel)
def block_dominated(req: DominatedRequest):
    return _call(lambda: reports.block_dominated([parse_finseq(x) for x in req.family], req.n))


@app.post("/block/fan", response_model=ReportModel)
def block_fan(req: FanRequest):
    return _call(lambda: reports.block_fan([parse_finseq(x) for x in req.family]))


@app.post("/block/{op}", response_model=ReportModel)
def block(op: str, req: BlocksRequest):
    def build():
        b = make_blockseq([parse_finseq(x) for x in req.blocks])
        if op == "chain":
            return reports.block_chain(b)
        if op == "antichain":
            return reports.block_antichain(b)
        if op == "beta":
            return reports.block_beta(parse_node(req.s), b)
        if op == "c3":
            return reports.block_c3(parse_node(req.s), b, req.samples)
        raise HTTPException(404, detail=f"unknown block operation {op!r}")

    return _call(build)
