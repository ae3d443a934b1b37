from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rosetree.errors import DomainError, ParseError
from rosetree.families import (
    PROTOTYPE_EXPRESSIONS,
    Q_GENERATOR,
    Family,
    format_point,
    parse_family,
    parse_family_spec,
    parse_point,
    prototype_family,
)
from rosetree.tree_core import Branch

from conftest import branches, generators, nodes

node_exprs = st.recursive(st.just("t"), lambda inner: inner.map(lambda s: f"q({s})"), max_leaves=3)
tails = st.builds(
    lambda op, n, b: f"{op}({n}.{b})", st.sampled_from(["xplus", "xminus", "const"]), node_exprs, st.sampled_from("01")
)
base_terms = st.one_of(st.just("zero"), node_exprs.map(lambda n: f"v({n})"), tails)
terms = st.one_of(base_terms, base_terms.filter(lambda s: s != "zero").map(lambda s: f"scale({s})"))
expressions = st.one_of(terms, st.builds(lambda a, b: f"pair({a}, {b})", terms, terms))


def digits(tau: Branch, n: int) -> str:
    return "".join(tau.bit(i) for i in range(n))


def direct_value(i: int, t: str, tau: Branch) -> Fraction:
    """The seven families written out by hand on a long prefix of tau."""
    q = Q_GENERATOR.image
    d = digits(tau, 80)
    if i == 1:
        return Fraction(d.startswith(t)) / (len(t) + 1)
    if i == 2:
        # binary real 0.q(t)000...
        return sum((Fraction(1, 2 ** (k + 1)) for k, c in enumerate(q(t)) if c == "1"), Fraction(0))
    if i == 3:
        s = q(t) + "0" * 80
        return Fraction(s[:80] <= d)
    if i == 4:
        s = q(t) + "1" * 80
        return Fraction(s[:80] < d)
    if i == 5:
        return Fraction(d.startswith(t))
    raise ValueError(i)


@pytest.mark.parametrize("i", range(1, 6))
@given(t=nodes, tau=branches)
def test_prototype_values_match_direct_formulas(i, t, tau):
    t = t[:6]
    assert prototype_family(i).evaluate(t, tau) == direct_value(i, t, tau)


def test_paired_prototypes():
    f6 = prototype_family(6)
    tau = Branch.parse("01*1")
    assert f6.evaluate("01", (1, tau)) == 1
    assert f6.evaluate("01", (2, tau)) == Fraction(1, 4)
    with pytest.raises(DomainError):
        f6.evaluate("01", tau)
    with pytest.raises(DomainError):
        f6.evaluate("01", (3, tau))
    with pytest.raises(DomainError):
        prototype_family(1).evaluate("0", (1, tau))


@pytest.mark.parametrize("i", range(1, 8))
def test_prototype_text_round_trip(i):
    fam = prototype_family(i)
    assert str(fam) == PROTOTYPE_EXPRESSIONS[i]
    assert parse_family(str(fam)) == fam


@given(expressions)
def test_expression_round_trip(text):
    fam = parse_family(text)
    assert parse_family(str(fam)) == fam
    assert str(fam) == text


@pytest.mark.parametrize(
    "bad",
    ["", "v(s)", "v(t", "xplus(t)", "xplus(t.2)", "pair(v(t))", "v(t) v(t)", "frob(t)", "v(t)@"],
)
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_family(bad)


def test_family_specs():
    assert parse_family_spec("proto:3") == prototype_family(3)
    assert parse_family_spec("expr:v(t)") == prototype_family(5)
    with pytest.raises(ParseError):
        parse_family_spec("proto:x")
    with pytest.raises(ParseError):
        parse_family_spec("v(t)")
    with pytest.raises(DomainError):
        parse_family_spec("proto:9")


@given(st.sampled_from(range(1, 8)), generators(), nodes, branches)
def test_transport_reads_family_through_generator(i, g, t, tau):
    fam = prototype_family(i)
    moved = fam.transport(g)
    t = t[:5]
    point = tau if not fam.paired else (2, tau)
    assert moved.evaluate(t, point) == fam.evaluate(g.image(t), point)


def test_anchors_and_cycle():
    fam = prototype_family(7)
    sigma = Branch.parse("*01")
    assert fam.anchors(sigma) == [sigma, Q_GENERATOR.image_branch(sigma)]
    assert fam.cycle() == 1
    assert prototype_family(5).anchors(sigma) == [sigma]
    assert len(fam.points([sigma])) == 2


@given(branches, st.sampled_from([None, 1, 2]))
def test_point_round_trip(b, copy):
    p = b if copy is None else (copy, b)
    assert parse_point(format_point(p)) == p


def test_point_errors():
    with pytest.raises(ParseError):
        parse_point("3:*0")
    with pytest.raises(ParseError):
        parse_point("01")


def test_family_type():
    assert isinstance(parse_family("zero"), Family)
    assert parse_family("scale(v(t))").evaluate("0", Branch.parse("0*1")) == Fraction(1, 2)
