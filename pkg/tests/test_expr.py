from __future__ import annotations

import math

import pytest

from meanslab import PositivePair
from meanslab.claims import builtin_registry
from meanslab.errors import DomainError, ParseError
from meanslab.expr import (
    BinOp,
    Const,
    Func,
    MeanAtom,
    MeanCall,
    Neg,
    eval_expression,
    mean_kinds,
    parse_expression,
    render,
)
from meanslab.kinds import A, G, L, P, X, Power


def test_structure_of_ratio_expression():
    node = parse_expression("A*P/(2*P−G)")
    assert isinstance(node, BinOp) and node.op == "/"
    assert node.left == BinOp("*", MeanAtom(A), MeanAtom(P))
    assert mean_kinds(node) == {A, P, G}


def test_mean_call():
    node = parse_expression("L(X,A)")
    assert node == MeanCall(MeanAtom(L), MeanAtom(X), MeanAtom(A))


def test_parametric_atom():
    node = parse_expression("M[1/3]")
    assert isinstance(node, MeanAtom)
    assert node.kind == Power(1 / 3)


def test_functions_and_constants():
    lhs, rhs = parse_expression("2*(1−A/P)"), parse_expression("log(X/A)")
    assert isinstance(lhs, BinOp) and lhs.left == Const(2.0, "2")
    assert isinstance(rhs, Func) and rhs.name == "log"
    assert parse_expression("pi").value == math.pi
    assert parse_expression("beta2").named


def test_precedence():
    assert parse_expression("1+2*3") == BinOp("+", Const(1.0, "1"), BinOp("*", Const(2.0, "2"), Const(3.0, "3")))
    # ^ is right associative and binds tighter than unary minus
    assert parse_expression("-A^2") == Neg(BinOp("^", MeanAtom(A), Const(2.0, "2")))
    two = Const(2.0, "2")
    assert parse_expression("2^3^2") == BinOp("^", two, BinOp("^", Const(3.0, "3"), two))


@pytest.mark.parametrize(
    "text, offset",
    [
        ("A*", 2),
        ("foo", 0),
        ("2 +* 3", 3),
        ("(A", 2),
        ("L(X)", 1),
        ("L(X,A,G)", 1),
        ("exp(A,G)", 5),
        ("M[A]", 0),
        ("A $ G", 2),
    ],
)
def test_parse_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse_expression(text)
    assert info.value.offset == offset
    assert f"offset {offset}" in str(info.value)


def test_round_trip_registry():
    for claim in builtin_registry():
        for node in claim.chain:
            assert parse_expression(render(node)) == node


@pytest.mark.parametrize(
    "text",
    ["A - (G - H)", "(A - G) - H", "A/(G*H)", "(A^2)^3", "-(A+G)", "exp(-A)", "L(X, A)^2", "N[1/2] + M[-1]", "((1 + H/G)/2)^(2/3)"],
)
def test_round_trip_forms(text):
    node = parse_expression(text)
    assert parse_expression(render(node)) == node


def test_eval_examples():
    assert eval_expression("A", PositivePair(1, 3)) == 2.0
    assert eval_expression("A*G/P", PositivePair(3, 1)) == pytest.approx(math.sqrt(3) * math.pi / 3, rel=1e-14)
    # oracle: sqrt(e^2 * 2 e^4/(e^4 + 1))
    assert eval_expression("sqrt(G*H)", PositivePair(math.e**4, 1)) == pytest.approx(3.8095025881376194, rel=1e-14)
    assert eval_expression("L(X, A)", PositivePair(3, 1)) == pytest.approx(1.9097228912517903, rel=1e-14)


def test_precise_mode_agrees():
    pair = PositivePair(3, 1)
    for text in ["A*G/P", "L(X, A)", "M[1/3] - X", "log(X/A)", "N[betaHeron]"]:
        assert float(eval_expression(text, pair, precise=True)) == pytest.approx(eval_expression(text, pair), rel=1e-13, abs=1e-15)


def test_domain_errors():
    pair = PositivePair(3, 1)
    with pytest.raises(DomainError):
        eval_expression("log(G - A)", pair)
    with pytest.raises(DomainError):
        eval_expression("A/(A - A)", pair)
    # precise mode reports NaN instead of raising
    assert math.isnan(float(eval_expression("log(G - A)", pair, precise=True)))
