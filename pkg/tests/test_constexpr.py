import math

import pytest
from hypothesis import given, strategies as st

from leastaction import fixture as F
from leastaction.constexpr import BinOp, ConstExprError, Neg, Num, Sqrt, evaluate, parse_const_expr


@pytest.mark.parametrize("text, value", [
    ("1", 1.0),
    ("1/2", 0.5),
    ("2 + 3*4", 14.0),
    ("(2 + 3)*4", 20.0),
    ("8/4/2", 1.0),
    ("8 - 4 - 2", 2.0),
    ("-3", -3.0),
    ("−3 − 1", -4.0),
    ("--2", 2.0),
    ("1e-3", 1e-3),
    (".5 + 2.", 2.5),
    ("sqrt(16)", 4.0),
    ("-(57*sqrt(35)/10 + 59*sqrt(915)/30)", -F.V_MINUS),
    ("1121*sqrt(1281)/20 + 28037/12", F.C1),
])
def test_examples(text, value):
    assert evaluate(text) == pytest.approx(value, rel=1e-15)


def test_numbers_pass_through():
    assert evaluate(3) == 3.0 and evaluate(2.5) == 2.5
    with pytest.raises(TypeError):
        evaluate(True)
    with pytest.raises(TypeError):
        evaluate([1])


@pytest.mark.parametrize("text, offset", [
    ("sqrt(", 5),
    ("1 +", 3),
    ("", 0),
    ("2 * (3", 6),
    ("1 + 2)", 5),
    ("1 $ 2", 2),
    ("foo(1)", 0),
    ("sqrt 2", 5),
    ("−−", 6),
])
def test_error_offsets(text, offset):
    with pytest.raises(ConstExprError) as ei:
        parse_const_expr(text)
    assert ei.value.offset == offset
    assert f"offset {offset}" in str(ei.value)


def test_evaluation_errors():
    with pytest.raises(ConstExprError, match="sqrt of negative"):
        evaluate("sqrt(1 - 2)")
    with pytest.raises(ConstExprError, match="division by zero"):
        evaluate("1/(2-2)")


def test_printing():
    assert str(parse_const_expr("(1+2)*3")) == "(1 + 2) * 3"
    assert str(parse_const_expr("1-(2-3)")) == "1 - (2 - 3)"
    assert str(parse_const_expr("1-2-3")) == "1 - 2 - 3"
    assert str(parse_const_expr("-(1+2)")) == "-(1 + 2)"
    assert str(parse_const_expr("sqrt(2)/7")) == "sqrt(2) / 7"


_leaf = st.integers(0, 10**6).map(lambda n: Num(float(n), str(n)))
_tree = st.recursive(
    _leaf,
    lambda ch: st.one_of(
        ch.map(Neg),
        ch.map(Sqrt),
        st.tuples(st.sampled_from("+-*/"), ch, ch).map(lambda a: BinOp(*a)),
    ),
    max_leaves=12,
)


@given(_tree)
def test_print_parse_round_trip(node):
    text = str(node)
    again = parse_const_expr(text)
    assert again == node
    try:
        v = node.eval()
    except (ValueError, ZeroDivisionError):
        return
    w = again.eval()
    assert (math.isnan(v) and math.isnan(w)) or v == w
