import pytest
from hypothesis import given
from hypothesis import strategies as st

from kitecalc.kite import Kind, KiteShape, L, U
from kitecalc.literals import LiteralError, format_element, format_shape, parse_element, parse_shape

from .strategies import elements, shapes, sparse_elements


@pytest.mark.parametrize("text,value", [
    ("U[-1,-2]", U(-1, -2)),
    ("L[5]", L(5)),
    ("L[]", L()),
    (" U[ 0 , -3 ] ", U(0, -3)),
    ("U[(0,-1),(-2,0)]", U((0, -1), (-2, 0))),
])
def test_parse_element(text, value):
    assert parse_element(text) == value


def test_sparse_literals_drop_identity_entries():
    a = parse_element("U{-2:-1,3:0}")
    assert a.sparse and a.entries[0][0] == -2 and len(a.entries) == 1
    assert format_element(a) == "U{-2:-1}"
    assert parse_element("L{}") == parse_element("L{4:0}")


@pytest.mark.parametrize("bad", [
    "U[1,0]", "L[-1]", "X[0]", "U[0,", "U[a]", "U{0:-1,0:-2}", "U[(0,-1),0]", "", "U[1.5]",
])
def test_bad_element_literals(bad):
    with pytest.raises(LiteralError):
        parse_element(bad)


@given(st.data())
def test_element_round_trip(data):
    s = data.draw(shapes(group_dim=data.draw(st.integers(1, 2))))
    x = data.draw(elements(s))
    assert parse_element(format_element(x)) == x


@given(sparse_elements())
def test_sparse_round_trip(x):
    assert parse_element(format_element(x)) == x


def test_parse_shape_examples():
    s = parse_shape("kite{I=3,J=2,lam=[0,1],rho=[1,2]}")
    assert (s.i_size, s.j_size, s.lam(1), s.rho(0)) == (3, 2, 1, 1)
    assert parse_shape("kite{ZZ01}") == KiteShape.infinite(Kind.ZZ01)
    assert parse_shape("kite{OO10}").kind is Kind.OO10
    assert parse_shape("kite{I=1,J=0,lam=[],rho=[],d=2}").group_dim == 2


@pytest.mark.parametrize("bad", [
    "kite{I=2,J=1,lam=[0]}",
    "kite{I=2,J=1,lam=[0],rho=[2]}",
    "kite{I=2,J=2,lam=[0,0],rho=[0,1]}",
    "kite{I=2,J=1,lam=[0],rho=[1],x=3}",
    "kite{XX}",
    "kite{ZZ01,I=2}",
    "kite{}",
    "kite(I=2)",
])
def test_bad_shape_literals(bad):
    with pytest.raises(LiteralError):
        parse_shape(bad)


@given(shapes(max_i=4))
def test_shape_round_trip(s):
    assert parse_shape(format_shape(s)) == s


@pytest.mark.parametrize("kind", list(Kind)[1:])
def test_infinite_shape_round_trip(kind):
    s = KiteShape.infinite(kind)
    assert parse_shape(format_shape(s)) == s
