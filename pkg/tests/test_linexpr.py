import pytest
from hypothesis import given, strategies as st

from pacone.linexpr import LinExpr, NonlinearError
from pacone.qfield import QuadField

K = QuadField(21)
r = K.sqrt
small = st.builds(lambda p, q: K(p, q, 3), st.integers(-9, 9), st.integers(-9, 9))
NAMES = ["x1", "x2", "y5", "y6"]
exprs = st.builds(
    lambda c, cs: LinExpr(K, dict(zip(NAMES, cs)), c), small, st.lists(small, min_size=4, max_size=4)
)


def test_zero_terms_dropped():
    e = LinExpr(K, {"y5": K.zero, "y6": r})
    assert e.unknowns() == ["y6"]


def test_ordering_and_literal():
    e = LinExpr(K, {"y10": 1, "y2": 1, "x3": -1}, K(-3, 1, 2))
    assert e.unknowns() == ["x3", "y2", "y10"]
    assert e.literal() == "(-3+1*r)/2 - x3 + y2 + y10"


def test_nonlinear():
    y5, y6 = LinExpr.var(K, "y5"), LinExpr.var(K, "y6")
    with pytest.raises(NonlinearError):
        y5 * y6
    with pytest.raises(NonlinearError):
        1 / y5
    assert 2 / LinExpr.const(K, 4) == LinExpr.const(K, K(1, 0, 2))


def test_value():
    with pytest.raises(ValueError):
        LinExpr.var(K, "y5").value()
    assert LinExpr.const(K, r).value() == r


@given(exprs, exprs, small)
def test_vector_space(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a - a == 0
    assert -(-a) == a


@given(exprs, small, small)
def test_substitute_is_evaluation(e, u, v):
    full = {"x1": u, "x2": v, "y5": u * v, "y6": u - v}
    val = e.substitute(full).value()
    manual = e.constant + sum((e.coeff(k) * full[k] for k in NAMES), K.zero)
    assert val == manual


@given(exprs, small)
def test_partial_substitution(e, u):
    part = e.substitute({"y5": u})
    assert "y5" not in part.unknowns()
    assert part.coeff("y6") == e.coeff("y6")
