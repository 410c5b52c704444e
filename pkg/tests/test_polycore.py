from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from derivedmw.errors import RingMismatchError, ShapeError
from derivedmw.polycore import (MonomialOrder, PolyMatrix, PolyRing, evaluate, mat_ops, partial_derivative,
                                poly_arith)

R3 = PolyRing(["x", "y", "z"])

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
exps = st.tuples(*[st.integers(0, 3)] * 3).filter(lambda e: sum(e) <= 3)
polys = st.dictionaries(exps, coeffs, max_size=5).map(lambda d: R3.monomial((0, 0, 0), 0) + sum(
    (R3.monomial(e, c) for e, c in d.items()), R3.zero()))
points = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=3, max_size=3)


def test_arith_examples(qp):
    R, q, p = qp
    assert poly_arith("add", q * p, -(q * p)).is_zero()
    assert poly_arith("mul", q + p, q - p) == q ** 2 - p ** 2
    assert poly_arith("mul", q, R.zero()).is_zero()
    assert poly_arith("sub", q, q).is_zero()


def test_ring_mismatch(qp):
    _, q, _ = qp
    with pytest.raises(RingMismatchError):
        q + R3.gen(0)


def test_derivative_examples(qp):
    R, q, p = qp
    assert partial_derivative(q ** 2 * p, 0) == 2 * q * p
    assert partial_derivative(R.const(7), 0).is_zero()
    assert partial_derivative(q * p, 1) == q
    with pytest.raises(IndexError):
        partial_derivative(q, 2)


def test_matrix_examples(qp):
    R, q, p = qp
    om = PolyMatrix(R, [[0, -1], [1, 0]])
    assert mat_ops("determinant", om) == R.one()
    assert mat_ops("transpose", om) == -om
    inv = PolyMatrix(R, [[0, 1], [-1, 0]])
    assert mat_ops("product", om, inv) == PolyMatrix.identity(R, 2)
    with pytest.raises(ShapeError):
        mat_ops("product", om, PolyMatrix(R, [[1, 2, 3]]))


def test_evaluate_examples(qp):
    R, q, p = qp
    assert evaluate(q * p, [2, 3]) == 6
    assert evaluate(q ** 2 - p, [1, 1]) == 0
    assert evaluate(R.zero(), [5, -1]) == 0
    with pytest.raises(ShapeError):
        evaluate(q, [1])


def test_rational_lowest_terms():
    R = PolyRing(["t"])
    f = R.gen(0) * Fraction(6, 4)
    c = f.leading_coefficient()
    assert (c.numerator, c.denominator) == (3, 2)
    assert (R.zero() * 5).is_zero()


def test_canonical_printing(qp):
    R, q, p = qp
    f = 2 * q * p - Fraction(1, 3) * q ** 2
    assert f.to_str() == "-1/3*q^2 + 2*q*p"
    assert f.to_str(MonomialOrder("lex")) == "-1/3*q^2 + 2*q*p"
    assert str(R.zero()) == "0"
    assert str(-q - 1) == "-q - 1"


def test_homogeneity(qp):
    R, q, p = qp
    assert (q * p + q ** 2).homogeneous_degree() == 2
    assert (q * p + q).homogeneous_degree() is None
    assert R.zero().is_homogeneous()


@settings(max_examples=120, deadline=None)
@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    assert (a - b) + b == a


@settings(max_examples=120, deadline=None)
@given(polys, polys, points)
def test_evaluate_homomorphism(a, b, pt):
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 3), st.data())
def test_det_multiplicative(n, data):
    A = PolyMatrix(R3, [[data.draw(polys) for _ in range(n)] for _ in range(n)])
    B = PolyMatrix(R3, [[data.draw(polys) for _ in range(n)] for _ in range(n)])
    assert (A @ B).determinant() == A.determinant() * B.determinant()


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_leibniz(a, b):
    for i in range(3):
        assert (a * b).diff(i) == a.diff(i) * b + a * b.diff(i)


def test_compose_and_embed(qp):
    R, q, p = qp
    S = PolyRing(["p", "q", "t"])
    f = q ** 2 * p + 3
    g = f.embed(S)
    assert g.to_str() == "p*q^2 + 3"
    t = S.gen("t")
    assert f.compose([t, t], S) == t ** 3 + 3
