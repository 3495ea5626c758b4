from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

from fktoda.laurent import LaurentMatrix, LaurentPoly

fracs = st.builds(Fraction, st.integers(-9, 9), st.sampled_from([1, 2, 3]))


@st.composite
def polys(draw):
    low = draw(st.integers(-3, 2))
    coeffs = draw(st.lists(fracs, min_size=1, max_size=4))
    return LaurentPoly(low, np.array(coeffs, dtype=object))


@st.composite
def mats(draw, n=2):
    low = draw(st.integers(-2, 1))
    width = draw(st.integers(1, 3))
    c = np.array([[[draw(fracs) for _ in range(n)] for _ in range(n)] for _ in range(width)], dtype=object)
    return LaurentMatrix(low, c)


lams = st.sampled_from([Fraction(2), Fraction(-3), Fraction(1, 2), Fraction(5, 3)])


@settings(max_examples=50, deadline=None)
@given(polys(), polys(), lams)
def test_product_evaluates_pointwise(p, q, lam):
    assert (p * q).evaluate(lam) == p.evaluate(lam) * q.evaluate(lam)
    assert (p + q).evaluate(lam) == p.evaluate(lam) + q.evaluate(lam)
    assert (p - q).evaluate(lam) == p.evaluate(lam) - q.evaluate(lam)


@settings(max_examples=30, deadline=None)
@given(mats(), mats(), lams)
def test_matrix_product_evaluates_pointwise(a, b, lam):
    lhs = (a @ b).evaluate(lam)
    rhs = a.evaluate(lam) @ b.evaluate(lam)
    assert (lhs == rhs).all()
    assert a.comm(b).trace().trimmed().support() == []


def test_terms_and_shift():
    p = LaurentPoly.from_terms({-1: Fraction(2), 2: Fraction(3)})
    assert p.support() == [-1, 2]
    assert p.coeff(0) == 0 and p.coeff(2) == 3 and p.coeff(7) == 0
    assert p.shift(1).support() == [0, 3]


def test_sl2_shape():
    e = np.array([[0, 1], [0, 0]], dtype=object)
    f = e.T.copy()
    L = LaurentMatrix.from_terms({1: f, 0: e, -1: Fraction(5) * e}, 2)
    assert L.evaluate(Fraction(2)).tolist() == [[0, Fraction(7, 2)], [2, 0]]
    assert L.transpose().evaluate(1).tolist() == [[0, 1], [6, 0]]
