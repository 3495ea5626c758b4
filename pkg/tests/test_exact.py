import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from fktoda.exact import exact_det, exact_rank, inverse, solve


def cofactor_det(m):
    """Laplace expansion along the first row; independent of any elimination."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(m[0][0])
    total = Fraction(0)
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * Fraction(m[0][j]) * cofactor_det(minor)
    return total


fractions = st.builds(Fraction, st.integers(-9, 9), st.sampled_from([1, 2, 3]))


def test_trivial_ranks():
    assert exact_rank([[1, 2], [2, 4]]) == 1
    assert exact_rank(np.zeros((3, 3), dtype=object)) == 0
    assert exact_rank(np.zeros((0, 4), dtype=object)) == 0


def test_random_5x5_against_cofactor():
    rng = random.Random(11)
    for _ in range(20):
        m = [[Fraction(rng.randint(-9, 9), rng.choice([1, 2, 3])) for _ in range(5)] for _ in range(5)]
        d = cofactor_det(m)
        assert exact_det(m) == d
        assert exact_rank(m) == (5 if d != 0 else exact_rank(m))
        if d != 0:
            assert exact_rank(m) == 5


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_rank_matches_sympy(r, c, data):
    m = [[data.draw(fractions) for _ in range(c)] for _ in range(r)]
    assert exact_rank(m) == sympy.Matrix(m).rank()


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.data())
def test_rank_of_product_is_bounded(n, data):
    a = [[data.draw(fractions) for _ in range(n)] for _ in range(n)]
    b = [[data.draw(fractions) for _ in range(n)] for _ in range(n)]
    ab = (np.array(a, dtype=object) @ np.array(b, dtype=object)).tolist()
    assert exact_rank(ab) <= min(exact_rank(a), exact_rank(b))
    assert exact_det(ab) == exact_det(a) * exact_det(b)


def test_low_rank_construction():
    rng = random.Random(3)
    for r in range(0, 5):
        u = np.array([[Fraction(rng.randint(-5, 5)) for _ in range(r)] for _ in range(6)], dtype=object).reshape(6, r)
        v = np.array([[Fraction(rng.randint(-5, 5)) for _ in range(7)] for _ in range(r)], dtype=object).reshape(r, 7)
        m = u @ v if r else np.zeros((6, 7), dtype=object)
        assert exact_rank(m) == sympy.Matrix(m.tolist()).rank()


def test_inverse_and_solve():
    a = [[Fraction(2), Fraction(1)], [Fraction(7), Fraction(4)]]
    inv = inverse(a)
    assert (np.array(a, dtype=object) @ inv == np.eye(2, dtype=object)).all()
    assert solve(a, [Fraction(3), Fraction(11)]) == [Fraction(1), Fraction(1)]
    with pytest.raises(ValueError):
        inverse([[1, 2], [2, 4]])
