import random
from fractions import Fraction

import numpy as np
import pytest

from fktoda.exact import exact_rank
from fktoda.rankcheck import (
    FULL_MATRIX,
    GenericParams,
    assemble_poisson_at_L0,
    certify,
    lambda0,
    lambda_block,
    poisson_rank_at_L0,
    signed_block_ranks,
    square_block_determinant,
)
from fktoda.rootsys import build_root_system


def test_lambda0_examples():
    a2 = build_root_system("A2")
    assert lambda0(a2, [1, 1]).tolist() == [[2, -1], [-1, 2]]
    m = lambda0(a2, [2, 3])
    assert m.tolist() == [[4, -2], [-3, 6]]
    assert m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] == 18


def test_zero_parameter_rejected():
    with pytest.raises(ValueError):
        GenericParams((1, 0, 2))
    with pytest.raises(ValueError):
        lambda0(build_root_system("B3"), [1, 2])


def test_a2_first_block():
    blk = lambda_block(build_root_system("A2"), 1, [2, 3])
    assert blk.mat.tolist() == [[3], [2]]
    assert exact_rank(blk.mat) == 1


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_type_a_blocks_are_bidiagonal(n):
    rs = build_root_system(f"A{n}")
    b = GenericParams.primes(n).b
    for k in range(1, n):
        blk = lambda_block(rs, k, b)
        for j in range(blk.shape[1]):
            # row j is alpha_{j+1} + ... + alpha_{j+k}
            assert blk.mat[j, j] == b[j + k]
            assert blk.mat[j + 1, j] == b[j]
        assert sum(1 for x in blk.mat.ravel() if x != 0) == 2 * blk.shape[1]


def _monomial_exponents(fn, b):
    """Exponents e with fn(b) = prod b_j^e_j, found by doubling one b_j at a time."""
    base = fn(b)
    exps = []
    for j in range(len(b)):
        bb = list(b)
        bb[j] = 2 * bb[j]
        ratio = fn(bb) / base
        e = 0
        while ratio > 1:
            assert ratio.denominator == 1 and ratio.numerator % 2 == 0
            ratio /= 2
            e += 1
        assert ratio == 1
        exps.append(e)
    return exps


@pytest.mark.parametrize("l", [4, 5, 6, 7])
def test_type_d_even_block_determinants(l):
    rs = build_root_system(f"D{l}")
    b = [Fraction(p) for p in GenericParams.primes(l).b]
    for k in range(2, l - 1, 2):
        blk = lambda_block(rs, k, b)
        assert blk.shape[0] == blk.shape[1]

        def reduced(bb, k=k):
            d = square_block_determinant(lambda_block(rs, k, bb))
            return d / (-2 * bb[l - 2] * bb[l - 1] * bb[l - k - 2])

        exps = _monomial_exponents(reduced, b)
        mono = Fraction(1)
        for bj, e in zip(b, exps):
            mono *= bj ** e
        assert reduced(b) == mono


@pytest.mark.parametrize("name", ["A1", "A2", "A5", "F4", "G2"])
def test_poisson_rank_at_L0(name):
    rs = build_root_system(name)
    r, expected, ok = poisson_rank_at_L0(rs)
    assert ok and r == rs.dim - rs.rank
    M = assemble_poisson_at_L0(rs)
    assert np.all(M + M.T == 0)


def test_a1_single_block():
    rs = build_root_system("A1")
    assert lambda0(rs, [5]).tolist() == [[10]]
    assert poisson_rank_at_L0(rs, [5])[:2] == (2, 2)


@pytest.mark.parametrize("name", FULL_MATRIX)
def test_certify_full_matrix(name):
    rep = certify(name)
    assert rep["pass"], rep
    assert [b["k"] for b in rep["blocks"]] == list(range(build_root_system(name).coxeter_height))
    assert rep["m_rank"] == rep["expected"]


def test_notes_for_isomorphic_small_cases():
    assert certify("D3")["note"] and certify("C2")["note"]


@pytest.mark.parametrize("name", ["A4", "B4", "C4", "G2"])
def test_random_signs_keep_rank_for_abc_and_g2(name):
    for seed in range(4):
        assert signed_block_ranks(name, seed)["deficient"] == []


def test_random_signs_can_lose_rank():
    """Sign-free entries matter: some sign patterns on D_4 drop the rank of Lambda_2."""
    import sympy as sp

    res = signed_block_ranks("D4", 1)
    assert res["deficient"] == [2]
    row = res["blocks"][1]
    assert row["rank"] < row["d_k1"]
    # independent rank of the same signed block
    rng = random.Random(1)
    rs = build_root_system("D4")
    mats = []
    for k in range(1, rs.coxeter_height):
        m = lambda_block(rs, k).mat
        mats.append(np.frompyfunc(lambda x: -x if x != 0 and rng.random() < 0.5 else x, 1, 1)(m))
    assert sp.Matrix(mats[1].tolist()).rank() == row["rank"]
