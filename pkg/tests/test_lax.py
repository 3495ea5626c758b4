import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fktoda.chevalley import UnsupportedTypeError
from fktoda.exact import exact_det, inverse
from fktoda.laurent import LaurentMatrix
from fktoda.lax import (
    charpoly_coefficients,
    check_casimirs,
    check_gradient_fd,
    check_hamiltonian_consistency,
    check_independence,
    check_involution,
    check_liouville,
    check_restriction_structure,
    evaluate_family,
    hamiltonian,
    hamiltonian_gradient,
    integrate_flow,
    invariant_family,
    lax_model,
    lax_rhs,
    pfaffian,
    point_L1,
    toda_initial_point,
)
from fktoda.phasespace import CoordKind
from fktoda.points import random_point
from fktoda.rootsys import build_root_system

E = lambda n, i, j: np.array([[Fraction(int((a, b) == (i, j))) for b in range(n)] for a in range(n)], dtype=object)


def sl3_by_hand(model, z):
    """L(lambda) for sl_3 entry by entry, with X = a_1 h_1 + a_2 h_2 + lower part."""
    val = {c: v for c, v in zip(model.space.coords, z)}
    x1, x2 = val[model.space.x(0)], val[model.space.x(1)]
    a1, a2 = (2 * x1 + x2) / 3, (x1 + 2 * x2) / 3
    xm = {c.index: v for c, v in val.items() if c.kind is CoordKind.LOWER_X}
    y = {c.index: v for c, v in val.items() if c.kind is CoordKind.UPPER_Y}
    L0 = np.array(
        [
            [a1, 1, 0],
            [xm[(1, 0)], a2 - a1, 1],
            [xm[(1, 1)], xm[(0, 1)], -a2],
        ],
        dtype=object,
    )
    Lm = np.array([[0, y[(1, 0)], y[(1, 1)]], [0, 0, y[(0, 1)]], [0, 0, 0]], dtype=object)
    return {1: E(3, 2, 0), 0: L0, -1: Lm}


def test_sl3_lax_matrix_matches_hand_constructor():
    model = lax_model("A2")
    rng = random.Random(0)
    for _ in range(5):
        z = random_point(8, rng)
        L = model.L(z)
        for p, M in sl3_by_hand(model, z).items():
            assert (L.coeff(p) == M).all(), p


def test_sl2_shape_and_invariants():
    model = lax_model("A1")
    x1, xm, y = Fraction(3), Fraction(5), Fraction(7)
    L = model.L(np.array([x1, xm, y], dtype=object))
    assert L.coeff(0).tolist() == [[x1 / 2, 1], [xm, -x1 / 2]]
    assert L.coeff(1).tolist() == [[0, 0], [1, 0]]
    assert L.coeff(-1).tolist() == [[0, y], [0, 0]]
    fv = evaluate_family(model, [x1, xm, y], gradients=False)
    # det L = -x1^2/4 - (1 + y/lambda)(lambda + x_-)
    assert fv.value(0, 1) == -x1 ** 2 / 4 - xm - y
    assert fv.value(1, 1) == -xm * y
    assert invariant_family(model.rs).casimirs == ((1, 1),)


def test_sl2_toda_equations():
    """Hand expansion of [L, L_-] for the 2x2 matrix."""
    model = lax_model("A1")
    rng = random.Random(3)
    for _ in range(5):
        x1, xm, y = random_point(3, rng)
        rhs = lax_rhs(model, [x1, xm, y])
        assert list(rhs) == [2 * (xm - y), -x1 * xm, x1 * y]


def test_zero_point():
    for name in ("A3", "B2", "C3", "D4"):
        model = lax_model(name)
        z = np.array([Fraction(0)] * model.dim, dtype=object)
        L = model.L(z)
        n = model.n
        assert (L.coeff(0) == model.cb.e_sum).all()
        assert (L.coeff(1) == model.cb.e[tuple(-a for a in model.rs.longest)]).all()
        assert not np.any(L.coeff(-1) != 0)
        assert not np.any(lax_rhs(model, z) != 0)
        assert n == model.cb.size


@pytest.mark.parametrize("name", ["A2", "B2", "C2", "D4"])
def test_rhs_commutator_is_traceless_and_float_path_agrees(name):
    model = lax_model(name)
    z = random_point(model.dim, random.Random(1))
    L = model.L(z)
    M = L @ model.lower(L) - model.lower(L) @ L
    assert all(t == 0 for t in M.trace().coeffs)
    exact = np.array([float(v) for v in lax_rhs(model, z)])
    fast = model.fast_rhs(np.array([float(v) for v in z]))
    assert np.allclose(exact, fast, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D3", "D4"])
def test_family_count(name):
    rs = build_root_system(name)
    fam = invariant_family(rs)
    assert 2 * fam.size == rs.dim + rs.rank
    assert sorted(g.exponent for g in fam.generators) == sorted(rs.exponents)
    assert fam.casimirs == tuple((g.exponent, g.index) for g in fam.generators)


def test_sl3_family():
    fam = invariant_family("A2")
    assert [fam.label(j, i) for j, i in fam.members] == ["F_{0,1}", "F_{1,1}", "F_{0,2}", "F_{1,2}", "F_{2,2}"]
    res = check_restriction_structure("A2", trials=10, seed=2)
    assert res["pass"] and res["leading_constant"] == "-1"


def test_invariants_rejected_for_exceptional():
    with pytest.raises(UnsupportedTypeError):
        invariant_family("G2")


@pytest.mark.parametrize("name,trials", [("A1", 1), ("A3", 50), ("B2", 50), ("C3", 10), ("D4", 5)])
def test_restriction_structure(name, trials):
    assert check_restriction_structure(name, trials=trials, seed=0)["pass"]


@pytest.mark.parametrize("l", [2, 3, 4])
def test_pfaffian_squares_to_determinant(l):
    rng = random.Random(l)
    n = 2 * l
    a = np.zeros((n, n), dtype=object)
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(rng.randint(-5, 5), rng.choice([1, 2]))
            a[i, j], a[j, i] = v, -v
    assert pfaffian(a) ** 2 == exact_det(a)
    assert pfaffian(a[:3, :3]) == 0


def test_pfaffian_known_values():
    a = np.array([[0, 1], [-1, 0]], dtype=object)
    assert pfaffian(a) == 1
    b = np.zeros((4, 4), dtype=object)
    for (i, j), v in {(0, 1): 2, (0, 2): 3, (0, 3): 5, (1, 2): 7, (1, 3): 11, (2, 3): 13}.items():
        b[i, j], b[j, i] = Fraction(v), Fraction(-v)
    assert pfaffian(b) == 2 * 13 - 3 * 11 + 5 * 7


@pytest.mark.parametrize("name", ["A2", "B3", "C2", "D4"])
def test_fd_gradients(name):
    res = check_gradient_fd(name, trials=2, seed=4)
    assert res["pass"], res


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32))
def test_ad_invariance_sl_n(l, seed):
    """Char-poly coefficients are unchanged by constant conjugation."""
    model = lax_model(f"A{l}")
    n = l + 1
    rng = random.Random(seed)
    L = model.L(random_point(model.dim, rng))
    while True:
        G = np.array([[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)], dtype=object)
        if exact_det(G) != 0:
            break
    Gi = inverse(G)
    conj = LaurentMatrix(L.low, np.array([G @ c @ Gi for c in L.coeffs]))
    a, b = charpoly_coefficients(L), charpoly_coefficients(conj)
    for k in a:
        p, q = a[k].trimmed(), b[k].trimmed()
        assert p.window == q.window and (p.coeffs == q.coeffs).all()


@pytest.mark.parametrize("name", ["A2", "A3", "B2", "C3", "D4"])
def test_casimirs_blind_to_positive_degrees(name):
    """F_{m_i,i} does not see perturbations by g~_{>=1}."""
    model = lax_model(name)
    rs, cb = model.rs, model.cb
    fam = invariant_family(rs)
    rng = random.Random(9)
    z = random_point(model.dim, rng)
    L = model.L(z)
    m1 = rs.coxeter_height + 1
    terms = {}
    for p in (0, 1, 2):
        for r, M in cb.e.items():
            if sum(r) + m1 * p >= 1:
                terms[p] = terms.get(p, 0) + Fraction(rng.randint(-4, 4)) * M
        if p >= 1:
            for h in cb.h:
                terms[p] = terms.get(p, 0) + Fraction(rng.randint(-4, 4)) * h
    pert = L + LaurentMatrix.from_terms(terms, model.n)
    a, b = charpoly_coefficients(L), charpoly_coefficients(pert)
    for g in fam.generators:
        if g.kind != "charpoly":
            continue
        assert a[g.k].coeff(-g.exponent) == b[g.k].coeff(-g.exponent)


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "B2"])
def test_involution(name):
    assert check_involution(name, trials=5, seed=1)["pass"]


def test_casimir_examples():
    res = check_casimirs("A2", trials=5)
    assert res["pass"] and res["casimirs"] == ["F_{1,1}", "F_{2,2}"]
    res = check_casimirs("B2", trials=5)
    assert res["pass"] and res["casimirs"] == ["F_{1,1}", "F_{3,2}"]
    assert check_casimirs("A1", trials=3)["casimirs"] == ["F_{1,1}"]


@pytest.mark.parametrize("name,rank", [("A1", 2), ("A2", 5), ("B3", 12)])
def test_independence_at_L1(name, rank):
    res = check_independence(name, points=2, seed=0)
    assert res["pass"] and res["rank_at_L1"] == rank


def test_L1_is_trace_form_consistent():
    model = lax_model("C2")
    z = point_L1(model)
    L = model.L(z)
    assert (L.coeff(-1) == model.cb.e_sum).all()
    assert (L.coeff(0) == model.cb.e_sum + model.cb.principal_h).all()


@pytest.mark.parametrize("name", ["A2", "C2", "D4"])
def test_liouville(name):
    assert check_liouville(name, points=2)["pass"]


@pytest.mark.parametrize("name,level", [("A2", None), ("B2", None), ("C3", None), ("D4", None), ("A3", 2), ("B3", 3)])
def test_hamiltonian_consistency(name, level):
    assert check_hamiltonian_consistency(name, trials=3, seed=2, level=level)["pass"]


def test_hamiltonian_gradient_by_difference_quotient():
    """H is quadratic, so a symmetric exact difference quotient is its derivative."""
    model = lax_model("B2")
    z = random_point(model.dim, random.Random(8))
    g = hamiltonian_gradient(model, z)
    for a in range(model.dim):
        e = np.array([Fraction(int(b == a)) for b in range(model.dim)], dtype=object)
        assert (hamiltonian(model, z + e) - hamiltonian(model, z - e)) / 2 == g[a]


def test_sl2_flow_conserves_invariants():
    model = lax_model("A1")
    res = integrate_flow(model, toda_initial_point(model, 2.0, 0), t_end=2.0, dt=1e-3)
    assert not res.aborted and res.max_drift < 1e-8


def test_zero_initial_point_is_stationary():
    model = lax_model("A2")
    res = integrate_flow(model, np.zeros(model.dim), t_end=0.5, dt=1e-2)
    assert res.max_drift == 0.0 and not np.any(res.states != 0)


def test_flow_rejects_bad_step():
    model = lax_model("A1")
    with pytest.raises(ValueError):
        integrate_flow(model, np.zeros(3), 1.0, 0.0)


def test_flow_csv(tmp_path):
    model = lax_model("A1")
    res = integrate_flow(model, toda_initial_point(model, 1.0, 0), t_end=0.1, dt=1e-2)
    path = tmp_path / "traj.csv"
    res.to_csv(path, model.space.labels())
    lines = path.read_text().splitlines()
    assert lines[0] == "t,x_1,x_-1,y_1,max_rel_drift"
    assert len(lines) == len(res.times) + 1
