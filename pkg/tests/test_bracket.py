import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fktoda.bracket import bracket_pair, bracket_table, hamiltonian_vector_field, poisson_matrix, structure_constants
from fktoda.exact import exact_rank
from fktoda.lax import evaluate_family, invariant_family, lax_model, lie_poisson_matrix, point_L0
from fktoda.phasespace import make_phase_space
from fktoda.points import random_point
from fktoda.rootsys import build_root_system

CLASSICAL = ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D3", "D4"]
fracs = st.builds(Fraction, st.integers(-9, 9), st.sampled_from([1, 2, 3]))


def sl3():
    rs = build_root_system("A2")
    return rs, structure_constants(rs), make_phase_space(rs)


@pytest.mark.parametrize("name", CLASSICAL)
def test_formula_route_equals_lie_poisson_route(name):
    model = lax_model(name)
    rng = random.Random(5)
    for _ in range(3):
        z = random_point(model.dim, rng)
        assert (model.poisson(z) == lie_poisson_matrix(model, z)).all()


@pytest.mark.parametrize("name,k", [("A3", 1), ("A3", 2), ("B3", 2), ("C3", 3), ("D4", 2)])
def test_routes_agree_on_intermediate_levels(name, k):
    model = lax_model(name, k)
    z = random_point(model.dim, random.Random(k))
    assert (model.poisson(z) == lie_poisson_matrix(model, z)).all()


def test_sl3_formula_examples():
    rs, sc, sp = sl3()
    z = random_point(sp.dim, random.Random(1))
    a1, a2 = (1, 0), (0, 1)
    assert bracket_pair(rs, sc, sp.x(0), sp.x(1), z) == 0
    assert bracket_pair(rs, sc, sp.x(0), sp.xneg(a1), z) == 2 * z[sp.position[sp.xneg(a1)]]
    assert bracket_pair(rs, sc, sp.xneg(a1), sp.y(a1), z) == 0


def test_sl3_entries_at_L0():
    """{x_i, y_{alpha_j}} = -c_{ji} b_j at L_0."""
    rs, sc, sp = sl3()
    z = point_L0(lax_model("A2"), [1, 1])
    assert bracket_pair(rs, sc, sp.x(0), sp.y((1, 0)), z) == -2
    assert bracket_pair(rs, sc, sp.x(0), sp.y((0, 1)), z) == 1


def test_sl3_random_rank():
    rs, sc, sp = sl3()
    pm = poisson_matrix(rs, sc, sp, random_point(8, random.Random(2)))
    assert pm.is_antisymmetric() and pm.rank() == 6


@pytest.mark.parametrize("name", CLASSICAL + ["B4", "C4", "D5"])
def test_true_bracket_rank_at_L0(name):
    """Second route to the rank certificate: the structure-constant matrix at L_0."""
    model = lax_model(name)
    rs = model.rs
    b = [2, 3, 5, 7, 11][: rs.rank]
    assert exact_rank(model.poisson(point_L0(model, b))) == rs.dim - rs.rank


def test_vector_fields():
    rs, sc, sp = sl3()
    z = random_point(sp.dim, random.Random(4))
    zero = np.array([Fraction(0)] * sp.dim, dtype=object)
    assert not np.any(hamiltonian_vector_field(rs, sc, sp, z, zero) != 0)
    model = lax_model("A2")
    fv = evaluate_family(model, z)
    for j, i in invariant_family(model.rs).casimirs:
        assert not np.any(hamiltonian_vector_field(rs, sc, sp, z, fv.gradient(j, i)) != 0)


def test_gradient_shape_checked():
    rs, sc, sp = sl3()
    with pytest.raises(ValueError):
        hamiltonian_vector_field(rs, sc, sp, [0] * 8, [0] * 3)
    with pytest.raises(ValueError):
        bracket_pair(rs, sc, sp.x(0), sp.x(1), [0] * 3)


def _bracket_linear(table, n, a, vec):
    """{z_a, sum_c vec_c z_c} as a coefficient vector."""
    out = [Fraction(0)] * n
    for c, v in enumerate(vec):
        if v == 0 or c == a:
            continue
        key, sign = ((a, c), 1) if a < c else ((c, a), -1)
        for coeff, pos in table.get(key, []):
            if pos is not None:
                out[pos] += sign * v * coeff
    return out


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["A2", "B2", "C3"]), st.data())
def test_jacobi_identity_of_the_bracket(name, data):
    rs = build_root_system(name)
    sp = make_phase_space(rs)
    table = bracket_table(rs, structure_constants(rs), sp)
    n = sp.dim
    a, b, c = data.draw(st.lists(st.integers(0, n - 1), min_size=3, max_size=3, unique=True))

    def unit(i):
        return [Fraction(int(j == i)) for j in range(n)]

    def br(i, j):
        return _bracket_linear(table, n, i, unit(j))

    total = [Fraction(0)] * n
    for x, y, w in ((a, b, c), (b, c, a), (c, a, b)):
        inner = br(y, w)
        for t, v in enumerate(_bracket_linear(table, n, x, inner)):
            total[t] += v
    assert all(v == 0 for v in total)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["A2", "B2"]), st.data())
def test_antisymmetry_property(name, data):
    model = lax_model(name)
    z = np.array(data.draw(st.lists(fracs, min_size=model.dim, max_size=model.dim)), dtype=object)
    P = model.poisson(z)
    assert not np.any(P + P.T != 0)
    assert (P == lie_poisson_matrix(model, z)).all()
