"""Coordinate Poisson bracket on the phase spaces.

The bracket of two coordinate functions is linear in the point: with
``eta_alpha = 1`` for positive roots and 0 otherwise,

    {x_i, x_j} = 0                      {x_i, x_{-a}} = a(h_i) x_{-a}
    {x_i, y_a} = -a(h_i) y_a             {x_{-a}, x_{-g}} = eta_{a+g} N_{a,g} x_{-a-g}
    {x_{-a}, y_g} = eta_{g-a} N_{a,-g} y_{g-a}    {y_a, y_g} = 0

The structure constants come from the Chevalley basis of the defining
representation.  On a level-k space the same formulas apply; a right-hand
side outside the space is zero there.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .chevalley import ChevalleyBasis, UnsupportedTypeError, build_chevalley
from .phasespace import CoordId, CoordKind, PhaseSpace, make_phase_space
from .rootsys import Root, RootSystem

__all__ = [
    "StructureConstants",
    "PoissonMatrix",
    "UnsupportedTypeError",
    "structure_constants",
    "bracket_pair",
    "poisson_matrix",
    "hamiltonian_vector_field",
]


@dataclass(frozen=True)
class StructureConstants:
    rs: RootSystem
    table: dict  # (alpha, gamma) -> N with [e_alpha, e_gamma] = N e_{alpha+gamma}
    realization: str

    def __getitem__(self, key: tuple[Root, Root]) -> Fraction:
        return self.table[key]

    def get(self, a: Root, g: Root, default=0):
        return self.table.get((tuple(a), tuple(g)), default)

    def __len__(self) -> int:
        return len(self.table)


_REALIZATIONS = {"A": "sl(l+1)", "B": "so(2l+1)", "C": "sp(2l)", "D": "so(2l)"}


def structure_constants(rs: RootSystem, cb: ChevalleyBasis | None = None) -> StructureConstants:
    if not rs.algebra.is_classical:
        raise UnsupportedTypeError(
            f"structure constants for {rs.algebra} are not available; use rank-check for exceptional types"
        )
    cb = cb or build_chevalley(rs)
    return StructureConstants(rs, dict(cb.structure_constants), _REALIZATIONS[rs.algebra.family])


@dataclass(frozen=True, eq=False)
class PoissonMatrix:
    space: PhaseSpace
    point: np.ndarray
    mat: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.mat.shape

    def is_antisymmetric(self) -> bool:
        return bool(np.all(self.mat + self.mat.T == 0))

    def rank(self) -> int:
        from .exact import exact_rank

        return exact_rank(self.mat)

    def __matmul__(self, v):
        return self.mat @ v


def _neg(r: Root) -> Root:
    return tuple(-a for a in r)


def _sub(a: Root, b: Root) -> Root:
    return tuple(x - y for x, y in zip(a, b))


def _add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def _terms(rs: RootSystem, sc: StructureConstants, za: CoordId, zb: CoordId) -> list[tuple[Fraction, CoordId]]:
    """``{za, zb}`` as a linear combination of coordinates."""
    ka, kb = za.kind, zb.kind
    X, XN, Y = CoordKind.CARTAN_X, CoordKind.LOWER_X, CoordKind.UPPER_Y
    if ka is X and kb is X or ka is Y and kb is Y:
        return []
    if ka is X:
        root = zb.index
        c = rs.pairing(root, za.index)
        return [(c if kb is XN else -c, zb)] if c else []
    if kb is X:
        return [(-c, z) for c, z in _terms(rs, sc, zb, za)]
    if ka is XN and kb is XN:
        s = _add(za.index, zb.index)
        n = sc.get(za.index, zb.index)
        return [(n, CoordId(XN, s))] if rs.is_positive(s) and n else []
    if ka is XN and kb is Y:
        d = _sub(zb.index, za.index)
        n = sc.get(za.index, _neg(zb.index))
        return [(n, CoordId(Y, d))] if rs.is_positive(d) and n else []
    return [(-c, z) for c, z in _terms(rs, sc, zb, za)]


def _value(space: PhaseSpace, point, terms) -> Fraction:
    out = 0
    for c, z in terms:
        pos = space.position.get(z)
        if pos is not None:
            out = out + c * point[pos]
    return out


def _check_point(space: PhaseSpace, point) -> None:
    if len(point) != space.dim:
        raise ValueError(f"point has {len(point)} coordinates, {space.rs.algebra} level {space.level} needs {space.dim}")


def bracket_pair(rs: RootSystem, sc: StructureConstants, za: CoordId, zb: CoordId, point, space: PhaseSpace | None = None):
    space = space or make_phase_space(rs)
    _check_point(space, point)
    for z in (za, zb):
        if z not in space:
            raise ValueError(f"{z.label} is not a coordinate of this phase space")
    return _value(space, point, _terms(rs, sc, za, zb))


def bracket_table(rs: RootSystem, sc: StructureConstants, space: PhaseSpace) -> dict:
    """Sparse linear structure: ``(a, b) -> [(coeff, position or None)]`` for a < b."""
    out = {}
    cs = space.coords
    for a in range(len(cs)):
        for b in range(a + 1, len(cs)):
            t = _terms(rs, sc, cs[a], cs[b])
            if t:
                out[(a, b)] = [(c, space.position.get(z)) for c, z in t]
    return out


def poisson_matrix(rs: RootSystem, sc: StructureConstants, space: PhaseSpace, point, table: dict | None = None) -> PoissonMatrix:
    _check_point(space, point)
    point = np.asarray(point)
    n = space.dim
    dt = object if point.dtype == object else float
    mat = np.zeros((n, n), dtype=dt)
    table = table if table is not None else bracket_table(rs, sc, space)
    for (a, b), terms in table.items():
        v = 0
        for c, pos in terms:
            if pos is not None:
                v = v + c * point[pos]
        mat[a, b] = v
        mat[b, a] = -v
    return PoissonMatrix(space, point, mat)


def hamiltonian_vector_field(rs: RootSystem, sc: StructureConstants, space: PhaseSpace, point, gradient) -> np.ndarray:
    """``X_F = Pi . dF``, i.e. ``(X_F)_a = {z_a, F}``."""
    gradient = np.asarray(gradient)
    if gradient.shape != (space.dim,):
        raise ValueError(f"gradient has shape {gradient.shape}, expected ({space.dim},)")
    return poisson_matrix(rs, sc, space, point).mat @ gradient
