"""Chevalley bases of the classical Lie algebras in their defining representations.

Realizations: ``sl(l+1)`` for A, ``so(2l+1)`` and ``so(2l)`` with the
antidiagonal form for B and D, ``sp(2l)`` with ``J = [[0, K], [-K, 0]]`` for C.
Simple root vectors are (projected) elementary matrices.  Higher root vectors
come from the recursion ``e_alpha = [e_i, e_gamma] / (p + 1)`` and its mirror
``e_{-alpha} = [e_{-gamma}, f_i] / (p + 1)``, which yields an integral
Chevalley basis with ``N_{alpha,gamma} = +-(p + 1)`` and ``[e_alpha, e_{-alpha}] = h_alpha``.
All entries are exact Fractions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .exact import inverse
from .rootsys import Root, RootSystem, build_root_system, height


class UnsupportedTypeError(ValueError):
    """Matrix-level operations exist only for the classical families."""


def _zeros(n: int) -> np.ndarray:
    return np.full((n, n), Fraction(0), dtype=object)


def _unit(n: int, a: int, b: int) -> np.ndarray:
    m = _zeros(n)
    m[a, b] = Fraction(1)
    return m


def comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def trace_form(a: np.ndarray, b: np.ndarray):
    """``tr(a b)`` without forming the product."""
    return (a * b.T).sum()


def _ratio(a: np.ndarray, b: np.ndarray) -> Fraction | None:
    """The scalar ``s`` with ``a = s b`` (``None`` if not proportional)."""
    nz = np.argwhere(b != 0)
    if nz.size == 0:
        raise ValueError("zero reference matrix")
    i, j = nz[0]
    s = Fraction(a[i, j]) / Fraction(b[i, j])
    return s if np.all(a == s * b) else None


def _form(alg) -> np.ndarray | None:
    n = alg.rank
    if alg.family == "A":
        return None
    size = 2 * n + 1 if alg.family == "B" else 2 * n
    J = _zeros(size)
    for a in range(size):
        sign = -1 if alg.family == "C" and a >= n else 1
        J[a, size - 1 - a] = Fraction(sign)
    return J


def _simple_pairs(alg) -> list[tuple[int, int]]:
    n, fam = alg.rank, alg.family
    if fam in "ABC":
        return [(i, i + 1) for i in range(n)] if fam != "C" else [(i, i + 1) for i in range(n - 1)] + [(n - 1, n)]
    # D: alpha_l = eps_{l-1} + eps_l sits at (l-2, l) with l the mirror of l-1
    return [(i, i + 1) for i in range(n - 1)] + [(n - 2, n)]


@dataclass(frozen=True, eq=False)
class ChevalleyBasis:
    rs: RootSystem
    size: int
    form: np.ndarray | None
    e: dict  # Root (positive or negative) -> matrix
    h: tuple  # simple coroots h_i = [e_i, f_i]

    @property
    def rank(self) -> int:
        return self.rs.rank

    def project(self, x: np.ndarray) -> np.ndarray:
        """Orthogonal projection of gl_n onto the realized subalgebra."""
        if self.form is None:
            return x - np.eye(self.size, dtype=object) * Fraction(x.trace(), self.size)
        return _project(x, self.form)

    @cached_property
    def gram(self) -> np.ndarray:
        """``G_ij = tr(h_i h_j)``."""
        n = self.rank
        return np.array([[trace_form(self.h[i], self.h[j]) for j in range(n)] for i in range(n)], dtype=object)

    @cached_property
    def gram_inv(self) -> np.ndarray:
        return inverse(self.gram)

    def pairing(self, alpha: Root):
        """``t_alpha = tr(e_alpha e_{-alpha})``."""
        return trace_form(self.e[tuple(alpha)], self.e[tuple(-a for a in alpha)])

    @cached_property
    def structure_constants(self) -> dict[tuple[Root, Root], Fraction]:
        """``N`` with ``[e_a, e_g] = N e_{a+g}``, read off one non-zero entry of ``e_{a+g}``.

        Root spaces are one-dimensional, so a single entry determines ``N``;
        :func:`full_structure_check` compares whole commutators.
        """
        out = {}
        anchor = {r: tuple(np.argwhere(m != 0)[0]) for r, m in self.e.items()}
        for a, ea in self.e.items():
            for g, eg in self.e.items():
                s = tuple(x + y for x, y in zip(a, g))
                if s not in self.e:
                    continue
                i, j = anchor[s]
                v = (ea[i, :] * eg[:, j]).sum() - (eg[i, :] * ea[:, j]).sum()
                out[(a, g)] = Fraction(v) / Fraction(self.e[s][i, j])
        return out

    def coroot(self, alpha: Root) -> np.ndarray:
        return comm(self.e[tuple(alpha)], self.e[tuple(-a for a in alpha)])

    @cached_property
    def principal_h(self) -> np.ndarray:
        """The element ``h`` with ``alpha_i(h) = 2`` for every simple root."""
        c = np.array(self.rs.cartan, dtype=object)
        # alpha_i(sum a_j h_j) = sum_j a_j c[i][j]
        a = inverse(c) @ np.full(self.rank, Fraction(2), dtype=object)
        return sum((a[j] * self.h[j] for j in range(self.rank)), _zeros(self.size))

    @cached_property
    def e_sum(self) -> np.ndarray:
        return sum((self.e[self.rs.simple_root(i)] for i in range(self.rank)), _zeros(self.size))


def _project(x: np.ndarray, J: np.ndarray) -> np.ndarray:
    Jinv = inverse(J)
    return (x - Jinv @ x.T @ J) / 2


def _string_p(rs: RootSystem, gamma: Root, i: int) -> int:
    p = 0
    cur = list(gamma)
    while True:
        cur[i] -= 1
        if not rs.is_root(cur):
            return p
        p += 1


def build_chevalley(rs: RootSystem | str) -> ChevalleyBasis:
    if isinstance(rs, str):
        rs = build_root_system(rs)
    alg = rs.algebra
    if not alg.is_classical:
        raise UnsupportedTypeError(
            f"{alg} has no matrix realization here; exceptional types are certified by rank-check only"
        )
    J = _form(alg)
    size = alg.rank + 1 if J is None else J.shape[0]
    e: dict[Root, np.ndarray] = {}
    hs = []
    for i, (a, b) in enumerate(_simple_pairs(alg)):
        x = _unit(size, a, b)
        if J is not None:
            x = _project(x, J)
            x = x / x[a, b]
        f = x.T.copy()
        hh = comm(x, f)
        s = _ratio(comm(hh, x), x)
        f = f * (Fraction(2) / s)
        r = rs.simple_root(i)
        e[r] = x
        e[tuple(-t for t in r)] = f
        hs.append(comm(x, f))
    for alpha in rs.positives:
        if height(alpha) == 1:
            continue
        for i in range(rs.rank):
            gamma = tuple(a - int(j == i) for j, a in enumerate(alpha))
            if rs.is_positive(gamma):
                break
        p1 = _string_p(rs, gamma, i) + 1
        si = rs.simple_root(i)
        neg = lambda r: tuple(-t for t in r)
        e[alpha] = comm(e[si], e[gamma]) / p1
        e[neg(alpha)] = comm(e[neg(gamma)], e[neg(si)]) / p1
    basis = ChevalleyBasis(rs, size, J, e, tuple(hs))
    _check_cartan(basis)
    return basis


def _check_cartan(cb: ChevalleyBasis) -> None:
    rs = cb.rs
    for i in range(rs.rank):
        for j in range(rs.rank):
            s = _ratio(comm(cb.h[i], cb.e[rs.simple_root(j)]), cb.e[rs.simple_root(j)])
            if s != rs.cartan[j][i]:
                raise AssertionError(f"realization of {rs.algebra} disagrees with its Cartan matrix at ({i}, {j})")


def full_structure_check(cb: ChevalleyBasis) -> bool:
    """Every commutator of root vectors equals ``N e_{a+g}`` (or lies in the Cartan / vanishes)."""
    sc = cb.structure_constants
    for a, ea in cb.e.items():
        for g, eg in cb.e.items():
            c = comm(ea, eg)
            s = tuple(x + y for x, y in zip(a, g))
            if s in cb.e:
                if not np.all(c == sc[(a, g)] * cb.e[s]):
                    return False
            elif any(s):
                if np.any(c != 0):
                    return False
    return True
