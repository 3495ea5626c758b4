"""Simple root systems: Cartan matrices, positive roots, heights and exponents.

Roots are integer tuples of coordinates over the simple roots (Bourbaki
numbering).  The Cartan matrix is stored as ``cartan[i][j] = <alpha_i,
alpha_j^vee> = alpha_i(h_j)``, so that ``{x_i, y_{alpha_j}}`` at the
point ``L_0`` reads ``-cartan[j][i] * b_j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Sequence

Root = tuple[int, ...]

FAMILIES = "ABCDEFG"


class InvalidAlgebraError(ValueError):
    """Raised for a family/rank pair that is not a simple type."""


@dataclass(frozen=True, order=True)
class AlgebraType:
    family: str
    rank: int

    def __post_init__(self):
        fam, rk = self.family, self.rank
        if fam not in FAMILIES or len(fam) != 1:
            raise InvalidAlgebraError(f"unknown family {fam!r}; expected one of {', '.join(FAMILIES)}")
        if not isinstance(rk, int) or rk < 1:
            raise InvalidAlgebraError(f"rank must be a positive integer, got {rk!r}")
        bounds = {
            "A": (rk >= 1, "A requires rank >= 1"),
            "B": (rk >= 2, "B requires rank >= 2"),
            "C": (rk >= 2, "C requires rank >= 2"),
            "D": (rk >= 3, "D requires rank >= 3"),
            "E": (rk in (6, 7, 8), "E requires rank in {6, 7, 8}"),
            "F": (rk == 4, "F requires rank 4"),
            "G": (rk == 2, "G requires rank 2"),
        }
        ok, msg = bounds[fam]
        if not ok:
            raise InvalidAlgebraError(f"{msg}, got {fam}{rk}")

    @classmethod
    def parse(cls, text: str) -> "AlgebraType":
        """``"E6"`` / ``"e_6"`` / ``"B 3"`` -> AlgebraType."""
        t = text.strip().upper().replace("_", "").replace(" ", "")
        if len(t) < 2 or not t[1:].isdigit():
            raise InvalidAlgebraError(f"cannot parse algebra type {text!r}")
        return cls(t[0], int(t[1:]))

    @property
    def is_classical(self) -> bool:
        return self.family in "ABCD"

    @property
    def note(self) -> str | None:
        if self.family == "D" and self.rank == 3:
            return "D3 is isomorphic to A3"
        if self.family == "C" and self.rank == 2:
            return "C2 is isomorphic to B2"
        return None

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


def cartan_matrix(alg: AlgebraType) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix with ``c[i][j] = <alpha_i, alpha_j^vee>``."""
    n, fam = alg.rank, alg.family
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2

    def link(i, j, cij=-1, cji=-1):
        c[i][j], c[j][i] = cij, cji

    if fam in "ABCD":
        last = n - 1 if fam != "D" else n - 2
        for i in range(last):
            link(i, i + 1)
        if fam == "B":
            # alpha_l short: <alpha_{l-1}, alpha_l^vee> = -2
            link(n - 2, n - 1, -2, -1)
        elif fam == "C":
            link(n - 2, n - 1, -1, -2)
        elif fam == "D":
            link(n - 3, n - 1)
    elif fam == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif fam == "F":
        link(0, 1)
        link(1, 2, -2, -1)
        link(2, 3)
    elif fam == "G":
        # alpha_1 short, alpha_2 long
        link(0, 1, -1, -3)
    return tuple(tuple(row) for row in c)


def height(root: Sequence[int]) -> int:
    return sum(root)


def _reflect(root: Root, j: int, cartan) -> Root:
    pairing = sum(a * cartan[i][j] for i, a in enumerate(root))
    if pairing == 0:
        return root
    out = list(root)
    out[j] -= pairing
    return tuple(out)


def _all_roots(cartan) -> frozenset[Root]:
    n = len(cartan)
    simple = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for r in frontier:
            for j in range(n):
                s = _reflect(r, j, cartan)
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    return frozenset(seen)


def _order_key(root: Root):
    # height ascending, then lexicographically descending within a level
    return (height(root), tuple(-a for a in root))


class Decomposition(NamedTuple):
    target: Root  # root of height k + 1
    source: Root  # root of height k
    simple: int  # index p (0-based) with target = source + alpha_p


def exponents_from_heights(d: Sequence[int]) -> tuple[int, ...]:
    """Exponents as the dual partition of the level counts ``d_1 >= d_2 >= ...``.

    ``m`` occurs with multiplicity ``d_m - d_{m+1}``.
    """
    d = list(d)
    if not d:
        raise ValueError("level counts must be non-empty")
    if any(not isinstance(x, int) or x < 1 for x in d):
        raise ValueError(f"level counts must be positive integers: {d}")
    if any(a < b for a, b in zip(d, d[1:])):
        raise ValueError(f"level counts must be weakly decreasing: {d}")
    if d[-1] != 1:
        raise ValueError(f"the top level of a simple root system holds exactly one root, got {d}")
    out = []
    for m, dm in enumerate(d, start=1):
        nxt = d[m] if m < len(d) else 0
        out.extend([m] * (dm - nxt))
    return tuple(sorted(out))


@dataclass(frozen=True)
class RootSystem:
    algebra: AlgebraType
    cartan: tuple[tuple[int, ...], ...]
    positives: tuple[Root, ...]
    heights: tuple[int, ...]
    exponents: tuple[int, ...]
    longest: Root
    _index: dict = field(default=None, compare=False, hash=False, repr=False)

    @property
    def rank(self) -> int:
        return self.algebra.rank

    @property
    def n_positive(self) -> int:
        return len(self.positives)

    @property
    def dim(self) -> int:
        return self.rank + 2 * len(self.positives)

    @property
    def coxeter_height(self) -> int:
        """m_l = height of the longest root."""
        return height(self.longest)

    @cached_property
    def roots(self) -> frozenset[Root]:
        return frozenset(self.positives) | frozenset(tuple(-a for a in r) for r in self.positives)

    def index(self, root: Root) -> int:
        return self._index[tuple(root)]

    def is_root(self, root: Sequence[int]) -> bool:
        return tuple(root) in self.roots

    def is_positive(self, root: Sequence[int]) -> bool:
        return tuple(root) in self._index

    def simple_root(self, i: int) -> Root:
        return tuple(int(j == i) for j in range(self.rank))

    def level(self, k: int) -> tuple[Root, ...]:
        """Positive roots of height k in the canonical order."""
        return tuple(r for r in self.positives if height(r) == k)

    def pairing(self, root: Sequence[int], j: int) -> int:
        """<root, alpha_j^vee> = root(h_j)."""
        return sum(a * self.cartan[i][j] for i, a in enumerate(root))

    def to_dict(self) -> dict:
        return {
            "family": self.algebra.family,
            "rank": self.rank,
            "cartan": [list(r) for r in self.cartan],
            "positives": [list(r) for r in self.positives],
            "heights": list(self.heights),
            "exponents": list(self.exponents),
            "longest": list(self.longest),
        }


def build_root_system(algebra: AlgebraType | str) -> RootSystem:
    if isinstance(algebra, str):
        algebra = AlgebraType.parse(algebra)
    cartan = cartan_matrix(algebra)
    phi = _all_roots(cartan)
    n = algebra.rank
    simple = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    # height induction: a root of height k+1 is a root of height k plus a simple root
    levels = [sorted(simple, key=_order_key)]
    while True:
        nxt = {tuple(a + b for a, b in zip(r, s)) for r in levels[-1] for s in simple}
        nxt = sorted((r for r in nxt if r in phi), key=_order_key)
        if not nxt:
            break
        levels.append(nxt)
    positives = tuple(r for lev in levels for r in lev)
    if 2 * len(positives) != len(phi):
        raise AssertionError("height induction missed roots")
    heights = tuple(len(lev) for lev in levels)
    return RootSystem(
        algebra=algebra,
        cartan=cartan,
        positives=positives,
        heights=heights,
        exponents=exponents_from_heights(heights),
        longest=levels[-1][0],
        _index={r: i for i, r in enumerate(positives)},
    )


def root_sum_decompositions(rs: RootSystem, k: int) -> list[Decomposition]:
    """All ways of writing a root of height k+1 as (root of height k) + (simple root)."""
    m = rs.coxeter_height
    if not 1 <= k <= m - 1:
        raise ValueError(f"k must lie in [1, {m - 1}] for {rs.algebra}, got {k}")
    out = []
    for beta in rs.level(k + 1):
        for p in range(rs.rank):
            gamma = tuple(b - int(i == p) for i, b in enumerate(beta))
            if rs.is_positive(gamma):
                out.append(Decomposition(beta, gamma, p))
    return out

