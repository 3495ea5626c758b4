"""Coordinates, grading and the affine phase spaces ``T^(k)`` inside the loop algebra.

The loop grading gives ``lambda^k e_alpha`` the degree ``|alpha| + (m + 1) k``
where ``m`` is the height of the longest root.  The phase space of level
``k`` is ``f + sum_{0 <= i <= k} g~_{-i}`` with ``f = sum e_i + lambda e_{-beta}``;
level ``m`` is the full periodic Full Kostant-Toda space and level 1 the
periodic Toda space.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Sequence

from .rootsys import Root, RootSystem, height


class CoordKind(str, Enum):
    CARTAN_X = "x"  # x_i = <h_i, X>
    LOWER_X = "x-"  # x_{-alpha} = <e_alpha, X>
    UPPER_Y = "y"  # y_alpha = <e_{-alpha}, Y>


@dataclass(frozen=True)
class CoordId:
    kind: CoordKind
    index: int | Root

    @property
    def label(self) -> str:
        if self.kind is CoordKind.CARTAN_X:
            return f"x_{self.index + 1}"
        r = "".join(str(a) for a in self.index)
        return f"x_-{r}" if self.kind is CoordKind.LOWER_X else f"y_{r}"

    def to_dict(self) -> dict:
        idx = self.index + 1 if self.kind is CoordKind.CARTAN_X else list(self.index)
        return {"kind": self.kind.value, "index": idx, "label": self.label}


def grade_of(rs: RootSystem, lam_power: int, root: Sequence[int] | None) -> int:
    """Loop degree of ``lambda^k e_alpha``; ``root=None`` stands for a Cartan element."""
    h = 0 if root is None else height(root)
    return h + (rs.coxeter_height + 1) * lam_power


def coord_grade(rs: RootSystem, cid: CoordId) -> int:
    """Degree of the loop direction a coordinate measures."""
    if cid.kind is CoordKind.CARTAN_X:
        return 0
    if cid.kind is CoordKind.LOWER_X:
        return grade_of(rs, 0, tuple(-a for a in cid.index))
    return grade_of(rs, -1, cid.index)


def graded_piece(rs: RootSystem, i: int) -> list[tuple[int, Root | None]]:
    """Basis ``(lambda power, root or None)`` of the degree-i piece of the loop algebra.

    Cartan directions appear once per simple coroot.
    """
    m1 = rs.coxeter_height + 1
    out: list[tuple[int, Root | None]] = []
    if i % m1 == 0:
        out.extend([(i // m1, None)] * rs.rank)
    for r in rs.positives:
        for root in (r, tuple(-a for a in r)):
            rem = i - height(root)
            if rem % m1 == 0:
                out.append((rem // m1, root))
    return out


@dataclass(frozen=True)
class PhaseSpace:
    rs: RootSystem
    level: int
    coords: tuple[CoordId, ...]

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def is_full(self) -> bool:
        return self.level == self.rs.coxeter_height

    @cached_property
    def position(self) -> dict[CoordId, int]:
        return {c: i for i, c in enumerate(self.coords)}

    def __contains__(self, cid: CoordId) -> bool:
        return cid in self.position

    def x(self, i: int) -> CoordId:
        return CoordId(CoordKind.CARTAN_X, i)

    def xneg(self, root: Root) -> CoordId:
        return CoordId(CoordKind.LOWER_X, tuple(root))

    def y(self, root: Root) -> CoordId:
        return CoordId(CoordKind.UPPER_Y, tuple(root))

    @property
    def fixed_part(self) -> str:
        return "sum_i e_i + lambda e_{-beta}"

    def labels(self) -> list[str]:
        return [c.label for c in self.coords]

    def to_dict(self) -> dict:
        return {
            "algebra": str(self.rs.algebra),
            "level": self.level,
            "dim": self.dim,
            "fixed_part": self.fixed_part,
            "coords": [c.to_dict() for c in self.coords],
        }


def make_phase_space(rs: RootSystem, level: int | None = None) -> PhaseSpace:
    """Coordinates of ``T^(level)`` in z-order: x_i, then x_{-gamma}, then y_gamma.

    ``level=None`` means the full space (level = height of the longest root).
    """
    m = rs.coxeter_height
    k = m if level is None else level
    if not 1 <= k <= m:
        raise ValueError(f"level must lie in [1, {m}] for {rs.algebra}, got {k}")
    coords = [CoordId(CoordKind.CARTAN_X, i) for i in range(rs.rank)]
    coords += [CoordId(CoordKind.LOWER_X, r) for r in rs.positives if height(r) <= k]
    coords += [CoordId(CoordKind.UPPER_Y, r) for r in rs.positives if height(r) >= m + 1 - k]
    return PhaseSpace(rs, k, tuple(coords))


def embed(sub: PhaseSpace, full: PhaseSpace, point: Sequence) -> list:
    """Extend a point of a sub-space by zeros on the coordinates it lacks."""
    zero = 0 * point[0] if len(point) else 0
    out = [zero] * full.dim
    for c, v in zip(sub.coords, point):
        out[full.position[c]] = v
    return out


def restrict(sub: PhaseSpace, full: PhaseSpace, vec: Sequence) -> list:
    return [vec[full.position[c]] for c in sub.coords]
