"""Intermediate phase spaces ``T^(k)`` and the restricted invariant families.

For ``1 <= k <= m_l`` the candidate family keeps ``F_{j,i}`` with
``j <= floor(k (m_i + 1) / (m_l + 1))``.  Two lower bounds on ``j`` are
supported: ``j >= 0`` (the indexing of the full family, default) and ``j >= 1``.
Every check is a finding about one case, reported as CONSISTENT or
INCONSISTENT; nothing here proves the integrability statement.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import exact_rank
from .laurent import LaurentMatrix
from .lax import (
    InvariantFamily,
    LaxModel,
    evaluate_family,
    invariant_family,
    lax_model,
)
from .phasespace import embed, restrict
from .points import random_point
from .rankcheck import _primes
from .rootsys import RootSystem, build_root_system

CONVENTIONS = ("j>=0", "j>=1")


@dataclass(frozen=True)
class TkFamily:
    rs: RootSystem
    k: int
    convention: str
    indices: tuple[tuple[int, int], ...]  # (j, i)

    @property
    def size(self) -> int:
        return len(self.indices)

    @property
    def top(self) -> dict[int, int]:
        """Largest admissible j for every generator index i."""
        return {i: bound(self.rs, self.k, i) for i in range(1, self.rs.rank + 1)}

    def labels(self) -> list[str]:
        return [InvariantFamily.label(j, i) for j, i in self.indices]


def bound(rs: RootSystem, k: int, i: int) -> int:
    m_i = rs.exponents[i - 1]
    return k * (m_i + 1) // (rs.coxeter_height + 1)


def tk_family(rs: RootSystem | str, k: int, convention: str = "j>=0") -> TkFamily:
    if isinstance(rs, str):
        rs = build_root_system(rs)
    invariant_family(rs)  # rejects exceptional types
    m = rs.coxeter_height
    if not 1 <= k <= m:
        raise ValueError(f"k must lie in [1, {m}] for {rs.algebra}, got {k}")
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    lo = 0 if convention == "j>=0" else 1
    idx = tuple((j, i) for i in range(1, rs.rank + 1) for j in range(lo, bound(rs, k, i) + 1))
    return TkFamily(rs, k, convention, idx)


def special_point(model: LaxModel, b=None, a=None, c=None) -> np.ndarray:
    """``lambda e_{-beta} + e + sum b_i h_i + sum a_i e_{-gamma_i} + lambda^{-1} sum c_i e_{eta_i}``.

    ``gamma`` runs over roots of height k and ``eta`` over roots of height
    ``m_l + 1 - k``; defaults use consecutive primes.
    """
    rs, k = model.rs, model.space.level
    gam = rs.level(k)
    eta = rs.level(rs.coxeter_height + 1 - k)
    pr = _primes(rs.rank + len(gam) + len(eta))
    b = b or pr[: rs.rank]
    a = a or pr[rs.rank: rs.rank + len(gam)]
    c = c or pr[rs.rank + len(gam):]
    cb = model.cb
    n = cb.size
    X = sum((Fraction(bi) * cb.h[i] for i, bi in enumerate(b)), np.zeros((n, n), dtype=object))
    X = X + sum((Fraction(ai) * cb.e[tuple(-t for t in g)] for ai, g in zip(a, gam)), np.zeros((n, n), dtype=object))
    Y = sum((Fraction(ci) * cb.e[tuple(g)] for ci, g in zip(c, eta)), np.zeros((n, n), dtype=object))
    return model.coordinates(LaurentMatrix.from_terms({0: X, -1: Y}, n))


def tk_check(rs: RootSystem | str, k: int, trials: int = 3, seed: int = 0, special: bool = True) -> dict:
    """Independence, Poisson rank, Casimirs and Liouville count on ``T^(k)`` under both conventions.

    Members whose gradient vanishes at every sample are constant on ``T^(k)``;
    they are listed and left out of the reduced family on which the verdict is
    based.  Generic ranks are the maxima over the sample points, which are
    drawn off the coordinate hyperplanes.
    """
    if isinstance(rs, str):
        rs = build_root_system(rs)
    t0 = time.perf_counter()
    model = lax_model(rs, k)
    full = invariant_family(rs).members
    pos = {m: r for r, m in enumerate(full)}
    rng = random.Random(seed)
    dim = model.dim
    samples = []
    for _ in range(trials):
        z = random_point(dim, rng, nonzero=True)
        samples.append((evaluate_family(model, z, gradients=True).jacobian(full), model.poisson(z)))
    poisson_ranks = [exact_rank(P) for _, P in samples]
    prank = max(poisson_ranks)
    out = {
        "algebra": str(rs.algebra),
        "k": k,
        "dim": dim,
        "poisson_ranks": poisson_ranks,
        "poisson_rank": prank,
        "liouville_target": dim - prank // 2,
        "span_rank": max(exact_rank(J) for J, _ in samples),
        "conventions": {},
    }
    for cv in CONVENTIONS:
        fam = tk_family(rs, k, cv)
        constant = [m for m in fam.indices if all(not np.any(J[pos[m]] != 0) for J, _ in samples)]
        reduced = [m for m in fam.indices if m not in constant]
        rows = [pos[m] for m in reduced]
        indep = max((exact_rank(J[rows]) for J, _ in samples), default=0) if rows else 0
        casimirs = [m for m in reduced if all(not np.any(J[pos[m]] @ P != 0) for J, P in samples)]
        liouville = len(reduced) == dim - prank // 2
        out["conventions"][cv] = {
            "size": fam.size,
            "indices": [list(m) for m in fam.indices],
            "constant": [InvariantFamily.label(j, i) for j, i in constant],
            "reduced_size": len(reduced),
            "independence_rank": indep,
            "independent": indep == len(reduced),
            "casimirs": [list(m) for m in casimirs],
            "casimir_labels": [InvariantFamily.label(j, i) for j, i in casimirs],
            "liouville_pass": liouville,
            "verdict": "CONSISTENT" if indep == len(reduced) and liouville else "INCONSISTENT",
        }
    if special:
        z = special_point(model)
        J = evaluate_family(model, z, gradients=True).jacobian(full)
        rows = [pos[m] for m in tk_family(rs, k).indices]
        out["special_point"] = {
            "independence_rank": exact_rank(J[rows]),
            "poisson_rank": exact_rank(model.poisson(z)),
        }
    out["seconds"] = time.perf_counter() - t0
    return out


def restriction_matches_full(rs: RootSystem | str, k: int, seed: int = 0) -> dict:
    """Restricted gradients against sub-vectors of full gradients at the embedded point."""
    if isinstance(rs, str):
        rs = build_root_system(rs)
    sub = lax_model(rs, k)
    full = lax_model(rs)
    z = random_point(sub.dim, random.Random(seed))
    big = np.array(embed(sub.space, full.space, list(z)), dtype=object)
    fs = evaluate_family(sub, z)
    ff = evaluate_family(full, big)
    Js = fs.jacobian()
    Jf = ff.jacobian()
    Jf_sub = np.array([restrict(sub.space, full.space, list(row)) for row in Jf], dtype=object)
    P_full = full.poisson(big)
    idx = [full.space.position[c] for c in sub.space.coords]
    outside = [a for a in range(full.dim) if a not in set(idx)]
    tangent = not np.any(P_full[np.ix_(outside, idx)] != 0) if outside else True
    return {
        "values_match": bool(np.all(fs.values() == ff.values())),
        "gradients_match": bool(np.all(Js == Jf_sub)),
        "poisson_submatrix": bool(np.all(sub.poisson(z) == P_full[np.ix_(idx, idx)])),
        "tangent": bool(tangent),
    }


def submanifold_check(rs: RootSystem | str, k: int) -> dict:
    """Brackets between a ``T^(k)`` coordinate and an outside one expand only in outside coordinates.

    Those vanish on ``T^(k)``, so Hamiltonian fields of ``T^(k)`` coordinates are tangent to it.
    """
    if isinstance(rs, str):
        rs = build_root_system(rs)
    sub = lax_model(rs, k).space
    full = lax_model(rs)
    inside = {full.space.position[c] for c in sub.coords}
    offending = []
    for (a, b), terms in full.table.items():
        if (a in inside) == (b in inside):
            continue
        hits = [pos for _, pos in terms if pos in inside]
        if hits:
            cs = full.space.coords
            offending.append([cs[a].label, cs[b].label])
    return {"k": k, "pairs_checked": len(inside) * (full.dim - len(inside)), "offending": offending[:10], "pass": not offending}


def conjecture_table(cases, trials: int = 3, seed: int = 0) -> list[dict]:
    """Run ``tk_check`` for every (algebra, k) pair; ``cases`` is an iterable of names."""
    out = []
    for name in cases:
        rs = build_root_system(name)
        for k in range(1, rs.coxeter_height + 1):
            out.append(tk_check(rs, k, trials, seed, special=False))
    return out
