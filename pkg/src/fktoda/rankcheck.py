"""Exact rank certification of the Poisson structure at the point ``L_0``.

At ``L_0 = sum (1 + b_i/lambda) e_i + lambda e_{-beta}`` the Poisson matrix in
z-order has the block form ``M = [[0, -Lambda^T], [Lambda, 0]]`` with
``Lambda = diag(Lambda_0, ..., Lambda_{m-1})`` followed by one zero column.
``Lambda_0 = diag(b) C`` and ``Lambda_k`` (rows: roots of height k, columns:
roots of height k+1) carries ``b_p`` wherever the two roots differ by the
simple root ``alpha_p``.  Entries are sign-free and unweighted;
the true bracket at ``L_0`` carries structure-constant weights instead.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import exact_det, exact_rank
from .rootsys import RootSystem, build_root_system, height

__all__ = [
    "GenericParams",
    "LambdaBlock",
    "exact_rank",
    "lambda0",
    "lambda_block",
    "assemble_poisson_at_L0",
    "poisson_rank_at_L0",
    "verify_block_ranks",
    "certify",
    "signed_block_ranks",
    "FULL_MATRIX",
]

FULL_MATRIX = (
    [f"A{n}" for n in range(1, 9)]
    + [f"B{n}" for n in range(2, 9)]
    + [f"C{n}" for n in range(2, 9)]
    + [f"D{n}" for n in range(3, 9)]
    + ["G2", "F4", "E6", "E7", "E8"]
)


def _primes(count: int, start: int = 0) -> list[int]:
    out, n = [], 2
    while len(out) < count + start:
        if all(n % p for p in out if p * p <= n):
            out.append(n)
        n += 1
    return out[start:]


@dataclass(frozen=True)
class GenericParams:
    b: tuple[Fraction, ...]

    def __post_init__(self):
        if any(Fraction(x) == 0 for x in self.b):
            raise ValueError(f"all b_i must be non-zero, got {list(self.b)}")
        object.__setattr__(self, "b", tuple(Fraction(x) for x in self.b))

    @classmethod
    def primes(cls, rank: int, shift: int = 0) -> "GenericParams":
        """First ``rank`` primes; ``shift`` skips that many primes (second assignment)."""
        return cls(tuple(_primes(rank, shift)))


@dataclass(frozen=True)
class LambdaBlock:
    k: int
    rows: tuple  # roots of height k
    cols: tuple  # roots of height k + 1
    mat: np.ndarray  # d_k x d_{k+1}, Fraction entries

    @property
    def shape(self) -> tuple[int, int]:
        return self.mat.shape


def _params(rs: RootSystem, b) -> GenericParams:
    if b is None:
        return GenericParams.primes(rs.rank)
    if not isinstance(b, GenericParams):
        b = GenericParams(tuple(b))
    if len(b.b) != rs.rank:
        raise ValueError(f"need {rs.rank} parameters, got {len(b.b)}")
    return b


def lambda0(rs: RootSystem, b=None) -> np.ndarray:
    """``diag(b) . C``: entry (j, i) is ``{y_{alpha_j}, x_i}`` at L_0."""
    b = _params(rs, b).b
    n = rs.rank
    return np.array([[b[j] * rs.cartan[j][i] for i in range(n)] for j in range(n)], dtype=object)


def lambda_block(rs: RootSystem, k: int, b=None) -> LambdaBlock:
    m = rs.coxeter_height
    if not 1 <= k <= m - 1:
        raise ValueError(f"k must lie in [1, {m - 1}] for {rs.algebra}, got {k}")
    b = _params(rs, b).b
    rows, cols = rs.level(k), rs.level(k + 1)
    mat = np.full((len(rows), len(cols)), Fraction(0), dtype=object)
    for i, g in enumerate(rows):
        for j, beta in enumerate(cols):
            diff = [x - y for x, y in zip(beta, g)]
            if sum(diff) == 1 and min(diff) == 0:
                p = diff.index(1)
                mat[i, j] = b[p]
    return LambdaBlock(k, rows, cols, mat)


def assemble_poisson_at_L0(rs: RootSystem, b=None) -> np.ndarray:
    """Full ``dim g`` square matrix ``[[0, -Lambda^T], [Lambda, 0]]`` in z-order."""
    N, n = rs.n_positive, rs.rank
    big = np.full((N, N + n), Fraction(0), dtype=object)
    # rows: y_gamma in root order; columns: x_1..x_l, x_{-gamma} in root order
    big[0:n, 0:n] = lambda0(rs, b)
    row_off = n
    col_off = n
    for k in range(1, rs.coxeter_height):
        blk = lambda_block(rs, k, b)
        dk, dk1 = blk.shape
        # rows are y of height k+1, columns x_{-gamma} of height k
        big[row_off:row_off + dk1, col_off:col_off + dk] = blk.mat.T
        row_off += dk1
        col_off += dk
    dim = rs.dim
    M = np.full((dim, dim), Fraction(0), dtype=object)
    M[:N + n, N + n:] = -big.T
    M[N + n:, :N + n] = big
    return M


def poisson_rank_at_L0(rs: RootSystem, b=None) -> tuple[int, int, bool]:
    M = assemble_poisson_at_L0(rs, b)
    r = exact_rank(M)
    expected = rs.dim - rs.rank
    return r, expected, r == expected


def verify_block_ranks(rs: RootSystem, b=None) -> dict:
    """Per-level ranks; ``pass`` is the overall ``OK``."""
    blocks = [{"k": 0, "d_k": rs.rank, "d_k1": rs.rank, "rank": exact_rank(lambda0(rs, b))}]
    for k in range(1, rs.coxeter_height):
        blk = lambda_block(rs, k, b)
        blocks.append({"k": k, "d_k": blk.shape[0], "d_k1": blk.shape[1], "rank": exact_rank(blk.mat)})
    for row in blocks:
        row["pass"] = row["rank"] == row["d_k1"]
    return {"blocks": blocks, "pass": all(row["pass"] for row in blocks)}


def square_block_determinant(blk: LambdaBlock):
    if blk.shape[0] != blk.shape[1]:
        raise ValueError(f"block k={blk.k} is {blk.shape}, not square")
    return exact_det(blk.mat)


def certify(rs: RootSystem | str) -> dict:
    """Run both prime assignments and build the JSON report."""
    if isinstance(rs, str):
        rs = build_root_system(rs)
    t0 = time.perf_counter()
    runs = []
    assignments = [("primes", GenericParams.primes(rs.rank)), ("shifted_primes", GenericParams.primes(rs.rank, rs.rank))]
    for name, b in assignments:
        blocks = verify_block_ranks(rs, b)
        m_rank, expected, ok = poisson_rank_at_L0(rs, b)
        runs.append({"assignment": name, "b": [int(x) for x in b.b], "blocks": blocks["blocks"],
                     "m_rank": m_rank, "expected": expected, "pass": blocks["pass"] and ok})
    first = runs[0]
    return {
        "algebra": str(rs.algebra),
        "note": rs.algebra.note,
        "blocks": first["blocks"],
        "m_rank": first["m_rank"],
        "expected": first["expected"],
        "runs": runs,
        "pass": all(r["pass"] for r in runs),
        "seconds": time.perf_counter() - t0,
    }


def levels_summary(rs: RootSystem) -> list[tuple[int, int]]:
    return [(k, sum(1 for r in rs.positives if height(r) == k)) for k in range(1, rs.coxeter_height + 1)]


def signed_block_ranks(rs: RootSystem | str, seed: int, b=None) -> dict:
    """Block ranks after flipping the sign of each non-zero entry at random.

    A robustness probe, not part of the certificate: sign-free entries stand in
    for structure constants that really do carry signs, and some random sign
    patterns lose rank (``deficient`` lists the levels that do).
    """
    if isinstance(rs, str):
        rs = build_root_system(rs)
    rng = random.Random(seed)
    flip = np.frompyfunc(lambda x: -x if x != 0 and rng.random() < 0.5 else x, 1, 1)
    blocks = []
    for k in range(1, rs.coxeter_height):
        blk = lambda_block(rs, k, b)
        r = exact_rank(flip(blk.mat))
        blocks.append({"k": k, "d_k1": blk.shape[1], "rank": r})
    deficient = [row["k"] for row in blocks if row["rank"] < row["d_k1"]]
    return {"algebra": str(rs.algebra), "seed": seed, "blocks": blocks, "deficient": deficient}
