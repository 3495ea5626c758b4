"""Lax matrices, invariant families and flows for the classical types.

A point ``z`` of a phase space is turned into

    L(lambda) = lambda e_{-beta} + sum e_i + X + lambda^{-1} Y

with coordinates read through the trace form: ``x_i = tr(h_i X)``,
``x_{-a} = tr(e_a X)``, ``y_a = tr(e_{-a} Y)``.  The loop pairing is
``<A, B> = sum_k tr(A_k B_{-k})``, so every coordinate is ``<L, g_a>`` for a
fixed element ``g_a`` of non-negative degree, and the bracket of two
coordinates is the Lie-Poisson expression ``<L, [g_a, g_b]>``.  That route is
kept separate from the formula route in :mod:`bracket` so the two can be
compared.

Invariants are the coefficients ``e_k`` of ``det(mu - L)`` (and, for D, the
Pfaffian of ``J L``), computed by the Faddeev-LeVerrier recursion whose
matrices ``Q_k`` are also the gradients: ``d e_{k+1} = tr(Q_k dL)``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .bracket import StructureConstants, bracket_table, poisson_matrix, structure_constants
from .chevalley import ChevalleyBasis, UnsupportedTypeError, build_chevalley, comm
from .exact import exact_rank, inverse
from .laurent import LaurentMatrix, LaurentPoly
from .phasespace import CoordKind, PhaseSpace, make_phase_space
from .points import random_point
from .rootsys import RootSystem, build_root_system, height

__all__ = [
    "LaxConsistencyError",
    "LaxModel",
    "Generator",
    "InvariantFamily",
    "FamilyValues",
    "FlowResult",
    "lax_model",
    "assemble_L",
    "lax_rhs",
    "hamiltonian_gradient",
    "invariant_family",
    "evaluate_family",
    "charpoly_coefficients",
    "pfaffian",
    "check_restriction_structure",
    "check_involution",
    "check_casimirs",
    "check_independence",
    "check_liouville",
    "check_hamiltonian_consistency",
    "check_gradient_fd",
    "integrate_flow",
]


class LaxConsistencyError(RuntimeError):
    """The Lax right-hand side left the tangent space of the phase space."""


def _neg(r):
    return tuple(-a for a in r)


@dataclass(frozen=True)
class _Sparse:
    power: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray


def _sparse(power: int, mat: np.ndarray) -> _Sparse:
    r, c = np.nonzero(mat != 0)
    return _Sparse(power, r, c, np.array(list(mat[r, c]), dtype=object))


class LaxModel:
    """Matrix data attached to one phase space (exact and float variants)."""

    def __init__(self, space: PhaseSpace, cb: ChevalleyBasis | None = None):
        rs = space.rs
        if not rs.algebra.is_classical:
            raise UnsupportedTypeError(f"{rs.algebra} has no Lax realization here; use rank-check")
        self.space = space
        self.rs = rs
        self.cb = cb or build_chevalley(rs)
        cb = self.cb
        n = cb.size
        self.n = n
        dirs, grads = [], []
        ginv = cb.gram_inv
        for c in space.coords:
            if c.kind is CoordKind.CARTAN_X:
                i = c.index
                d = sum((ginv[j, i] * cb.h[j] for j in range(rs.rank)), np.zeros((n, n), dtype=object))
                dirs.append((0, d))
                grads.append((0, cb.h[i]))
            elif c.kind is CoordKind.LOWER_X:
                a = c.index
                dirs.append((0, cb.e[_neg(a)] / cb.pairing(a)))
                grads.append((0, cb.e[a]))
            else:
                a = c.index
                dirs.append((-1, cb.e[a] / cb.pairing(a)))
                grads.append((1, cb.e[_neg(a)]))
        self.directions = dirs
        self.duals = grads
        self.powers = np.array([p for p, _ in dirs])
        self.fixed = LaurentMatrix.from_terms({0: cb.e_sum, 1: cb.e[_neg(rs.longest)]}, n)
        self._stack = {p: (np.flatnonzero(self.powers == p), np.array([d for q, d in dirs if q == p], dtype=object).reshape(-1, n, n))
                       for p in (0, -1)}
        dual_powers = np.array([p for p, _ in grads])
        self._dual_stack = {p: (np.flatnonzero(dual_powers == p), np.array([g for q, g in grads if q == p], dtype=object).reshape(-1, n, n))
                            for p in (0, 1)}
        sp = [_sparse(p, d) for p, d in dirs]
        self._owner = np.concatenate([np.full(len(s.rows), a) for a, s in enumerate(sp)])
        self._rows = np.concatenate([s.rows for s in sp])
        self._cols = np.concatenate([s.cols for s in sp])
        self._vals = np.concatenate([s.vals for s in sp])
        self._fvals = self._vals.astype(float)

    @property
    def dim(self) -> int:
        return self.space.dim

    @cached_property
    def float_stack(self):
        return {p: (idx, st.astype(float)) for p, (idx, st) in self._stack.items()}

    @cached_property
    def float_dual_stack(self):
        return {p: (idx, st.astype(float)) for p, (idx, st) in self._dual_stack.items()}

    @cached_property
    def float_fixed(self) -> LaurentMatrix:
        return self.fixed.astype(float)

    # point <-> matrix ----------------------------------------------------
    def L(self, point) -> LaurentMatrix:
        point = np.asarray(point)
        if point.shape != (self.dim,):
            raise ValueError(f"point has shape {point.shape}, expected ({self.dim},)")
        exact = point.dtype == object
        stack = self._stack if exact else self.float_stack
        fixed = self.fixed if exact else self.float_fixed
        terms = {}
        for p, (idx, st) in stack.items():
            if len(idx):
                terms[p] = np.tensordot(point[idx], st, axes=1)
        return fixed + LaurentMatrix.from_terms(terms, self.n, dtype=object if exact else float)

    def coordinates(self, M: LaurentMatrix) -> np.ndarray:
        """``z_a = <M, g_a>`` for every coordinate of the space."""
        exact = M.coeffs.dtype == object
        stack = self._dual_stack if exact else self.float_dual_stack
        out = np.zeros(self.dim, dtype=object if exact else M.coeffs.dtype)
        for p, (idx, st) in stack.items():
            if len(idx):
                out[idx] = np.einsum("aij,ji->a", st, M.coeff(-p))
        return out

    def tangent(self, v) -> LaurentMatrix:
        """``sum v_a B_a`` (no affine part)."""
        v = np.asarray(v)
        exact = v.dtype == object
        stack = self._stack if exact else self.float_stack
        terms = {p: np.tensordot(v[idx], st, axes=1) for p, (idx, st) in stack.items() if len(idx)}
        return LaurentMatrix.from_terms(terms, self.n, dtype=object if exact else v.dtype)

    @cached_property
    def _dense(self):
        """Flattened float operators for the fast flow right-hand side."""
        n = self.n
        out = {}
        for p, (idx, st) in self.float_stack.items():
            out[("B", p)] = (idx, st.reshape(len(idx), n * n))
        for p, (idx, st) in self.float_dual_stack.items():
            out[("G", p)] = (idx, np.transpose(st, (0, 2, 1)).reshape(len(idx), n * n))
        A = self.float_fixed.coeff(1)
        B0 = self.float_fixed.coeff(0)
        return out, A, B0

    def fast_rhs(self, z: np.ndarray) -> np.ndarray:
        """Float-only ``lax_rhs`` without Laurent bookkeeping (no residual check)."""
        ops, A, B0 = self._dense
        n = self.n
        i0, S0 = ops[("B", 0)]
        i1, S1 = ops[("B", -1)]
        B = B0 + (z[i0] @ S0).reshape(n, n)
        C = (z[i1] @ S1).reshape(n, n) if len(i1) else np.zeros((n, n))
        Bl = np.tril(B, -1)
        # [L, L_-] with L = lam A + B + C / lam and L_- = Bl + C / lam
        M0 = A @ C - C @ A + B @ Bl - Bl @ B
        Mm1 = B @ C - C @ B + C @ Bl - Bl @ C
        out = np.empty(self.dim)
        g0, G0 = ops[("G", 0)]
        g1, G1 = ops[("G", 1)]
        out[g0] = G0 @ M0.ravel()
        if len(g1):
            out[g1] = G1 @ Mm1.ravel()
        return out

    def direction_traces(self, W: np.ndarray) -> np.ndarray:
        """``tr(W B_a)`` for every direction (ignoring lambda powers)."""
        exact = W.dtype == object
        vals = self._vals if exact else self._fvals
        contrib = W[self._cols, self._rows] * vals
        out = np.zeros(self.dim, dtype=object if exact else W.dtype)
        np.add.at(out, self._owner, contrib)
        return out

    def gradient_of_trace(self, Q: LaurentMatrix) -> LaurentPoly:
        """Gradient (as a vector-valued Laurent polynomial) of ``z -> tr(Q dL)``."""
        terms: dict[int, np.ndarray] = {}
        zero = 0 if Q.coeffs.dtype == object else 0.0
        for k, c in enumerate(Q.coeffs):
            v = self.direction_traces(c)
            for p in (0, -1):
                mask = self.powers == p
                if not mask.any():
                    continue
                w = np.where(mask, v, zero)
                key = Q.low + k + p
                terms[key] = terms[key] + w if key in terms else w
        dt = object if Q.coeffs.dtype == object else Q.coeffs.dtype
        return LaurentPoly.from_terms(terms, (self.dim,), dtype=dt)

    def lower(self, L: LaurentMatrix) -> LaurentMatrix:
        """``L_-``: the strictly lower part of the lambda^0 term plus all negative powers."""
        c = L.coeffs.copy()
        for k in range(len(c)):
            p = L.low + k
            if p > 0:
                c[k] = 0
            elif p == 0:
                c[k] = np.tril(c[k], -1)
        return LaurentMatrix(L.low, c)

    @cached_property
    def sc(self) -> StructureConstants:
        return structure_constants(self.rs, self.cb)

    @cached_property
    def table(self) -> dict:
        return bracket_table(self.rs, self.sc, self.space)

    def poisson(self, point) -> np.ndarray:
        return poisson_matrix(self.rs, self.sc, self.space, point, self.table).mat


@lru_cache(maxsize=None)
def _cached_model(alg: str, level: int | None) -> LaxModel:
    rs = build_root_system(alg)
    return LaxModel(make_phase_space(rs, level))


def lax_model(rs: RootSystem | str, level: int | None = None) -> LaxModel:
    name = rs if isinstance(rs, str) else str(rs.algebra)
    rs_ = build_root_system(name)
    lvl = None if level is None or level == rs_.coxeter_height else level
    return _cached_model(name, lvl)


def assemble_L(model: LaxModel, point) -> LaurentMatrix:
    return model.L(point)


def pair(A: LaurentMatrix, B: LaurentMatrix):
    """Loop pairing ``sum_k tr(A_k B_{-k})``."""
    out = 0
    for k in range(A.low, A.high + 1):
        out = out + np.einsum("ij,ji->", A.coeff(k), B.coeff(-k))
    return out


def _residual_norm(M: LaurentMatrix) -> float:
    if M.coeffs.dtype == object:
        return 0.0 if not np.any(M.coeffs != 0) else float(max(abs(x) for x in M.coeffs.ravel()))
    return float(np.max(np.abs(M.coeffs))) if M.coeffs.size else 0.0


def lax_rhs(model: LaxModel, point, check: bool = True, tol: float = 1e-9) -> np.ndarray:
    """Coordinates of ``[L, L_-]``; raises if the commutator leaves the space."""
    L = model.L(point)
    M = L @ model.lower(L) - model.lower(L) @ L
    zdot = model.coordinates(M)
    if check:
        res = M - model.tangent(zdot)
        norm = _residual_norm(res)
        scale = 1.0 if M.coeffs.dtype == object else tol * (1.0 + _residual_norm(M))
        if (M.coeffs.dtype == object and norm != 0) or (M.coeffs.dtype != object and norm > scale):
            raise LaxConsistencyError(f"[L, L_-] has a component of size {norm:.3g} outside the phase space")
    return zdot


def hamiltonian_gradient(model: LaxModel, point) -> np.ndarray:
    """Gradient of ``H = <L, L> / 2``: ``dH/dz_a = <L, B_a>``."""
    L = model.L(point)
    grad = model.direction_traces(L.coeff(0))
    # a direction with lambda^p pairs with the lambda^{-p} term of L
    low = model.direction_traces(L.coeff(1))
    return np.where(model.powers == -1, low, grad)


def hamiltonian(model: LaxModel, point):
    L = model.L(point)
    return pair(L, L) / 2


def lie_poisson_matrix(model: LaxModel, point) -> np.ndarray:
    """Independent route: ``{z_a, z_b}(L) = <L, [g_a, g_b]>``."""
    L = model.L(point)
    n = model.dim
    exact = L.coeffs.dtype == object
    out = np.zeros((n, n), dtype=object if exact else float)
    for a in range(n):
        pa, ga = model.duals[a]
        for b in range(a + 1, n):
            pb, gb = model.duals[b]
            c = comm(ga, gb)
            v = np.einsum("ij,ji->", L.coeff(-(pa + pb)), c)
            out[a, b], out[b, a] = v, -v
    return out


# ------------------------------------------------------------------------
# invariants


@dataclass(frozen=True)
class Generator:
    index: int  # 1-based position in the exponent order
    exponent: int
    degree: int
    kind: str  # "charpoly" or "pfaffian"
    k: int = 0  # which e_k for charpoly generators
    sign: int = 1

    @property
    def label(self) -> str:
        return f"P{self.index}" + (" (Pf)" if self.kind == "pfaffian" else f" (e_{self.k})")


@dataclass(frozen=True)
class InvariantFamily:
    rs: RootSystem
    generators: tuple[Generator, ...]

    @property
    def members(self) -> tuple[tuple[int, int], ...]:
        """``(j, i)`` with ``F_{j,i}`` the coefficient of ``lambda^{-j}`` in ``P_i``."""
        return tuple((j, g.index) for g in self.generators for j in range(g.exponent + 1))

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def casimirs(self) -> tuple[tuple[int, int], ...]:
        return tuple((g.exponent, g.index) for g in self.generators)

    def generator(self, i: int) -> Generator:
        return self.generators[i - 1]

    @staticmethod
    def label(j: int, i: int) -> str:
        return f"F_{{{j},{i}}}"


def invariant_family(rs: RootSystem | str) -> InvariantFamily:
    if isinstance(rs, str):
        rs = build_root_system(rs)
    fam, l = rs.algebra.family, rs.rank
    if fam == "A":
        gens = [Generator(i, i, i + 1, "charpoly", i + 1, (-1) ** (i + 1)) for i in range(1, l + 1)]
    elif fam in "BC":
        gens = [Generator(i, 2 * i - 1, 2 * i, "charpoly", 2 * i) for i in range(1, l + 1)]
    elif fam == "D":
        raw = [(2 * i - 1, 0, 2 * i, "charpoly") for i in range(1, l)] + [(l - 1, 1, l, "pfaffian")]
        raw.sort()
        gens = [Generator(idx, e, d, kind, d if kind == "charpoly" else 0) for idx, (e, _, d, kind) in enumerate(raw, 1)]
    else:
        raise UnsupportedTypeError(f"no invariant generators implemented for {rs.algebra}")
    if tuple(g.exponent for g in gens) != rs.exponents:
        raise AssertionError(f"generator degrees of {rs.algebra} do not match its exponents {rs.exponents}")
    return InvariantFamily(rs, tuple(gens))


@dataclass
class FamilyValues:
    family: InvariantFamily
    polys: list[LaurentPoly]  # P_i, in generator order
    grads: list[LaurentPoly] | None  # vector-valued gradients of P_i

    def value(self, j: int, i: int):
        return self.polys[i - 1].coeff(-j)

    def values(self) -> np.ndarray:
        return np.array([self.value(j, i) for j, i in self.family.members], dtype=object)

    def gradient(self, j: int, i: int) -> np.ndarray:
        if self.grads is None:
            raise ValueError("gradients were not computed")
        return self.grads[i - 1].coeff(-j)

    def jacobian(self, members=None) -> np.ndarray:
        members = self.family.members if members is None else members
        return np.array([list(self.gradient(j, i)) for j, i in members], dtype=self.grads[0].coeffs.dtype)


def _scalar_identity(p: LaurentPoly, n: int) -> LaurentMatrix:
    eye = np.eye(n, dtype=p.coeffs.dtype)
    return LaurentMatrix(p.low, p.coeffs[:, None, None] * eye)


def pfaffian(a: np.ndarray):
    """Pfaffian of a skew matrix by skew Gaussian elimination (exact or float)."""
    a = np.array(a, dtype=a.dtype, copy=True)
    n = a.shape[0]
    if n % 2:
        return 0 if a.dtype == object else 0.0
    exact = a.dtype == object
    pf = Fraction(1) if exact else 1.0
    for k in range(0, n - 1, 2):
        col = a[k + 1:, k]
        if exact:
            nz = np.flatnonzero(col != 0)
            if nz.size == 0:
                return Fraction(0)
            kp = k + 1 + int(nz[0])
        else:
            kp = k + 1 + int(np.argmax(np.abs(col)))
        if kp != k + 1:
            a[[k + 1, kp]] = a[[kp, k + 1]]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        piv = a[k, k + 1]
        if piv == 0:
            return Fraction(0) if exact else 0.0
        pf = pf * piv
        if k + 2 < n:
            tau = a[k, k + 2:] / piv
            a[k + 2:, k + 2:] = a[k + 2:, k + 2:] + np.outer(tau, a[k + 2:, k + 1]) - np.outer(a[k + 2:, k + 1], tau)
    return pf


def _pfaffian_gradient(a: np.ndarray, pf) -> np.ndarray:
    """Matrix ``W`` with ``dPf = tr(W dA)`` at the skew matrix ``a``."""
    n = a.shape[0]
    exact = a.dtype == object
    if pf != 0:
        inv = inverse(a) if exact else np.linalg.inv(a)
        return inv * pf / 2
    W = np.zeros((n, n), dtype=a.dtype)
    keep = np.arange(n)
    for i in range(n):
        for j in range(i + 1, n):
            idx = keep[(keep != i) & (keep != j)]
            minor = pfaffian(a[np.ix_(idx, idx)])
            c = (-1) ** (i + j + 1) * minor
            # dA_ij = -dA_ji, so split the weight over both entries
            W[j, i] = W[j, i] + c / 2
            W[i, j] = W[i, j] - c / 2
    return W


@lru_cache(maxsize=None)
def _vandermonde_inverse(l: int) -> tuple:
    samples = [Fraction(s) for s in range(1, 2 * l + 2)]
    V = [[s ** p for p in range(-l, l + 1)] for s in samples]
    return tuple(samples), inverse(V)


def _pfaffian_poly(model: LaxModel, L: LaurentMatrix, gradients: bool) -> tuple[LaurentPoly, LaurentPoly | None]:
    l = model.rs.rank
    J = model.cb.form
    exact = L.coeffs.dtype == object
    if exact:
        samples, Vinv = _vandermonde_inverse(l)
    else:
        N = 2 * l + 1
        samples = [np.exp(2j * np.pi * s / N) for s in range(N)]
        J = J.astype(float)
    vals, gvecs = [], []
    for s in samples:
        A = J @ L.evaluate(s)
        pf = pfaffian(A)
        vals.append(pf)
        if gradients:
            W = _pfaffian_gradient(A, pf) @ J
            g = model.direction_traces(W)
            scale = np.array([s ** int(p) for p in model.powers], dtype=object if exact else complex)
            gvecs.append(g * scale)
    if exact:
        coeffs = Vinv @ np.array(vals, dtype=object)
        gcoeffs = Vinv @ np.array(gvecs, dtype=object) if gradients else None
    else:
        N = len(samples)
        F = np.array([[s ** (-p) for s in samples] for p in range(-l, l + 1)]) / N
        coeffs = (F @ np.array(vals)).real
        gcoeffs = (F @ np.array(gvecs)).real if gradients else None
    poly = LaurentPoly(-l, coeffs)
    grad = LaurentPoly(-l, gcoeffs) if gradients else None
    return poly, grad


def _clear_denominators(L: LaurentMatrix) -> tuple[LaurentMatrix, int]:
    """``(D L, D)`` with ``D L`` holding Python ints, so products avoid Fraction overhead."""
    D = math.lcm(*(Fraction(x).denominator for x in L.coeffs.ravel()))
    to_int = np.frompyfunc(lambda x: int(Fraction(x) * D), 1, 1)
    return LaurentMatrix(L.low, to_int(L.coeffs)), D


def _faddeev_leverrier(model: LaxModel | None, L: LaurentMatrix, top: int, wanted=()):
    """``e_k`` and the gradients of the requested ``e_k`` via ``Q_k``, with ``de_k = tr(Q_k dL)``.

    Exact inputs run on ``D L`` in integers: ``e_k(D L) = D^k e_k(L)`` and
    ``Q_k(D L) = D^(k-1) Q_k(L)``, and every division by ``k`` is exact.
    """
    n = L.n
    exact = L.coeffs.dtype == object
    D = 1
    if exact:
        L, D = _clear_denominators(L)
    e: dict[int, LaurentPoly] = {}
    de: dict[int, LaurentPoly] = {}
    Q = LaurentMatrix(0, (np.eye(n, dtype=int).astype(object) if exact else np.eye(n))[None])
    for k in range(1, top + 1):
        if k in wanted:
            g = model.gradient_of_trace(Q)
            de[k] = g.scale(Fraction(1, D ** (k - 1))) if exact else g
        LQ = L @ Q
        tr = LQ.trace()
        if exact:
            ek = LaurentPoly(tr.low, np.array([c // k for c in tr.coeffs], dtype=object))
            if any(c % k for c in tr.coeffs):
                raise LaxConsistencyError(f"trace of L Q_{k} is not divisible by {k}")
            e[k] = ek.scale(Fraction(1, D ** k))
        else:
            ek = tr.scale(1.0 / k)
            e[k] = ek
        if k < top:
            Q = _scalar_identity(ek, n) - LQ
    return e, de


def charpoly_coefficients(L: LaurentMatrix, top: int | None = None) -> dict[int, LaurentPoly]:
    """``e_k`` with ``det(mu - L) = sum_k (-1)^k e_k mu^{n-k}``, for k = 1..top."""
    e, _ = _faddeev_leverrier(None, L, top or L.n)
    return e


def evaluate_family(model: LaxModel, point, gradients: bool = True, family: InvariantFamily | None = None) -> FamilyValues:
    family = family or invariant_family(model.rs)
    L = model.L(point)
    top = max(g.k for g in family.generators)
    wanted = {g.k for g in family.generators if g.kind == "charpoly"} if gradients else set()
    e, de = _faddeev_leverrier(model, L, top, wanted)
    polys, grads = [], []
    for g in family.generators:
        if g.kind == "charpoly":
            polys.append(e[g.k].scale(g.sign))
            grads.append(de[g.k].scale(g.sign) if gradients else None)
        else:
            p, d = _pfaffian_poly(model, L, gradients)
            polys.append(p)
            grads.append(d)
    return FamilyValues(family, polys, grads if gradients else None)


# ------------------------------------------------------------------------
# special points


def coordinates_of(model: LaxModel, L: LaurentMatrix) -> np.ndarray:
    return model.coordinates(L)


def point_L1(model: LaxModel) -> np.ndarray:
    """``lambda e_{-beta} + h + e + lambda^{-1} e`` with ``alpha_i(h) = 2``."""
    cb = model.cb
    L = LaurentMatrix.from_terms({-1: cb.e_sum, 0: cb.principal_h}, model.n)
    return model.coordinates(L)


def point_L0(model: LaxModel, b) -> np.ndarray:
    """All coordinates zero except ``y_{alpha_i} = b_i``."""
    z = np.array([Fraction(0)] * model.dim, dtype=object)
    for i, bi in enumerate(b):
        cid = model.space.y(model.rs.simple_root(i))
        z[model.space.position[cid]] = Fraction(bi)
    return z


# ------------------------------------------------------------------------
# checks


def _max_abs(values) -> float:
    vals = [abs(float(v)) for v in np.asarray(values, dtype=object).ravel()]
    return max(vals) if vals else 0.0


def check_restriction_structure(rs: RootSystem | str, trials: int = 50, seed: int = 0) -> dict:
    """lambda-support of each P_i within [-m_i, 1]; the lambda^{+1} term is constant, non-zero only for i = l."""
    model = lax_model(rs)
    family = invariant_family(model.rs)
    rng = random.Random(seed)
    l = model.rs.rank
    tops: dict[int, set] = {g.index: set() for g in family.generators}
    bad_support = []
    for _ in range(trials):
        fv = evaluate_family(model, random_point(model.dim, rng), gradients=False, family=family)
        for g, P in zip(family.generators, fv.polys):
            sup = P.support()
            if sup and (sup[0] < -g.exponent or sup[-1] > 1):
                bad_support.append({"i": g.index, "support": [sup[0], sup[-1]]})
            tops[g.index].add(P.coeff(1))
    top_ok = all(tops[i] == {0} for i in tops if i != l) and len(tops[l]) == 1 and 0 not in tops[l]
    const = next(iter(tops[l])) if len(tops[l]) == 1 else None
    return {
        "name": "restriction_structure",
        "algebra": str(model.rs.algebra),
        "trials": trials,
        "bad_support": bad_support[:10],
        "leading_constant": str(const) if const is not None else None,
        "pass": not bad_support and top_ok,
    }


def _family_jacobian(model: LaxModel, point, family, members=None) -> np.ndarray:
    return evaluate_family(model, point, True, family).jacobian(members)


def check_involution(rs: RootSystem | str, trials: int = 20, seed: int = 0) -> dict:
    model = lax_model(rs)
    family = invariant_family(model.rs)
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(trials):
        z = random_point(model.dim, rng)
        Jac = _family_jacobian(model, z, family)
        B = Jac @ model.poisson(z) @ Jac.T
        worst = max(worst, _max_abs(B))
    return {
        "name": "involution",
        "algebra": str(model.rs.algebra),
        "trials": trials,
        "pairs": family.size * (family.size - 1) // 2,
        "max_abs_bracket": worst,
        "pass": worst == 0.0,
    }


MAX_RESAMPLES = 3


def _generic_sample(model: LaxModel, rng: random.Random, measure, expected: int, max_resamples: int = MAX_RESAMPLES):
    """Draw a point; on a rank deficit redraw (the deficit locus is a proper subvariety)."""
    tries = 0
    while True:
        z = random_point(model.dim, rng)
        r = measure(z)
        if r >= expected or tries >= max_resamples:
            return z, r, tries
        tries += 1


def check_casimirs(rs: RootSystem | str, trials: int = 20, seed: int = 0) -> dict:
    model = lax_model(rs)
    family = invariant_family(model.rs)
    rng = random.Random(seed)
    l = model.rs.rank
    worst, ranks, resampled = 0.0, [], 0
    for _ in range(trials):
        z = random_point(model.dim, rng)
        Jc = _family_jacobian(model, z, family, family.casimirs)
        worst = max(worst, _max_abs(Jc @ model.poisson(z)))
        r = exact_rank(Jc)
        if r < l:
            _, r, tries = _generic_sample(model, rng, lambda p: exact_rank(_family_jacobian(model, p, family, family.casimirs)), l)
            resampled += 1 + tries
        ranks.append(r)
    return {
        "name": "casimirs",
        "algebra": str(model.rs.algebra),
        "casimirs": [InvariantFamily.label(j, i) for j, i in family.casimirs],
        "max_abs_bracket": worst,
        "min_jacobian_rank": min(ranks),
        "expected_rank": l,
        "resampled": resampled,
        "pass": worst == 0.0 and min(ranks) == l,
    }


def check_independence(rs: RootSystem | str, points: int = 10, seed: int = 0) -> dict:
    model = lax_model(rs)
    family = invariant_family(model.rs)
    rng = random.Random(seed)
    expected = family.size
    r1 = exact_rank(_family_jacobian(model, point_L1(model), family))
    ranks, resampled = [], 0
    measure = lambda p: exact_rank(_family_jacobian(model, p, family))
    for _ in range(points):
        _, r, tries = _generic_sample(model, rng, measure, expected)
        ranks.append(r)
        resampled += tries
    return {
        "name": "independence",
        "algebra": str(model.rs.algebra),
        "rank_at_L1": r1,
        "ranks_random": ranks,
        "resampled": resampled,
        "expected": expected,
        "pass": r1 == expected and all(r == expected for r in ranks),
    }


def check_liouville(rs: RootSystem | str, points: int = 5, seed: int = 0) -> dict:
    model = lax_model(rs)
    family = invariant_family(model.rs)
    rng = random.Random(seed)
    generic = model.dim - model.rs.rank
    ranks, resampled = [], 0
    for _ in range(points):
        _, r, tries = _generic_sample(model, rng, lambda p: exact_rank(model.poisson(p)), generic)
        ranks.append(r)
        resampled += tries
    lhs = [model.dim - r // 2 for r in ranks]
    return {
        "name": "liouville",
        "algebra": str(model.rs.algebra),
        "dim": model.dim,
        "poisson_ranks": ranks,
        "family_size": family.size,
        "resampled": resampled,
        "pass": all(r % 2 == 0 for r in ranks) and all(x == family.size for x in lhs),
    }


def check_hamiltonian_consistency(rs: RootSystem | str, trials: int = 20, seed: int = 0, level: int | None = None) -> dict:
    """``Pi . dH`` against the coordinates of ``[L, L_-]``."""
    model = lax_model(rs, level)
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(trials):
        z = random_point(model.dim, rng)
        lhs = model.poisson(z) @ hamiltonian_gradient(model, z)
        rhs = lax_rhs(model, z)
        worst = max(worst, _max_abs(lhs - rhs))
    return {
        "name": "hamiltonian_consistency",
        "algebra": str(model.rs.algebra),
        "level": model.space.level,
        "trials": trials,
        "max_abs_difference": worst,
        "pass": worst == 0.0,
    }


def check_gradient_fd(rs: RootSystem | str, trials: int = 5, seed: int = 0, h: float = 1e-6, rtol: float = 1e-5) -> dict:
    """Exact gradients (in floats) against central differences of the float invariants."""
    model = lax_model(rs)
    family = invariant_family(model.rs)
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(trials):
        z = np.array([float(x) for x in random_point(model.dim, rng)])
        Jac = np.array(_family_jacobian(model, z, family), dtype=float)
        fd = np.empty_like(Jac)
        for a in range(model.dim):
            e = np.zeros(model.dim)
            e[a] = h
            up = _float_invariants(model, z + e, family)
            dn = _float_invariants(model, z - e, family)
            fd[:, a] = (up - dn) / (2 * h)
        worst = max(worst, float(np.max(np.abs(fd - Jac) / (1 + np.abs(Jac)))))
    return {
        "name": "gradient_fd",
        "algebra": str(model.rs.algebra),
        "trials": trials,
        "step": h,
        "max_rel_error": worst,
        "tolerance": rtol,
        "pass": worst < rtol,
    }


# ------------------------------------------------------------------------
# flows


@dataclass
class FlowResult:
    times: np.ndarray
    states: np.ndarray
    drift: np.ndarray  # per recorded time, max relative invariant drift
    initial_invariants: np.ndarray
    max_drift: float
    aborted: bool = False
    message: str = ""
    members: tuple = field(default_factory=tuple)

    def to_csv(self, path, labels) -> None:
        import csv

        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", *labels, "max_rel_drift"])
            for t, s, d in zip(self.times, self.states, self.drift):
                w.writerow([f"{t:.10g}", *(f"{x:.17g}" for x in s), f"{d:.6e}"])


def _float_invariants(model: LaxModel, z, family) -> np.ndarray:
    fv = evaluate_family(model, z, gradients=False, family=family)
    return np.array([float(v) for v in fv.values()])


def integrate_flow(
    model: LaxModel, point0, t_end: float, dt: float, record_every: int | None = None, blowup: float = 1e12
) -> FlowResult:
    """Classical RK4 on ``z' = coordinates of [L, L_-]`` in floating point."""
    if dt <= 0 or t_end < 0:
        raise ValueError("dt must be positive and t_end non-negative")
    family = invariant_family(model.rs)
    z = np.array([float(x) for x in point0])
    steps = int(round(t_end / dt))
    record_every = record_every or max(1, steps // 1000)
    f = model.fast_rhs
    inv0 = _float_invariants(model, z, family)
    times, states, drift = [0.0], [z.copy()], [0.0]
    aborted, msg = False, ""
    for step in range(1, steps + 1):
        k1 = f(z)
        k2 = f(z + dt / 2 * k1)
        k3 = f(z + dt / 2 * k2)
        k4 = f(z + dt * k3)
        z = z + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(z)) or np.linalg.norm(z) > blowup:
            aborted, msg = True, f"trajectory left the ball of radius {blowup:g} at t = {step * dt:.6g}"
            break
        if step % record_every == 0 or step == steps:
            inv = _float_invariants(model, z, family)
            times.append(step * dt)
            states.append(z.copy())
            drift.append(float(np.max(np.abs(inv - inv0) / (1 + np.abs(inv0)))))
    drift = np.array(drift)
    return FlowResult(np.array(times), np.array(states), drift, inv0, float(drift.max()), aborted, msg, family.members)


def toda_initial_point(model: LaxModel, scale: float = 1.0, seed: int = 0) -> np.ndarray:
    """Real point with positive couplings on the simple-root and longest-root coordinates."""
    rng = random.Random(seed)
    z = np.zeros(model.dim)
    for a, c in enumerate(model.space.coords):
        if c.kind is CoordKind.CARTAN_X:
            z[a] = scale * rng.uniform(-1, 1)
        elif c.kind is CoordKind.LOWER_X and height(c.index) == 1:
            z[a] = scale * rng.uniform(0.5, 1.5)
        elif c.kind is CoordKind.UPPER_Y and tuple(c.index) == model.rs.longest:
            z[a] = scale * rng.uniform(0.5, 1.5)
    return z
