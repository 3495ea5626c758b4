"""Laurent polynomials in lambda with array-valued coefficients.

A value is stored as ``(low, coeffs)`` where ``coeffs[k]`` multiplies
``lambda^(low + k)``.  Coefficients may be scalars, vectors or matrices and
either exact (numpy object arrays of Fractions) or float.  Products widen the
window; nothing is truncated.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np


def _zeros(shape, dtype) -> np.ndarray:
    return np.zeros(shape, dtype=dtype)


def _dtype(*arrays) -> type:
    return object if any(a.dtype == object for a in arrays) else np.result_type(*arrays)


class LaurentPoly:
    """Laurent polynomial whose coefficients share one trailing shape (possibly scalar)."""

    __slots__ = ("low", "coeffs")

    def __init__(self, low: int, coeffs):
        c = np.asarray(coeffs)
        if c.ndim == 0:
            c = c.reshape(1)
        self.low = int(low)
        self.coeffs = c

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, value, shape=()) -> "LaurentPoly":
        c = np.empty((1,) + tuple(shape), dtype=object if isinstance(value, (Fraction, int)) else float)
        c[...] = value
        return cls(0, c)

    @classmethod
    def zero(cls, shape=(), dtype=object) -> "LaurentPoly":
        return cls(0, _zeros((1,) + tuple(shape), dtype))

    @classmethod
    def from_terms(cls, terms: dict, shape=(), dtype=object) -> "LaurentPoly":
        """``{power: coefficient}`` (coefficient arrays of the given shape)."""
        if not terms:
            return cls.zero(shape, dtype)
        lo, hi = min(terms), max(terms)
        c = _zeros((hi - lo + 1,) + tuple(shape), dtype)
        for p, v in terms.items():
            c[p - lo] = c[p - lo] + v
        return cls(lo, c)

    # shape and access ----------------------------------------------------
    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    @property
    def shape(self) -> tuple:
        return self.coeffs.shape[1:]

    @property
    def window(self) -> tuple[int, int]:
        return self.low, self.high

    def coeff(self, power: int):
        k = power - self.low
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        z = _zeros(self.shape, self.coeffs.dtype)
        return z if self.shape else z[()]

    def support(self, tol: float = 0.0) -> list[int]:
        """Powers whose coefficient is non-zero (|c| > tol for floats)."""
        out = []
        for k, c in enumerate(self.coeffs):
            arr = np.asarray(c)
            nz = np.any(arr != 0) if self.coeffs.dtype == object or tol == 0 else np.any(np.abs(arr) > tol)
            if nz:
                out.append(self.low + k)
        return out

    def terms(self) -> dict:
        return {p: self.coeff(p) for p in self.support()}

    def trimmed(self) -> "LaurentPoly":
        sup = self.support()
        if not sup:
            return type(self)(0, _zeros((1,) + self.shape, self.coeffs.dtype))
        lo, hi = sup[0], sup[-1]
        return type(self)(lo, self.coeffs[lo - self.low: hi - self.low + 1])

    def _aligned(self, other: "LaurentPoly"):
        lo, hi = min(self.low, other.low), max(self.high, other.high)
        shape = np.broadcast_shapes(self.shape, other.shape)
        dt = _dtype(self.coeffs, other.coeffs)

        def place(p: "LaurentPoly") -> np.ndarray:
            out = _zeros((hi - lo + 1,) + shape, dt)
            pad = (1,) * (len(shape) - len(p.shape))
            out[p.low - lo: p.high - lo + 1] = p.coeffs.reshape((len(p.coeffs),) + pad + p.shape)
            return out

        return lo, place(self), place(other)

    # arithmetic ------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly(0, np.asarray(other, dtype=object if isinstance(other, (Fraction, int)) else None).reshape((1,) + np.shape(other)))

    def __add__(self, other):
        other = self._coerce(other)
        lo, a, b = self._aligned(other)
        return type(self)(lo, a + b)

    __radd__ = __add__

    def __neg__(self):
        return type(self)(self.low, -self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def scale(self, s):
        return type(self)(self.low, self.coeffs * s)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        return type(self)(self.low + other.low, _convolve(self.coeffs, other.coeffs, np.multiply))

    def __rmul__(self, other):
        return self.scale(other)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``lambda^k``."""
        return type(self)(self.low + k, self.coeffs)

    def evaluate(self, lam):
        out = 0
        for k, c in enumerate(self.coeffs):
            out = out + c * lam ** (self.low + k)
        return out

    def derivative_map(self, fn):
        """Apply ``fn`` to every coefficient (used to lift linear maps)."""
        return LaurentPoly(self.low, np.array([fn(c) for c in self.coeffs]))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(window={self.window}, shape={self.shape})"


class LaurentMatrix(LaurentPoly):
    """Square matrix with Laurent polynomial entries."""

    __slots__ = ()

    @classmethod
    def from_terms(cls, terms: dict, n: int | None = None, dtype=object) -> "LaurentMatrix":
        if n is None:
            n = next(iter(terms.values())).shape[0]
        return super().from_terms(terms, (n, n), dtype)

    @property
    def n(self) -> int:
        return self.coeffs.shape[1]

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return LaurentMatrix(self.low + other.low, _convolve(self.coeffs, other.coeffs, np.matmul))

    def comm(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return self @ other - other @ self

    def trace(self) -> LaurentPoly:
        return LaurentPoly(self.low, np.trace(self.coeffs, axis1=1, axis2=2))

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix(self.low, np.transpose(self.coeffs, (0, 2, 1)))

    def part(self, keep) -> "LaurentMatrix":
        """Keep only coefficients for which ``keep(power)`` holds."""
        c = self.coeffs.copy()
        for k in range(len(c)):
            if not keep(self.low + k):
                c[k] = 0
        return LaurentMatrix(self.low, c)

    def astype(self, dtype) -> "LaurentMatrix":
        return LaurentMatrix(self.low, self.coeffs.astype(dtype))


def _convolve(a: np.ndarray, b: np.ndarray, op) -> np.ndarray:
    first = op(a[0], b[0])
    dt = object if (a.dtype == object or b.dtype == object) else np.asarray(first).dtype
    out = np.zeros((len(a) + len(b) - 1,) + np.shape(first), dtype=dt)
    for i in range(len(a)):
        ai = a[i]
        if a.dtype == object and not np.any(np.asarray(ai) != 0):
            continue
        for j in range(len(b)):
            out[i + j] = out[i + j] + op(ai, b[j])
    return out
