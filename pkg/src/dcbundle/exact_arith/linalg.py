"""2x2 matrices over an exact field and rational nullspaces."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .poly import UniPoly
from .ratfunc import RatFunc


class SingularMatrixError(ZeroDivisionError, ValueError):
    """Raised when a 2x2 matrix has zero determinant."""


class Mat2:
    """Immutable 2x2 matrix whose entries share one field type (RatFunc, ProjFunc, ...)."""

    __slots__ = ("e11", "e12", "e21", "e22")

    def __init__(self, e11, e12, e21, e22):
        object.__setattr__(self, "e11", e11)
        object.__setattr__(self, "e12", e12)
        object.__setattr__(self, "e21", e21)
        object.__setattr__(self, "e22", e22)

    def __setattr__(self, name, value):
        raise AttributeError("Mat2 is immutable")

    def __reduce__(self):
        return (Mat2, self.entries())

    @classmethod
    def from_rows(cls, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls, one=None) -> "Mat2":
        one = RatFunc(1) if one is None else one
        zero = one - one
        return cls(one, zero, zero, one)

    @classmethod
    def diag(cls, a, d) -> "Mat2":
        return cls(a, a - a, d - d, d)

    @classmethod
    def swap(cls, one=None) -> "Mat2":
        one = RatFunc(1) if one is None else one
        zero = one - one
        return cls(zero, one, one, zero)

    def entries(self) -> tuple:
        return (self.e11, self.e12, self.e21, self.e22)

    def rows(self) -> tuple:
        return ((self.e11, self.e12), (self.e21, self.e22))

    def map(self, fn: Callable) -> "Mat2":
        return Mat2(*(fn(e) for e in self.entries()))

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(*(a + b for a, b in zip(self.entries(), other.entries())))

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(*(a - b for a, b in zip(self.entries(), other.entries())))

    def __neg__(self) -> "Mat2":
        return self.map(lambda e: -e)

    def __mul__(self, other):
        if isinstance(other, Mat2):
            a, b, c, d = self.entries()
            p, q, r, s = other.entries()
            return Mat2(a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)
        return self.map(lambda e: e * other)

    def __rmul__(self, scalar):
        return self.map(lambda e: scalar * e)

    def apply(self, vec: Sequence) -> tuple:
        return (self.e11 * vec[0] + self.e12 * vec[1], self.e21 * vec[0] + self.e22 * vec[1])

    def __pow__(self, n: int) -> "Mat2":
        if n < 0:
            return self.inverse() ** (-n)
        result = Mat2.identity(_one_like(self.e11))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def det(self):
        return self.e11 * self.e22 - self.e12 * self.e21

    def trace(self):
        return self.e11 + self.e22

    def inverse(self) -> "Mat2":
        dt = self.det()
        if dt == 0:
            raise SingularMatrixError("matrix not invertible over the function field")
        inv = 1 / dt
        return Mat2(self.e22 * inv, -self.e12 * inv, -self.e21 * inv, self.e11 * inv)

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries())

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return all(a == b for a, b in zip(self.entries(), other.entries()))

    def __hash__(self):
        return hash(self.entries())

    def render(self, fmt: Callable = str) -> str:
        return "[[{}, {}], [{}, {}]]".format(*(fmt(e) for e in self.entries()))

    def __repr__(self):
        return f"Mat2({self.render()})"


def _one_like(e):
    if isinstance(e, (int, Fraction)):
        return Fraction(1)
    return type(e)(1)


def rat_mat(rows) -> Mat2:
    """Mat2 of RatFunc from rows of ints/Fractions/UniPolys/RatFuncs."""
    def conv(v):
        if isinstance(v, RatFunc):
            return v
        return RatFunc(v if isinstance(v, UniPoly) else UniPoly([v]))

    (a, b), (c, d) = rows
    return Mat2(conv(a), conv(b), conv(c), conv(d))


def row_reduce(M: Sequence[Sequence]) -> tuple[list, list]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    rows = [[Fraction(v) for v in r] for r in M]
    ncols = len(rows[0]) if rows else 0
    pivots: list = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][col]
        if pv != 1:
            rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                ri = rows[i]
                rr = rows[r]
                rows[i] = [a - f * b for a, b in zip(ri, rr)]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M:
        return 0
    return len(row_reduce(M)[1])


def nullspace(M: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {v : M v = 0}, one vector per free column."""
    if ncols is None:
        if not M:
            raise ValueError("column count needed for an empty matrix")
        ncols = len(M[0])
    if not M:
        rows, pivots = [], []
    else:
        rows, pivots = row_reduce(M)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis
