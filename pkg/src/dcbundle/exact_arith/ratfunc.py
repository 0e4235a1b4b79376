"""Reduced univariate rational functions, valuations and support separation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import UniPoly, poly_gcd, poly_gcd_many, poly_lcm, squarefree_part

INF = float("inf")


class RatFunc:
    """num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced=False):
        num = num if isinstance(num, UniPoly) else UniPoly([num])
        if den is None:
            den = UniPoly.constant(1)
        elif not isinstance(den, UniPoly):
            den = UniPoly([den])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = UniPoly.constant(1)
            else:
                if den.degree > 0:
                    g = poly_gcd(num, den)
                    if g.degree > 0:
                        num = num.exact_div(g)
                        den = den.exact_div(g)
                lc = den.lc
                if lc != 1:
                    num = num * (1 / lc)
                    den = den.monic()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    def __reduce__(self):
        return (RatFunc, (self.num, self.den))

    @classmethod
    def x(cls) -> "RatFunc":
        return cls(UniPoly.x())

    @classmethod
    def monomial(cls, k: int, c=1) -> "RatFunc":
        """c * x**k for any integer k."""
        if k >= 0:
            return cls(UniPoly.monomial(k, c))
        return cls(UniPoly([c]), UniPoly.monomial(-k))

    def zero(self) -> "RatFunc":
        return RatFunc(UniPoly())

    def one(self) -> "RatFunc":
        return RatFunc(UniPoly.constant(1))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.coeff(0)

    def as_poly(self) -> UniPoly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction, UniPoly)):
            return RatFunc(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RatFunc(UniPoly())
            return RatFunc(self.num * other, self.den, _reduced=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RatFunc(UniPoly())
        # cross-cancel before multiplying keeps intermediate sizes small
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        n1, d2 = (self.num.exact_div(g1), other.den.exact_div(g1)) if g1.degree > 0 else (self.num, other.den)
        n2, d1 = (other.num.exact_div(g2), self.den.exact_div(g2)) if g2.degree > 0 else (other.num, self.den)
        num, den = n1 * n2, d1 * d2
        lc = den.lc
        if lc != 1:
            num, den = num * (1 / lc), den.monic()
        return RatFunc(num, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return RatFunc(self.den ** (-n), self.num ** (-n))
        return RatFunc(self.num ** n, self.den ** n, _reduced=True)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, UniPoly)):
            return self == RatFunc(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def invert_variable(self) -> "RatFunc":
        """Substitute x -> 1/x."""
        n, d = self.num.degree, self.den.degree
        if self.is_zero():
            return self
        num = self.num.reverse()
        den = self.den.reverse()
        k = d - n
        if k >= 0:
            num = num.shift(k)
        else:
            den = den.shift(-k)
        return RatFunc(num, den)

    # -- rendering -----------------------------------------------------

    def render(self, var: str = "x") -> str:
        if self.den.degree == 0:
            return self.num.render(var)
        n = self.num.render(var)
        if sum(1 for c in self.num.coeffs if c) > 1:
            n = f"({n})"
        d = self.den.render(var)
        if sum(1 for c in self.den.coeffs if c) > 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RatFunc({self.render()!r})"

    __str__ = render


def valuation_at_zero(r: RatFunc):
    """Order of r at x = 0; ``float('inf')`` for zero."""
    if r.is_zero():
        return INF
    return r.num.trailing_degree() - r.den.trailing_degree()


@dataclass(frozen=True)
class DistinguishedOpen:
    """The affine open {h != 0} of the affine line, h squarefree."""

    h: UniPoly

    def __post_init__(self):
        if self.h.is_zero():
            raise ValueError("distinguished open needs a nonzero polynomial")
        if self.h.degree > 0 and poly_gcd(self.h, self.h.derivative()).degree > 0:
            raise ValueError(f"{self.h} is not squarefree")
        if self.h.lc != 1:
            object.__setattr__(self, "h", self.h.monic())

    @classmethod
    def whole(cls) -> "DistinguishedOpen":
        return cls(UniPoly.constant(1))

    @classmethod
    def from_poly(cls, p: UniPoly) -> "DistinguishedOpen":
        """D(p) for any nonzero p (taking its squarefree part)."""
        return cls(squarefree_part(p))

    def is_whole(self) -> bool:
        return self.h.degree <= 0

    def intersect(self, other: "DistinguishedOpen") -> "DistinguishedOpen":
        return DistinguishedOpen.from_poly(self.h * other.h)

    def _bad_part(self, p: UniPoly) -> UniPoly:
        """Monic part of p supported on the roots of h."""
        if self.h.degree <= 0 or p.degree <= 0:
            return UniPoly.constant(1)
        return poly_gcd(p, self.h ** p.degree)

    def is_regular(self, f: RatFunc) -> bool:
        """f has no pole on the open."""
        return self._bad_part(f.den) == f.den.monic()

    def is_unit(self, f: RatFunc) -> bool:
        """f is regular and nowhere zero on the open."""
        if f.is_zero():
            return False
        return self.is_regular(f) and self._bad_part(f.num) == f.num.monic()

    def __str__(self):
        return f"D({self.h})"


def separate(U: DistinguishedOpen, a: RatFunc) -> tuple[RatFunc, RatFunc]:
    """Split a = D*N with D supported off U (monic parts) and N a unit near the roots of U.h."""
    if a.is_zero():
        raise ValueError("cannot separate the zero function")
    dn = U._bad_part(a.num)
    dd = U._bad_part(a.den)
    D = RatFunc(dn, dd)
    N = RatFunc(a.num.exact_div(dn), a.den.exact_div(dd))
    return D, N


def lcd_x(entries) -> RatFunc:
    """gcd of reduced numerators over lcm of denominators (monic); accepts a Mat2 or an iterable."""
    if hasattr(entries, "entries"):
        entries = entries.entries()
    entries = [e for e in entries if not e.is_zero()]
    if not entries:
        raise ValueError("lcd of the zero matrix is undefined")
    g = poly_gcd_many([e.num for e in entries])
    den = UniPoly.constant(1)
    for e in entries:
        den = poly_lcm(den, e.den)
    return RatFunc(g, den)
