"""Dense univariate polynomials over the rationals.

Coefficients are stored low degree first as a tuple of ``Fraction``;
trailing zeros are stripped so the zero polynomial is the empty tuple.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    return Fraction(c)


def _strip(coeffs: list) -> tuple:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class UniPoly:
    """Immutable polynomial in one variable with ``Fraction`` coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _strip([_frac(c) for c in coeffs]))
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, coeffs: tuple) -> "UniPoly":
        p = object.__new__(cls)
        object.__setattr__(p, "coeffs", coeffs)
        object.__setattr__(p, "_hash", None)
        return p

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    def __reduce__(self):
        return (UniPoly, (self.coeffs,))

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "UniPoly":
        if degree < 0:
            raise ValueError("negative degree")
        return cls([0] * degree + [c])

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    # -- basic queries -------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def trailing_degree(self) -> int:
        """Exponent of the lowest nonzero term (order of vanishing at 0)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("zero polynomial has no trailing term")

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, UniPoly) else UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            raise ZeroDivisionError("zero polynomial cannot be made monic")
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        return UniPoly._raw(tuple(c / lc for c in self.coeffs))

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def shift(self, k: int) -> "UniPoly":
        """Multiply by x**k (k >= 0)."""
        if not self.coeffs or k == 0:
            return self
        return UniPoly._raw((Fraction(0),) * k + self.coeffs)

    def reverse(self, n: int | None = None) -> "UniPoly":
        """Return x**n * p(1/x); n defaults to the degree."""
        if n is None:
            n = self.degree
        if self.degree > n:
            raise ValueError("reversal length below degree")
        padded = list(self.coeffs) + [Fraction(0)] * (n + 1 - len(self.coeffs))
        return UniPoly(reversed(padded))

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _coerce(other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly._raw(_strip(out))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._raw(tuple(-c for c in self.coeffs))

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
                return UniPoly._raw(())
            return UniPoly._raw(tuple(c * other for c in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly._raw(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return UniPoly._raw(_strip(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = UniPoly._raw((Fraction(1),))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lc = other.coeffs[-1]
        if len(rem) - 1 < db:
            return UniPoly._raw(()), self
        quot = [Fraction(0)] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db]
            if c:
                q = c / lc
                quot[k] = q
                for j in range(db + 1):
                    rem[k + j] -= q * bc[j]
        return UniPoly._raw(_strip(quot)), UniPoly._raw(_strip(rem[:db]))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def divides(self, other: "UniPoly") -> bool:
        """True if self divides other."""
        return (other % self).is_zero()

    # -- comparison ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(("UniPoly", self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return bool(self.coeffs)

    # -- rendering -----------------------------------------------------

    def render(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = format_rational(a)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if a == 1 else f"{format_rational(a)}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"UniPoly({self.render()!r})"

    def __str__(self):
        return self.render()


def poly_ext_gcd(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Return ``(g, u, v)`` with g monic, ``g = u*a + v*b``."""
    if a.is_zero() and b.is_zero():
        raise ValueError("zero gcd undefined")
    r0, r1 = a, b
    s0, s1 = UniPoly.constant(1), UniPoly()
    t0, t1 = UniPoly(), UniPoly.constant(1)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    lc = r0.lc
    return r0.monic(), s0 * (1 / lc), t0 * (1 / lc)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd; gcd(0, 0) is 0."""
    if a.is_zero() and b.is_zero():
        return UniPoly()
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_gcd_many(polys: Sequence[UniPoly]) -> UniPoly:
    g = UniPoly()
    for p in polys:
        g = poly_gcd(g, p)
        if g.degree == 0:
            break
    return g


def poly_lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    if a.is_zero() or b.is_zero():
        return UniPoly()
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def squarefree_part(p: UniPoly) -> UniPoly:
    """Monic product of the distinct irreducible factors of p."""
    if p.is_zero():
        raise ValueError("squarefree part of zero")
    if p.degree <= 0:
        return UniPoly.constant(1)
    g = poly_gcd(p, p.derivative())
    return p.exact_div(g).monic()


def rational_sqrt(c: Fraction) -> Fraction | None:
    if c < 0:
        return None
    n, d = isqrt(c.numerator), isqrt(c.denominator)
    if n * n == c.numerator and d * d == c.denominator:
        return Fraction(n, d)
    return None


def sqrt_poly(p: UniPoly) -> UniPoly | None:
    """Square root with positive leading coefficient, or None.

    Only roots whose leading coefficient is a rational square are found.
    """
    if p.is_zero():
        return UniPoly()
    if p.degree % 2:
        return None
    lead = rational_sqrt(p.lc)
    if lead is None:
        return None
    m = p.degree // 2
    # q_m = lead; solve the coefficients of q downward by matching p from the top
    q = [Fraction(0)] * (m + 1)
    q[m] = lead
    two_lead = 2 * lead
    for k in range(1, m + 1):
        # coefficient of x^(2m-k) in q^2 involves q[m-k] linearly (2*lead*q[m-k])
        acc = p.coeff(2 * m - k)
        for i in range(m - k + 1, m):
            j = 2 * m - k - i
            if m - k < j <= m:
                acc -= q[i] * q[j]
        q[m - k] = acc / two_lead
    root = UniPoly(q)
    if root * root != p:
        return None
    return root
