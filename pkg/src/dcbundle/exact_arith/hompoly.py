"""Sparse homogeneous polynomials in x0, x1, x2 and degree-0 ratios of them."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Mapping, Sequence

from .poly import UniPoly, format_rational
from .ratfunc import RatFunc

Exp = tuple  # (i, j, k)
VARS = ("x0", "x1", "x2")


def _add_exp(a: Exp, b: Exp) -> Exp:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


class HomPoly3:
    """Homogeneous polynomial; the zero polynomial carries ``degree=None``."""

    __slots__ = ("terms", "degree", "_hash")

    def __init__(self, terms: Mapping = (), *, _trusted: bool = False):
        if _trusted:
            clean = terms
        else:
            clean = {}
            for e, c in dict(terms).items():
                e = tuple(int(v) for v in e)
                if len(e) != 3 or min(e) < 0:
                    raise ValueError(f"bad exponent triple {e}")
                c = Fraction(c)
                if c:
                    clean[e] = clean.get(e, Fraction(0)) + c
                    if not clean[e]:
                        del clean[e]
        degs = {sum(e) for e in clean}
        if len(degs) > 1:
            raise ValueError("polynomial is not homogeneous")
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "degree", degs.pop() if degs else None)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("HomPoly3 is immutable")

    def __reduce__(self):
        return (HomPoly3, (dict(self.terms),))

    @classmethod
    def var(cls, i: int) -> "HomPoly3":
        e = [0, 0, 0]
        e[i] = 1
        return cls({tuple(e): 1})

    @classmethod
    def constant(cls, c) -> "HomPoly3":
        return cls({(0, 0, 0): c})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "HomPoly3":
        return cls({(1, 0, 0): coeffs[0], (0, 1, 0): coeffs[1], (0, 0, 1): coeffs[2]})

    @classmethod
    def zero(cls) -> "HomPoly3":
        return cls({}, _trusted=True)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, e: Exp) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def linear_coeffs(self) -> tuple:
        if self.degree != 1:
            raise ValueError(f"{self} is not a linear form")
        return (self.coeff((1, 0, 0)), self.coeff((0, 1, 0)), self.coeff((0, 0, 1)))

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, HomPoly3):
            return other
        if isinstance(other, (int, Fraction)):
            return HomPoly3.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, Fraction(0)) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return HomPoly3(out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return HomPoly3({e: -c for e, c in self.terms.items()}, _trusted=True)

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
            if not other:
                return HomPoly3.zero()
            return HomPoly3({e: c * other for e, c in self.terms.items()}, _trusted=True)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return HomPoly3({e: c for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = HomPoly3.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, HomPoly3):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == HomPoly3.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self.terms.items())))
        return self._hash

    def __call__(self, point: Sequence):
        """Evaluate at a point; entries may be Fractions, UniPolys or RatFuncs."""
        total = 0
        for (i, j, k), c in self.terms.items():
            total = total + c * (point[0] ** i) * (point[1] ** j) * (point[2] ** k)
        return total

    # -- division ------------------------------------------------------

    def leading(self) -> tuple:
        """Lexicographically largest exponent and its coefficient."""
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, other: "HomPoly3") -> "HomPoly3 | None":
        """Quotient if ``other`` divides ``self`` exactly, else None."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return HomPoly3.zero()
        if self.degree < other.degree:
            return None
        le, lc = other.leading()
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            e = max(rem)
            if any(a < b for a, b in zip(e, le)):
                return None
            q_e = (e[0] - le[0], e[1] - le[1], e[2] - le[2])
            q_c = rem[e] / lc
            quot[q_e] = q_c
            for oe, oc in other.terms.items():
                t = _add_exp(q_e, oe)
                v = rem.get(t, Fraction(0)) - q_c * oc
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return HomPoly3(quot, _trusted=True)

    def monomial_gcd(self) -> Exp:
        if self.is_zero():
            return (0, 0, 0)
        return tuple(min(e[i] for e in self.terms) for i in range(3))

    def divide_monomial(self, m: Exp) -> "HomPoly3":
        return HomPoly3(
            {(e[0] - m[0], e[1] - m[1], e[2] - m[2]): c for e, c in self.terms.items()},
            _trusted=True,
        )

    def content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        if self.is_zero():
            return Fraction(0)
        nums = [c.numerator for c in self.terms.values()]
        dens = [c.denominator for c in self.terms.values()]
        g = reduce(gcd, nums)
        lcm = reduce(lambda a, b: a * b // gcd(a, b), dens)
        return Fraction(abs(g), lcm)

    # -- substitution --------------------------------------------------

    def substitute(self, images: Sequence) -> object:
        """Replace x_i by images[i] (any ring elements supporting + and *)."""
        return self(images)

    def linear_substitute(self, T: Sequence[Sequence]) -> "HomPoly3":
        """Pull back along x_i = sum_j T[i][j] y_j."""
        forms = [HomPoly3.linear(row) for row in T]
        out = HomPoly3.zero()
        for (i, j, k), c in self.terms.items():
            out = out + (forms[0] ** i) * (forms[1] ** j) * (forms[2] ** k) * c
        return out

    def restrict_to_line(self, P: Sequence, Q: Sequence) -> UniPoly:
        """h(P + t*Q) as a polynomial in t."""
        if not _independent(P, Q):
            raise ValueError("line parameterization points are dependent")
        lin = [UniPoly([P[i], Q[i]]) for i in range(3)]
        cache: dict = {}

        def pw(i, n):
            key = (i, n)
            if key not in cache:
                cache[key] = lin[i] ** n
            return cache[key]

        out = UniPoly()
        for (i, j, k), c in self.terms.items():
            out = out + pw(0, i) * pw(1, j) * pw(2, k) * c
        return out

    def derivative(self, i: int) -> "HomPoly3":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return HomPoly3(out, _trusted=True)

    def dehomogenize(self, i: int) -> dict:
        """Chart-i polynomial as {(a, b): c} in the two ratios x_j/x_i (j != i, increasing)."""
        others = [j for j in range(3) if j != i]
        return {(e[others[0]], e[others[1]]): c for e, c in self.terms.items()}

    def involves(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    # -- rendering -----------------------------------------------------

    def render(self, names: Sequence[str] = VARS) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                (n if p == 1 else f"{n}^{p}") for n, p in zip(names, e) if p
            )
            a = abs(c)
            if not mono:
                body = format_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_rational(a)}*{mono}"
            pieces.append(("-" if c < 0 else "+", body))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for s, b in pieces[1:]:
            out += f" {s} {b}"
        return out

    def __repr__(self):
        return f"HomPoly3({self.render()!r})"

    __str__ = render


def _independent(P: Sequence, Q: Sequence) -> bool:
    P = [Fraction(v) for v in P]
    Q = [Fraction(v) for v in Q]
    return any(P[a] * Q[b] - P[b] * Q[a] for a, b in ((0, 1), (0, 2), (1, 2)))


X0, X1, X2 = (HomPoly3.var(i) for i in range(3))


def _reduce_pair(n: HomPoly3, d: HomPoly3) -> tuple:
    if d.is_zero():
        raise ZeroDivisionError("zero denominator")
    if n.is_zero():
        return HomPoly3.zero(), HomPoly3.constant(1)
    mn, md = n.monomial_gcd(), d.monomial_gcd()
    m = tuple(min(a, b) for a, b in zip(mn, md))
    if any(m):
        n, d = n.divide_monomial(m), d.divide_monomial(m)
    if d.degree > 0:
        q = n.exact_div(d)
        if q is not None:
            n, d = q, HomPoly3.constant(1)
        elif n.degree > 0:
            q = d.exact_div(n)
            if q is not None:
                n, d = HomPoly3.constant(1), q
    lc = d.leading()[1]
    if lc != 1:
        n, d = n * (1 / lc), d * (1 / lc)
    return n, d


class ProjFunc:
    """Rational function num/den of homogeneous polynomials of equal degree.

    Only monomial factors and exact divisibility are cancelled, so equality
    is decided by cross multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, HomPoly3):
            num = HomPoly3.constant(num)
        if den is None:
            den = HomPoly3.constant(1)
        elif not isinstance(den, HomPoly3):
            den = HomPoly3.constant(den)
        if not num.is_zero() and num.degree != den.degree:
            raise ValueError("numerator and denominator degrees differ")
        n, d = _reduce_pair(num, den)
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)

    def __setattr__(self, name, value):
        raise AttributeError("ProjFunc is immutable")

    def __reduce__(self):
        return (ProjFunc, (self.num, self.den))

    @classmethod
    def ratio(cls, i: int, j: int) -> "ProjFunc":
        """x_j / x_i, the chart coordinate x_ij."""
        return cls(HomPoly3.var(j), HomPoly3.var(i))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    @staticmethod
    def _coerce(other):
        if isinstance(other, ProjFunc):
            return other
        if isinstance(other, (int, Fraction)):
            return ProjFunc(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return ProjFunc(self.num + other.num, self.den)
        return ProjFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return ProjFunc(-self.num, self.den)

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
            return ProjFunc(self.num * other, self.den)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return ProjFunc(0)
        return ProjFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "ProjFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return ProjFunc(self.den, self.num)

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
            return ProjFunc(self.den ** (-n), self.num ** (-n))
        return ProjFunc(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ProjFunc(other)
        if not isinstance(other, ProjFunc):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("ProjFunc equality is not canonical; not hashable")

    def restrict_to_line(self, P: Sequence, Q: Sequence) -> RatFunc:
        """The function along t -> [P + tQ]; error if it is undefined there."""
        d = self.den.restrict_to_line(P, Q)
        if d.is_zero():
            raise ZeroDivisionError(f"denominator {self.den} vanishes on the line")
        return RatFunc(self.num.restrict_to_line(P, Q), d)

    def render(self) -> str:
        if self.den == HomPoly3.constant(1):
            return self.num.render()
        n = self.num.render()
        if len(self.num.terms) > 1:
            n = f"({n})"
        d = self.den.render()
        if len(self.den.terms) > 1 or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"ProjFunc({self.render()!r})"

    __str__ = render


def strip_factors(p: HomPoly3, factors: Sequence[HomPoly3]) -> HomPoly3:
    """Divide out every power of each given factor."""
    if p.is_zero():
        return p
    changed = True
    while changed:
        changed = False
        for f in factors:
            if f.degree and p.degree:
                q = p.exact_div(f)
                if q is not None:
                    p, changed = q, True
    return p


class PlaneOpen:
    """{x_i != 0} minus the zero sets of the given forms."""

    def __init__(self, index: int, cuts: Sequence[HomPoly3] = ()):
        self.index = index
        self.cuts = tuple(cuts)

    def _removable(self) -> list:
        return [HomPoly3.var(self.index), *self.cuts]

    def is_regular(self, f: ProjFunc) -> bool:
        d = strip_factors(f.den, self._removable())
        if d.degree == 0:
            return True
        return f.num.exact_div(d) is not None

    def is_unit(self, f: ProjFunc) -> bool:
        if f.is_zero():
            return False
        rem = self._removable()
        d = strip_factors(f.den, rem)
        q = f.num.exact_div(d)
        if q is None:
            return False
        return strip_factors(q, rem).degree == 0

    def restricted(self, P: Sequence, Q: Sequence):
        """Squarefree polynomial (in t) whose nonvanishing is this open on the line, or None if empty."""
        h = UniPoly.constant(1)
        for g in self._removable():
            r = g.restrict_to_line(P, Q)
            if r.is_zero():
                return None
            h = h * r
        return h

    def __eq__(self, other):
        return isinstance(other, PlaneOpen) and self.index == other.index and self.cuts == other.cuts

    def __hash__(self):
        return hash((self.index, self.cuts))

    def __repr__(self):
        cuts = "".join(f" & {c} != 0" for c in self.cuts)
        return f"PlaneOpen(x{self.index} != 0{cuts})"
