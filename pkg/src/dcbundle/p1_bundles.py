"""Rank-2 bundles on the affine and projective line given by transition matrices.

Matrices are ``Mat2`` of ``RatFunc`` in the variable x.  On the projective
line x is the coordinate of the chart U_x (P_x is x = 0), y = 1/x is the
coordinate of U_y, and a transition G maps U_y-coordinates to
U_x-coordinates; a 1x1 transition x^e presents O(e).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .exact_arith import (
    DistinguishedOpen,
    Mat2,
    SingularMatrixError,
    RatFunc,
    UniPoly,
    lcd_x,
    poly_ext_gcd,
    poly_gcd,
    poly_gcd_many,
    separate,
    valuation_at_zero,
)


class InvariantError(RuntimeError):
    """An internal postcondition failed; always a bug, never bad input."""


ONE = RatFunc(1)
ZERO = RatFunc(0)
E2 = Mat2.identity(ONE)
J2 = Mat2.swap(ONE)


def _rf(p) -> RatFunc:
    return p if isinstance(p, RatFunc) else RatFunc(p)


# -- triangularization -------------------------------------------------


@dataclass(frozen=True)
class TriangularForm:
    E_mat: Mat2
    T: Mat2
    lcd: RatFunc
    aPrime: UniPoly
    bPrime: UniPoly
    dPrime: UniPoly


def triangularize(G: Mat2) -> TriangularForm:
    """Row-reduce G by the Euclidean algorithm to lcd*[[a', b'], [0, d']]."""
    if G.det() == 0:
        raise SingularMatrixError("matrix not invertible over the function field")
    L = lcd_x(G.entries())
    a, b, c, d = (e / L for e in G.entries())
    a, b, c, d = (e.as_poly() for e in (a, b, c, d))
    one, zero = UniPoly.constant(1), UniPoly()
    # rows of the accumulated multiplier, kept polynomial
    A = [[one, zero], [zero, one]]
    rows = [[a, b], [c, d]]
    while not rows[1][0].is_zero():
        ak, ck = rows[0][0], rows[1][0]
        if ak.is_zero() or ak.degree > ck.degree:
            rows.reverse()
            A.reverse()
        else:
            s = -(ck // ak)
            rows[1] = [rows[1][0] + s * rows[0][0], rows[1][1] + s * rows[0][1]]
            A[1] = [A[1][0] + s * A[0][0], A[1][1] + s * A[0][1]]
    am, bm = rows[0]
    dm = rows[1][1]
    ia, id_ = 1 / am.lc, 1 / dm.lc
    sm = -((bm * ia) // dm)
    new_row0 = [am * ia, bm * ia + sm * dm]
    new_row1 = [zero, dm * id_]
    E_rows = [
        [A[0][0] * ia + sm * A[1][0], A[0][1] * ia + sm * A[1][1]],
        [A[1][0] * id_, A[1][1] * id_],
    ]
    E_mat = Mat2(*(RatFunc(p) for p in (E_rows[0][0], E_rows[0][1], E_rows[1][0], E_rows[1][1])))
    T = Mat2(L * new_row0[0], L * new_row0[1], ZERO, L * new_row1[1])
    return TriangularForm(E_mat, T, L, new_row0[0], new_row0[1], new_row1[1])


def check_triangular_form(G: Mat2, tf: TriangularForm) -> list[str]:
    """List of violated TriangularForm invariants (empty when all hold)."""
    bad = []
    if tf.E_mat * G != tf.T:
        bad.append("T != E_mat*G")
    if not tf.T.e21.is_zero():
        bad.append("lower-left entry nonzero")
    L = tf.lcd
    if tf.T != Mat2(L * tf.aPrime, L * tf.bPrime, ZERO, L * tf.dPrime):
        bad.append("T != lcd*[[a',b'],[0,d']]")
    if tf.aPrime.lc != 1 or tf.dPrime.lc != 1:
        bad.append("diagonal not monic")
    if not tf.bPrime.is_zero() and tf.bPrime.degree >= tf.dPrime.degree:
        bad.append("deg b' >= deg d'")
    det = tf.E_mat.det()
    if not det.is_constant() or det.is_zero():
        bad.append("det(E_mat) not a nonzero constant")
    col = [(G.e11 / L).as_poly(), (G.e21 / L).as_poly()]
    if poly_gcd_many(col) != tf.aPrime:
        bad.append("a' != gcd of first column")
    return bad


# -- P^1 data ------------------------------------------------------------


def laurent_monomial(r: RatFunc):
    """(c, k) if r = c*x^k with c != 0, else None."""
    if r.is_zero():
        return None
    if r.den.degree > 0 and r.den != UniPoly.monomial(r.den.degree):
        return None
    nz = [i for i, c in enumerate(r.num.coeffs) if c]
    if len(nz) != 1:
        return None
    return r.num.coeffs[nz[0]], nz[0] - r.den.degree


def is_laurent(r: RatFunc) -> bool:
    return r.den == UniPoly.monomial(r.den.degree)


@dataclass(frozen=True)
class P1TransitionData:
    G: Mat2

    def __post_init__(self):
        for e in self.G.entries():
            if not is_laurent(e):
                raise ValueError(f"entry {e} is not regular away from 0 and infinity")
        if self.det_monomial() is None:
            raise ValueError("determinant is not of the form c*x^r")

    def det_monomial(self):
        return laurent_monomial(self.G.det())

    @property
    def r(self) -> int:
        return self.det_monomial()[1]


class ColumnInvariants(NamedTuple):
    v1: int
    v2: int
    v: int
    e1: int
    e2: int
    b: UniPoly


def _min_val(*rs):
    return min(valuation_at_zero(r) for r in rs)


def column_invariants(G) -> ColumnInvariants:
    if isinstance(G, P1TransitionData):
        G = G.G
    P1TransitionData(G)
    tf = triangularize(G)
    mono = laurent_monomial(tf.lcd)
    if mono is None or mono[0] != 1:
        raise ValueError("lcd is not a power of x")
    v = mono[1]
    a, b, c, d = (e / tf.lcd for e in G.entries())
    v1 = _min_val(a, c)
    v2 = _min_val(b, d)
    e1 = tf.aPrime.trailing_degree()
    e2 = tf.dPrime.trailing_degree()
    return ColumnInvariants(int(v1), int(v2), v, e1, e2, tf.bPrime)


# -- splitting -------------------------------------------------------------


@dataclass(frozen=True)
class SplittingType:
    e1: int
    e2: int
    A_x: Mat2
    A_y: Mat2
    trace: tuple = field(default=(), compare=False)

    @property
    def e(self) -> tuple:
        return (self.e1, self.e2)


def _y_poly_to_x(p: UniPoly) -> RatFunc:
    """A polynomial in y = 1/x as a rational function of x."""
    if p.is_zero():
        return ZERO
    return RatFunc(p.reverse(), UniPoly.monomial(p.degree))


def _x_poly_times_y_power(b: UniPoly, k: int) -> UniPoly:
    """y^k * b(1/y) as a polynomial in y (needs deg b <= k)."""
    if b.is_zero():
        return UniPoly()
    if b.degree > k:
        raise InvariantError("y-substitution leaves a pole")
    return b.reverse(k)


def split_p1(G) -> SplittingType:
    """Birkhoff factorization A_x^{-1} G A_y = diag(c1 x^e1, c2 x^e2)."""
    data = G if isinstance(G, P1TransitionData) else P1TransitionData(G)
    G = data.G
    Ax, Ay, Gp = E2, E2, G
    trace = []
    det_exp = data.r
    while True:
        inv = column_invariants(Gp)
        if 2 * inv.v > det_exp:
            raise InvariantError("v(G') exceeds half the determinant order")
        if not (inv.v1 < inv.v2 or inv.e1 < inv.e2):
            break
        if inv.v1 < inv.v2:
            trace.append(("swap", inv.v))
            Ay = Ay * J2
        else:
            trace.append(("reduce", inv.v))
            h = _x_poly_times_y_power(inv.b, inv.e2)
            s_y = h // UniPoly.monomial(inv.e2 - inv.e1)
            Ax = Ax * triangularize(Gp).E_mat.inverse()
            Ay = Ay * Mat2(ONE, -_y_poly_to_x(s_y), ZERO, ONE)
        Gp = Ax.inverse() * G * Ay
        if len(trace) > 4 * (abs(det_exp) + 8) + 64:
            raise InvariantError("splitting loop failed to terminate")
    inv = column_invariants(Gp)
    trace.append(("final", inv.v))
    Ax = Ax * triangularize(Gp).E_mat.inverse()
    cleanup = _x_poly_times_y_power(inv.b, inv.e1)
    Ay = Ay * Mat2(ONE, -_y_poly_to_x(cleanup), ZERO, ONE)
    Gp = Ax.inverse() * G * Ay
    fin = column_invariants(Gp)
    e1, e2 = fin.v + fin.e1, fin.v + fin.e2
    result = SplittingType(e1, e2, Ax, Ay, tuple(trace))
    if not verify_factorization(data, result):
        raise InvariantError("split_p1 produced an invalid factorization")
    return result


def _is_x_poly(r: RatFunc) -> bool:
    return r.is_polynomial()


def _is_y_poly(r: RatFunc) -> bool:
    return r.invert_variable().is_polynomial()


def _const_nonzero(r: RatFunc) -> bool:
    return r.is_constant() and not r.is_zero()


def verify_factorization(G, s: SplittingType) -> bool:
    """Check every SplittingType invariant against G exactly."""
    try:
        data = G if isinstance(G, P1TransitionData) else P1TransitionData(G)
    except ValueError:
        return False
    if s.e1 < s.e2:
        return False
    if not all(_is_x_poly(e) for e in s.A_x.entries()):
        return False
    if not all(_is_y_poly(e) for e in s.A_y.entries()):
        return False
    if not (_const_nonzero(s.A_x.det()) and _const_nonzero(s.A_y.det())):
        return False
    D = s.A_x.inverse() * data.G * s.A_y
    if not (D.e12.is_zero() and D.e21.is_zero()):
        return False
    m1, m2 = laurent_monomial(D.e11), laurent_monomial(D.e22)
    if m1 is None or m2 is None or (m1[1], m2[1]) != (s.e1, s.e2):
        return False
    return s.e1 + s.e2 == data.r


# -- affine line -------------------------------------------------------------


class AffineCocycle:
    """Transition table G[i][j] (U_j -> U_i coordinates) on a cover of A^1 by opens D(h_i)."""

    def __init__(self, opens: Sequence[DistinguishedOpen], transitions: dict):
        self.opens = tuple(opens)
        self.G = dict(transitions)
        n = len(self.opens)
        for i in range(n):
            self.G.setdefault((i, i), E2)
        missing = [(i, j) for i in range(n) for j in range(n) if (i, j) not in self.G]
        if missing:
            raise ValueError(f"missing transitions {missing}")

    @classmethod
    def from_g_i0(cls, opens: Sequence[DistinguishedOpen], g_i0: Sequence[Mat2]) -> "AffineCocycle":
        """Synthesize G_ij = G_i0 G_j0^{-1} from the column to chart 0."""
        if len(g_i0) != len(opens):
            raise ValueError("need one G_i0 per open")
        inv = [g.inverse() for g in g_i0]
        table = {
            (i, j): (E2 if i == j else g_i0[i] * inv[j])
            for i in range(len(opens))
            for j in range(len(opens))
        }
        return cls(opens, table)

    @property
    def n(self) -> int:
        return len(self.opens) - 1

    def validate(self) -> list[str]:
        bad = []
        hs = [U.h for U in self.opens]
        if poly_gcd_many(hs).degree > 0:
            bad.append("opens do not cover the affine line")
        m = len(self.opens)
        for i in range(m):
            if self.G[(i, i)] != E2:
                bad.append(f"G[{i},{i}] is not the identity")
        for i in range(m):
            for j in range(m):
                g = self.G[(i, j)]
                overlap = self.opens[i].intersect(self.opens[j])
                if g.det() == 0 or not overlap.is_unit(g.det()):
                    bad.append(f"det G[{i},{j}] not invertible on the overlap")
                    continue
                if not all(overlap.is_regular(e) for e in g.entries()):
                    bad.append(f"G[{i},{j}] not regular on the overlap")
                for k in range(m):
                    if g * self.G[(j, k)] != self.G[(i, k)]:
                        bad.append(f"cocycle law fails for ({i},{j},{k})")
        return bad


def regular_invertible_on(U: DistinguishedOpen, A: Mat2) -> bool:
    if not all(U.is_regular(e) for e in A.entries()):
        return False
    return U.is_unit(A.det())


def trivialize_affine(c: AffineCocycle) -> list[Mat2]:
    """Global frames A_i on each U_i with A_i^{-1} G_ij A_j = E."""
    if poly_gcd_many([U.h for U in c.opens]).degree > 0:
        raise ValueError("opens do not cover the affine line")
    A = [E2]
    for k in range(1, len(c.opens)):
        U = c.opens[k]
        H = c.G[(k, 0)] * A[0]
        tf = triangularize(H)
        g, a, b, d = tf.lcd, tf.aPrime, tf.bPrime, tf.dPrime
        Da, Na = (p.as_poly() for p in separate(U, RatFunc(a)))
        Dd, Nd = (p.as_poly() for p in separate(U, RatFunc(d)))
        Dgad, Ngad = separate(U, g * RatFunc(a * d))
        if poly_gcd(Na, Dd).degree > 0 or poly_gcd(Da, Nd).degree > 0:
            raise ValueError("inconsistent cocycle")
        # D(a)*alpha + N(d)*beta = -b kills the off-diagonal entry
        _, u, v = poly_ext_gcd(Da, Nd)
        alpha, beta = -b * u, -b * v
        right = Mat2(RatFunc(Nd), RatFunc(alpha), ZERO, RatFunc(Na)) * Ngad.inverse()
        A = [Ai * right for Ai in A]
        left = Mat2(RatFunc(Dd), RatFunc(beta), ZERO, RatFunc(Da)) * tf.E_mat * Dgad.inverse()
        A.append(left.inverse())
    return A


def verify_trivialization(c: AffineCocycle, A: Sequence[Mat2]) -> list[str]:
    bad = []
    for i, Ai in enumerate(A):
        if not regular_invertible_on(c.opens[i], Ai):
            bad.append(f"A_{i} not in GL(2, O(U_{i}))")
    for (i, j), g in c.G.items():
        if A[i].inverse() * g * A[j] != E2:
            bad.append(f"A_{i}^-1 G_{i}{j} A_{j} != E")
    return bad
