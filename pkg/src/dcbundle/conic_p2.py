"""The double cover of the plane branched along a smooth conic.

Internally every conic is brought to the normal form x0^2 + x1*x2 by a
rational change of coordinates; lines given in the original coordinates are
pulled back before any computation.
"""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

from .double_cover import (
    AdmissiblePairRep,
    Chart,
    group_law,
    make_good,
    section_norm,
    twist_pair,
)
from .exact_arith import (
    X0,
    X1,
    X2,
    DistinguishedOpen,
    HomPoly3,
    Mat2,
    PlaneOpen,
    ProjFunc,
    UniPoly,
    nullspace,
    rank,
    row_reduce,
)
from .p1_bundles import (
    AffineCocycle,
    P1TransitionData,
    SplittingType,
    split_p1,
    trivialize_affine,
    verify_trivialization,
)

XS = (X0, X1, X2)
DEFAULT_F = X0 ** 2 + X1 * X2


def _det3(m) -> Fraction:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _inv3(m):
    d = _det3(m)
    if d == 0:
        raise ValueError("singular 3x3 matrix")
    cof = [[Fraction(0)] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            minor = [[m[r][c] for c in range(3) if c != j] for r in range(3) if r != i]
            cof[i][j] = (-1) ** (i + j) * (minor[0][0] * minor[1][1] - minor[0][1] * minor[1][0])
    return [[cof[j][i] / d for j in range(3)] for i in range(3)]


def _vecmat(v, m):
    return tuple(sum(Fraction(v[k]) * m[k][j] for k in range(3)) for j in range(3))


def _cross(p, q):
    return (
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    )


def symmetric_matrix(F: HomPoly3):
    if F.degree != 2:
        raise ValueError("conic must be a quadratic form")
    S = [[Fraction(0)] * 3 for _ in range(3)]
    for e, c in F.terms.items():
        idx = [i for i in range(3) for _ in range(e[i])]
        a, b = idx
        if a == b:
            S[a][a] += c
        else:
            S[a][b] += c / 2
            S[b][a] += c / 2
    return S


def find_rational_point(F: HomPoly3, bound: int = 12):
    """Smallest-height integer point on F = 0 with coordinates in [-bound, bound]."""
    for h in range(1, bound + 1):
        for p in product(range(-h, h + 1), repeat=3):
            if max(abs(v) for v in p) != h:
                continue
            if F(tuple(Fraction(v) for v in p)) == 0:
                return tuple(Fraction(v) for v in p)
    return None


# -- lines -----------------------------------------------------------------


@dataclass(frozen=True)
class LineInP2:
    form: tuple
    P: tuple
    Q: tuple

    def __post_init__(self):
        form = tuple(Fraction(v) for v in self.form)
        P = tuple(Fraction(v) for v in self.P)
        Q = tuple(Fraction(v) for v in self.Q)
        object.__setattr__(self, "form", form)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)
        if not any(form):
            raise ValueError("zero linear form")
        dot = lambda v: sum(a * b for a, b in zip(form, v))
        if dot(P) or dot(Q):
            raise ValueError("parameter points are not on the line")
        if not any(_cross(P, Q)):
            raise ValueError("degenerate parameterization")

    @classmethod
    def from_form(cls, form: Sequence) -> "LineInP2":
        l0, l1, l2 = (Fraction(v) for v in form)
        if l0:
            return cls((l0, l1, l2), (-l1 / l0, 1, 0), (-l2 / l0, 0, 1))
        if l2:
            return cls((l0, l1, l2), (1, 0, 0), (0, 1, -l1 / l2))
        return cls((l0, l1, l2), (1, 0, 0), (0, 0, 1))

    def linear_form(self) -> HomPoly3:
        return HomPoly3.linear(self.form)

    def render(self) -> str:
        return f"{self.linear_form()} = 0"


# -- the cover ------------------------------------------------------------------


def _plane_standard_rep(F: HomPoly3, M_forms, charts: Sequence[int]) -> AdmissiblePairRep:
    """Pair with trivial bundle and M = [[m0, m2], [m1, -m0]] of linear forms on the given charts."""
    one = ProjFunc(1)
    chs = tuple(Chart(i, PlaneOpen(i)) for i in charts)
    xi = {(i, j): ProjFunc(XS[i], XS[j]) for i in charts for j in charts}
    Fi = {i: ProjFunc(F, XS[i] ** 2) for i in charts}
    G = {(i, j): Mat2.identity(one) for i in charts for j in charts}
    M = {i: tuple(ProjFunc(m, XS[i]) if not m.is_zero() else ProjFunc(0) for m in M_forms) for i in charts}
    return AdmissiblePairRep(chs, xi, Fi, G, M)


@dataclass(frozen=True)
class ConicCover:
    F: HomPoly3 = DEFAULT_F

    def __post_init__(self):
        if self.F.degree != 2:
            raise ValueError("branch conic must have degree 2")
        if _det3(symmetric_matrix(self.F)) == 0:
            raise ValueError("singular conic")

    @cached_property
    def normalization(self):
        """(R, T, mu): y = R x, x = T y and F(T y) = mu*(y0^2 + y1*y2)."""
        ident = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
        if self.F == DEFAULT_F:
            return ident, ident, Fraction(1)
        p = find_rational_point(self.F)
        if p is None:
            raise ValueError("no rational point found on the conic; cannot normalize")
        S = symmetric_matrix(self.F)
        polar = lambda v: tuple(sum(v[k] * S[k][j] for k in range(3)) for j in range(3))
        lp = polar(p)
        q = None
        for d in product(range(-3, 4), repeat=3):
            d = tuple(Fraction(v) for v in d)
            Fd = self.F(d)
            pd = sum(a * b for a, b in zip(lp, d))
            if Fd and pd:
                lam = -2 * pd / Fd
                q = tuple(a + lam * b for a, b in zip(p, d))
                break
        lq = polar(q)
        m = _cross(p, q)
        Lp, Lq, Lm = HomPoly3.linear(lp), HomPoly3.linear(lq), HomPoly3.linear(m)
        # F lies in the pencil spanned by m^2 and lp*lq
        A, B = Lm * Lm, Lp * Lq
        monos = sorted(set(A.terms) | set(B.terms) | set(self.F.terms))
        rows = [[A.coeff(e), B.coeff(e), -self.F.coeff(e)] for e in monos]
        ker = nullspace(rows, 3)
        if len(ker) != 1 or ker[0][2] == 0:
            raise AssertionError("conic normalization failed")
        mu, nu = ker[0][0] / ker[0][2], ker[0][1] / ker[0][2]
        R = [list(m), [c * nu / mu for c in lp], list(lq)]
        T = _inv3(R)
        return R, T, mu

    def to_normal_line(self, line: LineInP2) -> LineInP2:
        R, T, _ = self.normalization
        return LineInP2.from_form(_vecmat(line.form, T))

    def from_normal_form(self, form: Sequence) -> tuple:
        R, _, _ = self.normalization
        return _vecmat(form, R)

    def restricted_branch(self, line: LineInP2) -> UniPoly:
        return self.F.restrict_to_line(line.P, line.Q)

    def is_tangent(self, line: LineInP2) -> bool:
        """Discriminant test of F restricted to the line as a binary quadratic."""
        A = self.F(line.P)
        C = self.F(line.Q)
        mid = tuple(a + b for a, b in zip(line.P, line.Q))
        B = self.F(mid) - A - C
        if A == 0 and B == 0 and C == 0:
            raise ValueError("line is contained in the conic")
        return B * B - 4 * A * C == 0

    @cached_property
    def plane_pair(self) -> AdmissiblePairRep:
        """The pair of O_X(0,1): trivial bundle with M = [[x0, x2], [x1, -x0]]."""
        return _plane_standard_rep(DEFAULT_F, (X0, X1, X2), (0, 1, 2))

    @cached_property
    def good_pair(self) -> AdmissiblePairRep:
        good = make_good(self.plane_pair, {0: [ProjFunc(1)]}, keep_base=False)
        return good.relabel({lab: lab[0] for lab in good.labels})


def standard_conic_pair(cover: ConicCover | None = None) -> AdmissiblePairRep:
    return (cover or ConicCover()).good_pair


def two_point_pair() -> AdmissiblePairRep:
    """Double cover of the line {x2 = 0} branched at x0*x1 = 0, with M = [[0, x1], [x0, 0]]."""
    base = _plane_standard_rep(X0 * X1, (HomPoly3.zero(), X0, X1), (0, 1))
    good = make_good(base)
    return good.relabel({lab: lab[0] for lab in good.labels})


TWO_POINT_LINE = LineInP2((0, 0, 1), (1, 0, 0), (0, 1, 0))


# -- restriction to lines ---------------------------------------------------------


def restrict_rep(rep: AdmissiblePairRep, P: Sequence, Q: Sequence) -> AdmissiblePairRep:
    """Substitute t -> [P + tQ]; charts missing the line are dropped."""
    hs = {c.label: c.open.restricted(P, Q) for c in rep.charts}
    return rep.map_entries(
        lambda f: f.restrict_to_line(P, Q),
        open_fn=lambda c: DistinguishedOpen.from_poly(hs[c.label]),
        keep=lambda c: hs[c.label] is not None,
    )


@dataclass
class LineRestriction:
    t_side: AdmissiblePairRep
    y_side: AdmissiblePairRep


def restrict_to_line(rep: AdmissiblePairRep, line: LineInP2) -> LineRestriction:
    return LineRestriction(restrict_rep(rep, line.P, line.Q), restrict_rep(rep, line.Q, line.P))


def _frames(rep: AdmissiblePairRep) -> tuple:
    """Frames A_i with A_i^-1 G_ij A_j = E over the affine line of ``rep``."""
    labels = rep.labels
    for c in rep.charts:
        if c.open.is_whole():
            return {i: rep.G[i, c.label] for i in labels}, "chart"
    cocycle = AffineCocycle([c.open for c in rep.charts], {
        (a, b): rep.G[i, j] for a, i in enumerate(labels) for b, j in enumerate(labels)
    })
    A = trivialize_affine(cocycle)
    bad = verify_trivialization(cocycle, A)
    if bad:
        raise AssertionError("; ".join(bad))
    return {i: A[a] for a, i in enumerate(labels)}, "affine-trivialization"


def line_transition(t_rep: AdmissiblePairRep, y_rep: AdmissiblePairRep):
    """P^1 transition in t from a bundle given on both affine halves of a line."""
    whole_t = [c.label for c in t_rep.charts if c.open.is_whole()]
    whole_y = [c.label for c in y_rep.charts if c.open.is_whole()]
    if whole_t and whole_y:
        return P1TransitionData(t_rep.G[whole_t[0], whole_y[0]]), "two-chart"
    At, rt = _frames(t_rep)
    Ay, ry = _frames(y_rep)
    c = t_rep.labels[0]
    G = At[c].inverse() * Ay[c].map(lambda r: r.invert_variable())
    return P1TransitionData(G), "affine-trivialization"


def splitting_on_line(
    cover: ConicCover,
    n: int,
    line: LineInP2,
    *,
    reps: Sequence[AdmissiblePairRep] | None = None,
    exps: Sequence[int] | None = None,
    normal: bool = False,
) -> SplittingType:
    """Splitting type of the push-forward of O_X(0, n) (or of the given tensor product) on a line.

    ``normal=True`` means the line is already in normal-form coordinates.
    """
    if reps is None:
        reps, exps = [cover.good_pair], [n]
    lam = line if normal else cover.to_normal_line(line)
    t_side = group_law([restrict_rep(r, lam.P, lam.Q) for r in reps], exps)
    y_side = group_law([restrict_rep(r, lam.Q, lam.P) for r in reps], exps)
    data, _ = line_transition(t_side, y_side)
    return split_p1(data)


def two_point_splitting(n: int) -> SplittingType:
    pair = two_point_pair()
    L = TWO_POINT_LINE
    t_side = group_law([restrict_rep(pair, L.P, L.Q)], [n])
    y_side = group_law([restrict_rep(pair, L.Q, L.P)], [n])
    data, _ = line_transition(t_side, y_side)
    return split_p1(data)


# -- scans -----------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    line: LineInP2
    splitting: tuple
    tangent: bool
    is_jumping: bool


def _scan_one(args):
    cover, n, line = args
    s = splitting_on_line(cover, n, line)
    return s.e, cover.is_tangent(line)


def jumping_scan(cover: ConicCover, n: int, lines: Sequence[LineInP2], jobs: int = 1) -> list[ScanRow]:
    if not lines:
        raise ValueError("no lines to scan")
    tasks = [(cover, n, L) for L in lines]
    if jobs > 1 and len(lines) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_scan_one, tasks))
    else:
        results = [_scan_one(t) for t in tasks]
    counts = Counter(e for e, _ in results)
    top = max(counts.values())
    mode = next(e for e, _ in results if counts[e] == top)
    return [ScanRow(L, e, tan, e != mode) for L, (e, tan) in zip(lines, results)]


def random_lines(cover: ConicCover, count: int, seed: int, *, transversal: bool = True, bound: int = 9) -> list[LineInP2]:
    rng = random.Random(seed)
    out, seen = [], set()
    while len(out) < count:
        form = tuple(rng.randint(-bound, bound) for _ in range(3))
        if not any(form) or form in seen:
            continue
        L = LineInP2.from_form(form)
        if transversal and cover.is_tangent(L):
            continue
        seen.add(form)
        out.append(L)
    return out


def tangent_lines(cover: ConicCover, params: Sequence) -> list[LineInP2]:
    """Tangents x0 + c*x1 + b*x2 = 0 with 4bc = -1 (in normal-form coordinates)."""
    out = []
    for b in params:
        b = Fraction(b)
        if b == 0:
            raise ValueError("tangent parameter b must be nonzero")
        c = -1 / (4 * b)
        out.append(LineInP2.from_form(cover.from_normal_form((1, c, b))))
    return out


# change of coordinates [y] -> [(y1+y2)/2 : y0-(y1-y2)/2 : y0+(y1-y2)/2]
H = Fraction(1, 2)
CONIC_TRANSFORM = ((0, H, H), (1, -H, H), (1, H, -H))


def pull_back_line(form: Sequence, T=CONIC_TRANSFORM) -> LineInP2:
    """The line {l . (T y) = 0} in the y-coordinates."""
    return LineInP2.from_form(_vecmat(form, [[Fraction(v) for v in row] for row in T]))


# -- global sections ---------------------------------------------------------------


Laurent = dict  # {(i, j): Fraction}, exponents of the two chart coordinates


def to_chart_laurent(f: ProjFunc, chart: int) -> Laurent:
    """Expand a function with monomial denominator in the coordinates of a chart."""
    if len(f.den.terms) != 1:
        raise ValueError(f"denominator of {f} is not a monomial")
    (de, dc), = f.den.terms.items()
    o1, o2 = [k for k in range(3) if k != chart]
    out = {}
    for e, c in f.num.terms.items():
        key = (e[o1] - de[o1], e[o2] - de[o2])
        out[key] = out.get(key, Fraction(0)) + c / dc
    return {k: v for k, v in out.items() if v}


def _lmul(a: Laurent, b: Laurent) -> Laurent:
    out = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            k = (i1 + i2, j1 + j2)
            out[k] = out.get(k, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _ladd(a: Laurent, b: Laurent) -> Laurent:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + v
    return {k: v for k, v in out.items() if v}


def twisted_pair(cover: ConicCover, bidegree: tuple) -> AdmissiblePairRep:
    """Normal pair of O_X(k1, k2) on the charts U_1, U_2: K^(k1-k2) G0 times x12^k2."""
    k1, k2 = bidegree
    sub = cover.good_pair.map_entries(lambda f: f, keep=lambda c: c.label in (1, 2))
    base = group_law([sub], [k1 - k2])
    eta = {(i, j): ProjFunc(XS[j], XS[i]) ** k2 for i in (1, 2) for j in (1, 2)}
    return twist_pair(base, eta)


@dataclass
class SectionBasis:
    bidegree: tuple
    degree_bound: int
    basis: list  # pairs (s1, s2) of {(a, b): coeff} in x20, x21
    dimension: int
    saturated: bool


def _section_space(G12_laurent, D: int):
    monos = [(a, b) for d in range(D + 1) for a in range(d + 1) for b in [d - a]]
    unknowns = [(comp, m) for comp in (0, 1) for m in monos]
    # (G s)_r = sum_c G[r][c] * s_c with s monomial x20^a x21^b = u^a w^(-a-b)
    conds = {}
    for col, (comp, (a, b)) in enumerate(unknowns):
        mono = {(a, -a - b): Fraction(1)}
        for r in (0, 1):
            for key, v in _lmul(G12_laurent[r][comp], mono).items():
                if key[1] < 0:
                    conds.setdefault((r, key), {})[col] = v
    rows = []
    for _, entries in sorted(conds.items()):
        row = [Fraction(0)] * len(unknowns)
        for col, v in entries.items():
            row[col] = v
        rows.append(row)
    return unknowns, nullspace(rows, len(unknowns))


def _g12_laurent(cover: ConicCover, bidegree: tuple):
    pair = twisted_pair(cover, bidegree)
    G = pair.G[1, 2]
    return [[to_chart_laurent(G.e11, 1), to_chart_laurent(G.e12, 1)],
            [to_chart_laurent(G.e21, 1), to_chart_laurent(G.e22, 1)]]


def global_sections(cover: ConicCover, bidegree: tuple, degree_bound: int) -> SectionBasis:
    if degree_bound < 0:
        raise ValueError("degree bound must be nonnegative")
    g = _g12_laurent(cover, bidegree)
    unknowns, ker = _section_space(g, degree_bound)
    _, ker_next = _section_space(g, degree_bound + 1)
    # present the basis in reduced echelon form
    reduced = row_reduce(ker)[0] if ker else []
    basis = []
    for vec in reduced:
        s = ({}, {})
        for (comp, m), c in zip(unknowns, vec):
            if c:
                s[comp][m] = c
        basis.append(s)
    return SectionBasis(tuple(bidegree), degree_bound, basis, len(basis), len(ker) == len(ker_next))


def chart2_function(poly: Laurent) -> ProjFunc:
    """A polynomial in x20, x21 as a function on the plane."""
    if not poly:
        return ProjFunc(0)
    D = max(a + b for a, b in poly)
    num = HomPoly3({(a, b, D - a - b): c for (a, b), c in poly.items()})
    return ProjFunc(num, X2 ** D)


def section_image_degree(cover: ConicCover, section: tuple, bidegree: tuple):
    """h = s1^2 - s2^2 F on U_2 with its degree; gluing is checked by the section norm."""
    pair = twisted_pair(cover, bidegree)
    s1, s2 = (chart2_function(p) for p in section)
    v1 = pair.G[1, 2].apply((s1, s2))
    res = section_norm(pair, {2: (s1, s2), 1: v1})
    h = to_chart_laurent(res.h[2], 2)
    if any(a < 0 or b < 0 for a, b in h):
        raise AssertionError("section norm is not polynomial on U_2")
    degree = max((a + b for a, b in h), default=-1)
    return h, degree


def sample_section_family() -> list:
    """A 15-parameter family of sections for bidegree (4, 2), one pair per c_k."""
    # terms: (coefficient, {c index: multiplier}) for s1 then s2
    s1 = {
        (4, 0): {1: 2}, (3, 1): {2: 2}, (3, 0): {3: 1}, (2, 2): {4: 2}, (2, 1): {1: 1, 5: 1},
        (2, 0): {6: 1, 7: 1}, (1, 2): {2: 1, 8: 1}, (1, 1): {9: 1, 10: 1}, (1, 0): {11: 1, 12: 1},
        (0, 3): {4: 1}, (0, 2): {13: 1}, (0, 1): {14: 1}, (0, 0): {15: 1},
    }
    s2 = {
        (3, 0): {1: 2}, (2, 1): {2: 2}, (2, 0): {3: 1}, (1, 2): {4: 2}, (1, 1): {5: 1},
        (1, 0): {6: 1}, (0, 2): {8: 1}, (0, 1): {9: 1}, (0, 0): {11: 1},
    }
    family = []
    for k in range(1, 16):
        p1 = {m: Fraction(c[k]) for m, c in s1.items() if k in c}
        p2 = {m: Fraction(c[k]) for m, c in s2.items() if k in c}
        family.append((p1, p2))
    return family


def section_vector(section: tuple, degree_bound: int) -> list:
    monos = [(a, d - a) for d in range(degree_bound + 1) for a in range(d + 1)]
    return [section[comp].get(m, Fraction(0)) for comp in (0, 1) for m in monos]


def family_in_span(basis: SectionBasis, family: list) -> tuple[bool, int]:
    """(every family member lies in the span, rank of the family)."""
    D = basis.degree_bound
    B = [section_vector(s, D) for s in basis.basis]
    Fm = [section_vector(s, D) for s in family]
    r_basis = rank(B)
    inside = all(rank(B + [v]) == r_basis for v in Fm)
    return inside, rank(Fm)
