"""Admissible pairs of a double cover in chart form and the push-forward group law.

A representation lives on a list of charts.  Each chart carries an open set
object (``PlaneOpen`` on the plane, ``DistinguishedOpen`` on a line) and all
chart functions share one exact field type: ``ProjFunc`` before restriction
to a line, ``RatFunc`` after.  ``G[i, j]`` maps chart-j coordinates to chart-i
coordinates and ``xi[i, j]`` satisfies t_j = t_i * xi[i, j].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

from .exact_arith import (
    HomPoly3,
    Mat2,
    RatFunc,
    UniPoly,
    nullspace,
    poly_lcm,
    sqrt_poly,
)


def one_like(f):
    return type(f)(1)


def zero_like(f):
    return type(f)(0)


@dataclass(frozen=True)
class Chart:
    label: Hashable
    open: object = None

    def is_unit(self, f) -> bool:
        if self.open is None or not hasattr(self.open, "is_unit"):
            return not f == 0
        return self.open.is_unit(f)


@dataclass
class AdmissiblePairRep:
    charts: tuple
    xi: dict
    F: dict
    G: dict
    M: dict  # label -> (a0, a1, a2)
    is_good: bool = field(init=False)
    is_normal: bool = field(init=False)

    def __post_init__(self):
        self.charts = tuple(self.charts)
        self.is_good = all(c.is_unit(self.M[c.label][1]) for c in self.charts)
        self.is_normal = all(
            self.M[c.label][0] == 0 and self.M[c.label][1] == 1 and self.M[c.label][2] == self.F[c.label]
            for c in self.charts
        )

    @property
    def labels(self) -> tuple:
        return tuple(c.label for c in self.charts)

    def chart(self, label) -> Chart:
        for c in self.charts:
            if c.label == label:
                return c
        raise KeyError(label)

    def matrix(self, label) -> Mat2:
        a0, a1, a2 = self.M[label]
        return Mat2(a0, a2, a1, -a0)

    def one(self):
        return one_like(self.F[self.charts[0].label])

    def map_entries(self, fn: Callable, open_fn: Callable | None = None, keep=None) -> "AdmissiblePairRep":
        """Apply ``fn`` to every chart function; ``keep`` filters charts."""
        charts = [c for c in self.charts if keep is None or keep(c)]
        labels = [c.label for c in charts]
        new_charts = tuple(Chart(c.label, open_fn(c) if open_fn else c.open) for c in charts)
        return AdmissiblePairRep(
            new_charts,
            {(i, j): fn(self.xi[i, j]) for i in labels for j in labels},
            {i: fn(self.F[i]) for i in labels},
            {(i, j): self.G[i, j].map(fn) for i in labels for j in labels},
            {i: tuple(fn(a) for a in self.M[i]) for i in labels},
        )

    def relabel(self, mapping: Mapping) -> "AdmissiblePairRep":
        m = dict(mapping)
        return AdmissiblePairRep(
            tuple(Chart(m[c.label], c.open) for c in self.charts),
            {(m[i], m[j]): v for (i, j), v in self.xi.items()},
            {m[i]: v for i, v in self.F.items()},
            {(m[i], m[j]): v for (i, j), v in self.G.items()},
            {m[i]: v for i, v in self.M.items()},
        )


@dataclass
class ValidationReport:
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok


def validate_admissible(rep: AdmissiblePairRep) -> ValidationReport:
    bad = []
    labels = rep.labels
    one = rep.one()
    E = Mat2.identity(one)
    for i in labels:
        a0, a1, a2 = rep.M[i]
        if a0 * a0 + a1 * a2 != rep.F[i]:
            bad.append(f"chart {i}: a0^2 + a1*a2 != F")
        if rep.G[i, i] != E:
            bad.append(f"chart {i}: G_ii != E")
        if rep.xi[i, i] != 1:
            bad.append(f"chart {i}: xi_ii != 1")
    for i in labels:
        for j in labels:
            g = rep.G[i, j]
            if g.det() == 0:
                bad.append(f"charts {i},{j}: G_ij singular")
                continue
            if rep.F[j] != rep.xi[i, j] * rep.xi[i, j] * rep.F[i]:
                bad.append(f"charts {i},{j}: F_j != xi_ij^2 F_i")
            lhs = g.inverse() * rep.matrix(i) * g * rep.xi[i, j]
            if lhs != rep.matrix(j):
                bad.append(f"charts {i},{j}: M_j != xi_ij G_ij^-1 M_i G_ij")
            for k in labels:
                if g * rep.G[j, k] != rep.G[i, k]:
                    bad.append(f"charts {i},{j},{k}: G_ik != G_ij G_jk")
                if rep.xi[i, j] * rep.xi[j, k] != rep.xi[i, k]:
                    bad.append(f"charts {i},{j},{k}: xi_ik != xi_ij xi_jk")
    if rep.is_good:
        for c in rep.charts:
            if not c.is_unit(rep.M[c.label][1]):
                bad.append(f"chart {c.label}: a1 not a unit")
    return ValidationReport(bad)


# -- good representations ------------------------------------------------


def _cut_open(open_obj, f):
    """The open intersected with {f != 0} (f a chart function)."""
    if open_obj is None:
        return None
    if hasattr(open_obj, "cuts"):  # PlaneOpen
        from .exact_arith import PlaneOpen, strip_factors

        xi = HomPoly3.var(open_obj.index)
        cuts = list(open_obj.cuts)
        for part in (f.num, f.den):
            rest = strip_factors(part, [xi, *cuts])
            if rest.degree:
                cuts.append(rest)
        return PlaneOpen(open_obj.index, cuts)
    from .exact_arith import DistinguishedOpen

    return DistinguishedOpen.from_poly(open_obj.h * f.num * f.den)


def make_good(rep: AdmissiblePairRep, p_choices: Mapping | None = None, keep_base: bool = True) -> AdmissiblePairRep:
    """Refine the cover so that every a_1 is a unit (charts relabelled (i, k)).

    A chart whose a_1 (or else a_2) is already a unit keeps a single piece.
    Otherwise the pieces are k = 1, 2 and one piece per supplied p; with
    ``keep_base=False`` only the p-pieces are used, which is valid when the
    caller knows they already cover the chart.
    """
    p_choices = dict(p_choices or {})
    one = rep.one()
    zero = zero_like(one)
    pieces = []  # (new label, old label, A, open)
    for c in rep.charts:
        i = c.label
        a0, a1, a2 = rep.M[i]
        if c.is_unit(a1):
            pieces.append(((i, 1), i, Mat2.identity(one), c.open))
            continue
        if c.is_unit(a2):
            pieces.append(((i, 2), i, Mat2.swap(one), c.open))
            continue
        ps = list(p_choices.get(i, ()))
        if not ps:
            raise ValueError("cannot certify covering")
        if keep_base:
            pieces.append(((i, 1), i, Mat2.identity(one), _cut_open(c.open, a1)))
            pieces.append(((i, 2), i, Mat2.swap(one), _cut_open(c.open, a2)))
        for k, p in enumerate(ps, start=3):
            ak = a1 - 2 * p * a0 - p * p * a2
            if ak == 0:
                raise ValueError(f"p = {p} gives a_{k} = 0 on chart {i}")
            pieces.append(((i, k), i, Mat2(one, zero, p, one), _cut_open(c.open, ak)))
    charts = tuple(Chart(lab, U) for lab, _, _, U in pieces)
    xi, F, G, M = {}, {}, {}, {}
    for la, i, A, _ in pieces:
        Ainv = A.inverse()
        m = Ainv * rep.matrix(i) * A
        M[la] = (m.e11, m.e21, m.e12)
        F[la] = rep.F[i]
        for lb, j, B, _ in pieces:
            xi[la, lb] = rep.xi[i, j]
            G[la, lb] = Ainv * rep.G[i, j] * B
    out = AdmissiblePairRep(charts, xi, F, G, M)
    if not out.is_good:
        raise ValueError("refinement is not good on every chart")
    return out


# -- group law -------------------------------------------------------------


def _require_good(rep: AdmissiblePairRep):
    if not rep.is_good:
        raise ValueError("representation is not good (a_1 not a unit on some chart)")


def normal_matrix(F_i) -> Mat2:
    return Mat2(zero_like(F_i), F_i, one_like(F_i), zero_like(F_i))


def k_plus(rep: AdmissiblePairRep, i, j) -> Mat2:
    _require_good(rep)
    g = rep.G[i, j]
    a0, a1, _ = rep.M[i]
    E = Mat2.identity(one_like(a1))
    scal = a1 * g.e11 - a0 * g.e21
    return (E * scal + normal_matrix(rep.F[i]) * g.e21) * (1 / a1)


def k_minus(rep: AdmissiblePairRep, i, j) -> Mat2:
    _require_good(rep)
    g = rep.G[i, j]
    a0, a1, _ = rep.M[i]
    det = g.det()
    if det == 0:
        raise ValueError("singular transition")
    E = Mat2.identity(one_like(a1))
    scal = a1 * g.e11 - a0 * g.e21
    return (E * scal - normal_matrix(rep.F[i]) * g.e21) * (rep.xi[i, j] / (a1 * det))


def g_zero(xi_ij) -> Mat2:
    return Mat2(one_like(xi_ij), zero_like(xi_ij), zero_like(xi_ij), xi_ij)


def same_cover(a: AdmissiblePairRep, b: AdmissiblePairRep) -> bool:
    if a.labels != b.labels:
        return False
    labels = a.labels
    if any(a.F[i] != b.F[i] for i in labels):
        return False
    return all(a.xi[i, j] == b.xi[i, j] for i in labels for j in labels)


def group_law(reps: Sequence[AdmissiblePairRep], n: Sequence[int]) -> AdmissiblePairRep:
    """Normal representation of the tensor product L_1^n_1 ... L_m^n_m."""
    if len(reps) != len(n) or not reps:
        raise ValueError("need one exponent per pair")
    base = reps[0]
    for r in reps[1:]:
        if not same_cover(base, r):
            raise ValueError("pairs live on different covers")
    for r, nk in zip(reps, n):
        if nk:
            _require_good(r)
    labels = base.labels
    G = {}
    for i in labels:
        for j in labels:
            prod = Mat2.identity(base.one())
            if i != j:
                for r, nk in zip(reps, n):
                    if nk:
                        K = k_plus(r, i, j) if nk > 0 else k_minus(r, i, j)
                        prod = prod * (K ** abs(nk))
            G[i, j] = prod * g_zero(base.xi[i, j])
    M = {i: (zero_like(base.F[i]), one_like(base.F[i]), base.F[i]) for i in labels}
    return AdmissiblePairRep(base.charts, dict(base.xi), dict(base.F), G, M)


def inverse_pair(rep: AdmissiblePairRep) -> AdmissiblePairRep:
    G = {(i, j): g * (rep.xi[i, j] / g.det()) for (i, j), g in rep.G.items()}
    M = {i: tuple(-a for a in m) for i, m in rep.M.items()}
    return AdmissiblePairRep(rep.charts, dict(rep.xi), dict(rep.F), G, M)


def conjugate_pair(rep: AdmissiblePairRep) -> AdmissiblePairRep:
    M = {i: tuple(-a for a in m) for i, m in rep.M.items()}
    return AdmissiblePairRep(rep.charts, dict(rep.xi), dict(rep.F), dict(rep.G), M)


def twist_pair(rep: AdmissiblePairRep, eta: Mapping) -> AdmissiblePairRep:
    """Tensor the underlying bundle with a line bundle of transitions eta[i, j]."""
    G = {(i, j): g * eta[i, j] for (i, j), g in rep.G.items()}
    return AdmissiblePairRep(rep.charts, dict(rep.xi), dict(rep.F), G, dict(rep.M))


def ramification_pair(charts: Sequence[Chart], F: Mapping, xi: Mapping) -> AdmissiblePairRep:
    labels = [c.label for c in charts]
    for i in labels:
        for j in labels:
            if F[j] != xi[i, j] * xi[i, j] * F[i]:
                raise ValueError(f"F and xi incompatible on charts {i},{j}")
    G = {}
    for i in labels:
        for j in labels:
            x = xi[i, j]
            G[i, j] = Mat2(1 / x, zero_like(x), zero_like(x), one_like(x))
    M = {i: (zero_like(F[i]), one_like(F[i]), F[i]) for i in labels}
    return AdmissiblePairRep(tuple(charts), dict(xi), dict(F), G, M)


# -- sections ----------------------------------------------------------------


@dataclass
class SectionNormResult:
    h: dict
    glued: bool


def section_norm(rep: AdmissiblePairRep, sections: Mapping) -> SectionNormResult:
    """h_i = a_i1 (x_i^2 - y_i^2 F_i) from per-chart section data (x_i, y_i)."""
    _require_good(rep)
    labels = [i for i in rep.labels if i in sections]
    vec = {}
    for i in labels:
        x, y = sections[i]
        a0, a1, _ = rep.M[i]
        vec[i] = (x + a0 * y, a1 * y)
    for i in labels:
        for j in labels:
            if rep.G[i, j].apply(vec[j]) != vec[i]:
                raise ValueError("not a global section")
    h = {}
    for i in labels:
        x, y = sections[i]
        h[i] = rep.M[i][1] * (x * x - y * y * rep.F[i])
    for i in labels:
        for j in labels:
            if (rep.G[i, j].det() / rep.xi[i, j]) * h[j] != h[i]:
                raise AssertionError(f"section norm fails to glue on charts {i},{j}")
    return SectionNormResult(h, True)


# -- branch decomposition ------------------------------------------------------


def branch_decompose(F: HomPoly3, f: HomPoly3):
    """(a0, a1) with F = a0^2 + f*a1, or None when F|_{f=0} is not a rational square.

    a0 is reduced modulo f: it avoids the highest-index variable of f.
    """
    if f.is_zero() or f.degree != 1:
        raise ValueError("f must be a nonzero linear form")
    if F.is_zero():
        return HomPoly3.zero(), HomPoly3.zero()
    if F.degree % 2:
        raise ValueError("F must have even degree")
    l = F.degree // 2
    co = f.linear_coeffs()
    m = max(i for i in range(3) if co[i])
    a, b = [i for i in range(3) if i != m]
    P = [Fraction(0)] * 3
    Q = [Fraction(0)] * 3
    P[a], P[m] = Fraction(1), -co[a] / co[m]
    Q[b], Q[m] = Fraction(1), -co[b] / co[m]
    q = sqrt_poly(F.restrict_to_line(P, Q))
    if q is None:
        return None
    terms = {}
    for k, c in enumerate(q.coeffs):
        if c:
            e = [0, 0, 0]
            e[a], e[b] = l - k, k
            terms[tuple(e)] = c
    a0 = HomPoly3(terms)
    a1 = (F - a0 * a0).exact_div(f)
    if a1 is None:
        raise AssertionError("F - a0^2 not divisible by f")
    return a0, a1


# -- equivalence witnesses -------------------------------------------------------


def _witness_matrix(alpha, beta, F_i) -> Mat2:
    return Mat2(alpha, beta * F_i, beta, alpha)


def verify_equivalence_witness(repA: AdmissiblePairRep, repB: AdmissiblePairRep, witness: Mapping) -> bool:
    """W_i G_ij = H_ij W_j with W_i = [[alpha, beta F_i], [beta, alpha]] invertible on chart i."""
    if not (repA.is_normal and repB.is_normal):
        raise ValueError("witness verification needs normal representations")
    if not same_cover(repA, repB):
        return False
    for c in repA.charts:
        alpha, beta = witness[c.label]
        det = alpha * alpha - beta * beta * repA.F[c.label]
        if det == 0 or not c.is_unit(det):
            return False
    W = {i: _witness_matrix(*witness[i], repA.F[i]) for i in repA.labels}
    for i in repA.labels:
        for j in repA.labels:
            if W[i] * repA.G[i, j] != repB.G[i, j] * W[j]:
                return False
    return True


def solve_equivalence_witness(repA: AdmissiblePairRep, repB: AdmissiblePairRep, degree: int = 2, pole_order: int = 2):
    """Search a witness between normal line representations (RatFunc entries).

    Each alpha_i, beta_i is taken as a polynomial of degree <= ``degree``
    divided by h_i^pole_order; the intertwining identities are linear in the
    coefficients and solved by an exact nullspace.
    """
    if not (repA.is_normal and repB.is_normal):
        raise ValueError("witness search needs normal representations")
    labels = repA.labels
    unknowns = []  # (label, which, k)
    for i in labels:
        for which in (0, 1):
            for k in range(degree + 1):
                unknowns.append((i, which, k))
    index = {u: n for n, u in enumerate(unknowns)}
    basis_fn = {}
    for c in repA.charts:
        h = c.open.h if c.open is not None else UniPoly.constant(1)
        den = h ** pole_order
        for k in range(degree + 1):
            basis_fn[c.label, k] = RatFunc(UniPoly.monomial(k), den)
    rows = []
    for i in labels:
        for j in labels:
            if i == j:
                continue
            G, H, Fi, Fj = repA.G[i, j], repB.G[i, j], repA.F[i], repA.F[j]
            # entry (r, s) of W_i G - H W_j as a linear combination of unknowns
            for r in range(2):
                for s in range(2):
                    combo = {}
                    for k in range(degree + 1):
                        bi, bj = basis_fn[i, k], basis_fn[j, k]
                        Wi_a = Mat2(bi, bi * 0, bi * 0, bi)
                        Wi_b = Mat2(bi * 0, bi * Fi, bi, bi * 0)
                        Wj_a = Mat2(bj, bj * 0, bj * 0, bj)
                        Wj_b = Mat2(bj * 0, bj * Fj, bj, bj * 0)
                        for which, Wi, Wj in ((0, Wi_a, Wj_a), (1, Wi_b, Wj_b)):
                            L = (Wi * G).rows()[r][s]
                            R = (H * Wj).rows()[r][s]
                            if not L.is_zero():
                                key = index[i, which, k]
                                combo[key] = combo.get(key, RatFunc(0)) + L
                            if not R.is_zero():
                                key = index[j, which, k]
                                combo[key] = combo.get(key, RatFunc(0)) - R
                    combo = {k: v for k, v in combo.items() if not v.is_zero()}
                    if not combo:
                        continue
                    den = UniPoly.constant(1)
                    for v in combo.values():
                        den = poly_lcm(den, v.den)
                    polys = {k: (v * RatFunc(den)).as_poly() for k, v in combo.items()}
                    top = max(p.degree for p in polys.values())
                    for d in range(top + 1):
                        row = [Fraction(0)] * len(unknowns)
                        for k, p in polys.items():
                            row[k] = p.coeff(d)
                        if any(row):
                            rows.append(row)
    basis = nullspace(rows, len(unknowns)) if rows else [
        [Fraction(int(a == b)) for a in range(len(unknowns))] for b in range(len(unknowns))
    ]

    def to_witness(vec):
        w = {}
        for i in labels:
            parts = []
            for which in (0, 1):
                acc = RatFunc(0)
                for k in range(degree + 1):
                    c = vec[index[i, which, k]]
                    if c:
                        acc = acc + basis_fn[i, k] * c
                parts.append(acc)
            w[i] = tuple(parts)
        return w

    candidates = list(basis)
    if len(basis) > 1:
        total = [sum(col) for col in zip(*basis)]
        candidates.append(total)
    for vec in candidates:
        w = to_witness(vec)
        if verify_equivalence_witness(repA, repB, w):
            return w
    return None
