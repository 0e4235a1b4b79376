import random

import pytest

from dcbundle.conic_p2 import (
    ConicCover, LineInP2, TWO_POINT_LINE, line_transition, random_lines, restrict_rep, two_point_pair,
)
from dcbundle.double_cover import (
    AdmissiblePairRep, Chart, branch_decompose, conjugate_pair, g_zero, group_law, inverse_pair,
    k_minus, k_plus, make_good, ramification_pair, section_norm, solve_equivalence_witness,
    twist_pair, validate_admissible, verify_equivalence_witness,
)
from dcbundle.exact_arith import X0, X1, X2, HomPoly3, Mat2, PlaneOpen, ProjFunc
from dcbundle.p1_bundles import split_p1

import gen

COVER = ConicCover()


def pf(n, d=1):
    return ProjFunc(n, d)


@pytest.fixture(scope="module")
def conic():
    return COVER.good_pair


@pytest.fixture(scope="module")
def two_point():
    return two_point_pair()


def normal_trivial(rep):
    """O_X on the cover of ``rep``: G = diag(1, xi), normal M."""
    return group_law([rep], [0])


def line_split(reps, n, line):
    t = group_law([restrict_rep(r, line.P, line.Q) for r in reps], n)
    y = group_law([restrict_rep(r, line.Q, line.P) for r in reps], n)
    return split_p1(line_transition(t, y)[0]).e


def raw_split(rep, line):
    t = restrict_rep(rep, line.P, line.Q)
    y = restrict_rep(rep, line.Q, line.P)
    return split_p1(line_transition(t, y)[0]).e


# -- validation ------------------------------------------------------------------------


def test_standard_pair_valid(conic):
    assert validate_admissible(conic).ok
    assert conic.is_good and not conic.is_normal


def _modified(rep, F=None, G=None):
    return AdmissiblePairRep(rep.charts, dict(rep.xi), F or dict(rep.F), G or dict(rep.G), dict(rep.M))


def test_validation_catches_branch_defect(conic):
    F = dict(conic.F)
    F[1] = F[1] + 1
    report = validate_admissible(_modified(conic, F=F))
    assert not report.ok
    assert any("a0^2 + a1*a2 != F" in m for m in report.failures)


def test_validation_catches_transition_defect(conic):
    G = dict(conic.G)
    G[1, 2] = G[1, 2] * 2
    assert not validate_admissible(_modified(conic, G=G)).ok


# -- good refinements -----------------------------------------------------------------


def test_make_good_chart0_cut(conic):
    assert conic.chart(0).open.cuts == (-2 * X0 + X1 - X2,)
    a0, a1, a2 = conic.M[0]
    assert a1 == pf(-2 * X0 + X1 - X2, X0)
    assert conic.chart(1).open.cuts == () and conic.chart(2).open.cuts == ()


def test_make_good_on_good_rep_is_relabeling(two_point):
    again = make_good(two_point)
    assert again.labels == ((0, 1), (1, 1))
    relabeled = again.relabel({(0, 1): 0, (1, 1): 1})
    assert all(relabeled.G[k] == two_point.G[k] for k in two_point.G)
    assert all(relabeled.M[i] == two_point.M[i] for i in two_point.labels)


def test_make_good_swap_piece(conic):
    # chart 2 of the plane pair has a1 = x1/x2, not a unit; a2 = x2/x2 is
    assert conic.M[2][1] == COVER.plane_pair.M[2][2]


def test_make_good_needs_choices():
    with pytest.raises(ValueError, match="cannot certify covering"):
        make_good(COVER.plane_pair)


# -- K matrices --------------------------------------------------------------------------


def test_k_plus_two_point(two_point):
    x01 = pf(X1, X0)
    assert k_plus(two_point, 0, 1) == Mat2(pf(0), x01, pf(1), pf(0))


def test_k_plus_conic_12(conic):
    x10, x12 = pf(X0, X1), pf(X2, X1)
    assert k_plus(conic, 1, 2) == Mat2(-x10, x10 * x10 + x12, pf(1), -x10)


def test_k_plus_normal_trivial_is_identity(conic):
    triv = normal_trivial(conic)
    for i in triv.labels:
        for j in triv.labels:
            if i != j:
                assert k_plus(triv, i, j) == Mat2.identity(pf(1))
                assert k_minus(triv, i, j) == Mat2.identity(pf(1))


def test_k_minus_two_point(two_point):
    # the defining formula gives +(1/x01) K+; a -E automorphism flips the sign
    x01 = pf(X1, X0)
    assert k_minus(two_point, 0, 1) == k_plus(two_point, 0, 1) * (1 / x01)


@pytest.mark.parametrize("which", ["conic", "two_point"])
def test_k_identity(which, conic, two_point):
    rep = conic if which == "conic" else two_point
    for i in rep.labels:
        for j in rep.labels:
            if i != j:
                ratio = rep.M[j][1] / rep.M[i][1]
                assert k_plus(rep, i, j) * k_minus(rep, i, j) == Mat2.identity(pf(1)) * ratio


# -- group law ----------------------------------------------------------------------------


def test_group_law_zero_is_g0(conic):
    out = group_law([conic], [0])
    for (i, j), g in out.G.items():
        assert g == g_zero(conic.xi[i, j])
    assert out.is_normal


@pytest.mark.parametrize("k", range(-3, 4))
def test_group_law_two_point_odd(k, two_point):
    out = group_law([two_point], [2 * k + 1])
    J = Mat2(pf(0), pf(1), pf(1), pf(0))
    assert out.G[0, 1] == J * pf(X1, X0) ** k


def test_group_law_outputs_valid(conic):
    for n in ([1], [2], [-1], [-2], [3]):
        assert validate_admissible(group_law([conic], n)).ok


def test_group_law_mixed_signs_scalar(conic):
    out = group_law([conic, conic], [1, -1])
    for (i, j), g in out.G.items():
        if i != j:
            assert g == g_zero(conic.xi[i, j]) * (conic.M[j][1] / conic.M[i][1])


def test_group_law_mismatched_covers(conic, two_point):
    with pytest.raises(ValueError):
        group_law([conic, two_point], [1, 1])


def test_group_law_monoid_consistency(conic):
    lines = [COVER.to_normal_line(L) for L in random_lines(COVER, 5, 17)]
    for a in range(3):
        for b in range(3):
            for L in lines:
                assert line_split([conic, conic], [a, b], L) == line_split([conic], [a + b], L)


# -- inverse and conjugate ---------------------------------------------------------------------


def test_inverse_of_normal_trivial(conic):
    triv = normal_trivial(conic)
    inv = inverse_pair(triv)
    for k, g in triv.G.items():
        assert inv.G[k] == g
    for i in triv.labels:
        assert inv.M[i] == tuple(-a for a in triv.M[i])
    assert validate_admissible(inv).ok


def test_inverse_renormalized_two_point(two_point):
    inv = inverse_pair(group_law([two_point], [1]))
    assert validate_admissible(inv).ok
    renorm = group_law([inv], [1])
    assert renorm.G[0, 1] == group_law([two_point], [-1]).G[0, 1]
    assert renorm.G[0, 1] == Mat2(pf(0), pf(1), pf(1), pf(0)) * pf(X0, X1)


def test_double_inverse_same_splitting(conic):
    once = group_law([conic], [1])
    twice = inverse_pair(inverse_pair(once))
    for L in random_lines(COVER, 3, 23):
        lam = COVER.to_normal_line(L)
        assert raw_split(twice, lam) == raw_split(once, lam)


def test_conjugate_involution(conic):
    back = conjugate_pair(conjugate_pair(conic))
    assert all(back.M[i] == conic.M[i] for i in conic.labels)
    assert all(back.G[k] == conic.G[k] for k in conic.G)


def test_conjugate_of_normal_not_normal(conic):
    triv = normal_trivial(conic)
    conj = conjugate_pair(triv)
    assert not conj.is_normal and validate_admissible(conj).ok


def test_conjugate_conic_pair_splitting(conic):
    conj = conjugate_pair(conic)
    assert validate_admissible(conj).ok
    for L in random_lines(COVER, 3, 31):
        lam = COVER.to_normal_line(L)
        assert line_split([conj], [1], lam) == (0, 0)
        assert line_split([conic], [1], lam) == (0, 0)


# -- ramification pair ------------------------------------------------------------------------


def test_ramification_pair_conic(conic):
    ram = ramification_pair(conic.charts, conic.F, conic.xi)
    assert validate_admissible(ram).ok
    for L in random_lines(COVER, 3, 41):
        assert raw_split(ram, COVER.to_normal_line(L)) == (1, 0)


def test_ramification_pair_two_point(two_point):
    ram = ramification_pair(two_point.charts, two_point.F, two_point.xi)
    assert raw_split(ram, TWO_POINT_LINE) == (1, 0)
    assert raw_split(ram, TWO_POINT_LINE) == line_split([two_point], [2], TWO_POINT_LINE)


def test_ramification_pair_constant():
    charts = (Chart(0, PlaneOpen(0)),)
    ram = ramification_pair(charts, {0: pf(X1 * X2, X0**2)}, {(0, 0): pf(1)})
    assert validate_admissible(ram).ok


def test_ramification_pair_incompatible(conic):
    F = dict(conic.F)
    F[2] = F[2] * 2
    with pytest.raises(ValueError):
        ramification_pair(conic.charts, F, conic.xi)


# -- section norms ----------------------------------------------------------------------------


def test_section_norm_unit_section(conic):
    triv = normal_trivial(conic)
    res = section_norm(triv, {i: (pf(1), pf(0)) for i in triv.labels})
    for i in triv.labels:
        assert res.h[i] == triv.M[i][1]
    assert res.glued


def _constant_section(rep, v):
    """Chart data (x_i, y_i) of the constant section v of the trivial bundle underlying the plane pair."""
    A = {0: Mat2(pf(1), pf(0), pf(1), pf(1)), 1: Mat2.identity(pf(1)), 2: Mat2(pf(0), pf(1), pf(1), pf(0))}
    out = {}
    for i in rep.labels:
        w = A[i].inverse().apply(v)
        a0, a1, _ = rep.M[i]
        y = w[1] / a1
        out[i] = (w[0] - a0 * y, y)
    return out


@pytest.mark.parametrize("v", [(1, 0), (0, 1), (2, -3)])
def test_section_norm_tautological_is_tangent(conic, v):
    res = section_norm(conic, _constant_section(conic, (pf(v[0]), pf(v[1]))))
    h = res.h[1]  # l / x1 with l linear
    form = (h.num * X1).exact_div(h.den)
    assert form.degree == 1
    assert COVER.is_tangent(LineInP2.from_form(form.linear_coeffs()))


def test_section_norm_rejects_non_section(conic):
    data = {i: (pf(1), pf(0)) for i in conic.labels}
    data[1] = (pf(X0, X1), pf(0))
    with pytest.raises(ValueError, match="not a global section"):
        section_norm(conic, data)


# -- branch decomposition ---------------------------------------------------------------------


def test_branch_decompose_conic_x1():
    a0, a1 = branch_decompose(X0**2 + X1 * X2, X1)
    assert (a0 == X0 or a0 == -X0) and a1 == X2


def test_branch_decompose_conic_x0():
    assert branch_decompose(X0**2 + X1 * X2, X0) is None


def test_branch_decompose_bad_f():
    with pytest.raises(ValueError):
        branch_decompose(X0**2, X0 * X1)
    with pytest.raises(ValueError):
        branch_decompose(X0**2, HomPoly3.zero())


def test_branch_decompose_random_roundtrip():
    rng = random.Random(13)
    for _ in range(30):
        l = rng.randint(1, 3)
        f = HomPoly3.linear([rng.randint(-3, 3) for _ in range(3)])
        if f.is_zero():
            continue
        a0, a1 = gen.rand_hom(rng, l), gen.rand_hom(rng, 2 * l - 1)
        F = a0 * a0 + f * a1
        if F.is_zero():
            continue
        b0, b1 = branch_decompose(F, f)
        assert b0 * b0 + f * b1 == F


# -- equivalence witnesses ----------------------------------------------------------------------


def test_identity_witness(conic):
    rep = group_law([conic], [1])
    w = {i: (pf(1), pf(0)) for i in rep.labels}
    assert verify_equivalence_witness(rep, rep, w)


def test_zero_witness_fails(conic):
    rep = group_law([conic], [1])
    w = {i: (pf(0), pf(0)) for i in rep.labels}
    assert not verify_equivalence_witness(rep, rep, w)


def test_witness_needs_normal(conic):
    with pytest.raises(ValueError):
        verify_equivalence_witness(conic, conic, {})


def test_witness_solved_between_two_computations(conic):
    L = COVER.to_normal_line(random_lines(COVER, 1, 5)[0])
    r = restrict_rep(conic, L.P, L.Q)
    A = group_law([r], [1])
    B = group_law([r, r], [2, -1])
    w = solve_equivalence_witness(A, B, degree=3, pole_order=1)
    assert w is not None
    assert verify_equivalence_witness(A, B, w)


def test_twist_pair_scales_transitions(conic):
    xs = (X0, X1, X2)
    eta = {(i, j): pf(xs[j], xs[i]) for i in conic.labels for j in conic.labels}
    tw = twist_pair(conic, eta)
    assert all(tw.G[k] == conic.G[k] * eta[k] for k in conic.G)
    assert validate_admissible(tw).ok
