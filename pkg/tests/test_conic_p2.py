from fractions import Fraction

import pytest

from dcbundle.conic_p2 import (
    ConicCover, LineInP2, family_in_span, find_rational_point, global_sections, jumping_scan,
    line_transition, sample_section_family, pull_back_line, random_lines, restrict_rep,
    section_image_degree, splitting_on_line, tangent_lines,
)
from dcbundle.double_cover import group_law, validate_admissible
from dcbundle.exact_arith import X0, X1, X2, HomPoly3, sqrt_poly, poly_gcd_many

H = Fraction(1, 2)
COVER = ConicCover()


@pytest.fixture(scope="module")
def transversal():
    return random_lines(COVER, 5, 2024)


# -- cover and lines ------------------------------------------------------------------------


def test_default_cover():
    assert COVER.F == X0**2 + X1 * X2
    assert COVER.normalization[2] == 1


def test_singular_conic_rejected():
    with pytest.raises(ValueError, match="singular"):
        ConicCover(X0**2 + X1**2)
    with pytest.raises(ValueError):
        ConicCover(X0 * X1 * X2)


def test_pointless_conic_rejected():
    cover = ConicCover(X0**2 + X1**2 + X2**2)
    with pytest.raises(ValueError, match="no rational point"):
        cover.normalization


def test_normalization_congruence():
    F = X0**2 - 2 * X1**2 + 3 * X0 * X2 - X2**2 + X1 * X2
    cover = ConicCover(F)
    R, T, mu = cover.normalization
    y = [HomPoly3.linear(row) for row in T]  # x = T y
    assert F.substitute(y) == (X0**2 + X1 * X2) * mu


def test_rational_point_search():
    p = find_rational_point(X0**2 - 2 * X1**2 + X2**2)
    assert p is not None and (X0**2 - 2 * X1**2 + X2**2)(p) == 0


def test_line_parameterization():
    for form in [(1, 2, 3), (0, 1, 5), (0, 0, 1), (0, 3, 0), (Fraction(-2, 3), 0, 7)]:
        L = LineInP2.from_form(form)
        lin = HomPoly3.linear(L.form)
        assert lin(L.P) == 0 and lin(L.Q) == 0


def test_line_errors():
    with pytest.raises(ValueError):
        LineInP2.from_form((0, 0, 0))
    with pytest.raises(ValueError):
        LineInP2((1, 0, 0), (0, 1, 0), (0, 2, 0))
    with pytest.raises(ValueError):
        LineInP2((1, 0, 0), (1, 1, 0), (0, 0, 1))


def test_tangent_classification():
    assert COVER.is_tangent(LineInP2.from_form((0, 1, 0)))
    assert not COVER.is_tangent(LineInP2.from_form((1, 0, 0)))
    assert not COVER.is_tangent(LineInP2.from_form((1, 1, 1)))


def test_tangent_lines_family():
    L, = tangent_lines(COVER, [H])
    assert L.form == (1, -H, H)
    assert sqrt_poly(COVER.restricted_branch(L)) is not None
    L2, = tangent_lines(COVER, [-H])
    assert L2.form == (1, H, -H)
    with pytest.raises(ValueError):
        tangent_lines(COVER, [0])


def test_conic_transform_lines():
    L1, L2 = pull_back_line((0, 1, 0)), pull_back_line((0, 0, 1))
    assert L1.form == (1, -H, H)
    assert L2.form == (1, H, -H)
    assert COVER.is_tangent(L1) and COVER.is_tangent(L2)


def test_random_lines_reproducible_and_transversal():
    a = random_lines(COVER, 6, 99)
    assert a == random_lines(COVER, 6, 99)
    assert not any(COVER.is_tangent(L) for L in a)
    assert len({L.form for L in a}) == 6


# -- restriction ---------------------------------------------------------------------------------


def _sides(L, n=1):
    good = COVER.good_pair
    t = group_law([restrict_rep(good, L.P, L.Q)], [n])
    y = group_law([restrict_rep(good, L.Q, L.P)], [n])
    return t, y


def test_restrict_tangent_two_chart():
    L, = tangent_lines(COVER, [H])
    t, y = _sides(L)
    assert line_transition(t, y)[1] == "two-chart"


def test_restrict_coordinate_line_two_chart():
    t, y = _sides(LineInP2.from_form((1, 0, 0)))
    assert line_transition(t, y)[1] == "two-chart"


def test_restrict_random_line_valid(transversal):
    for L in transversal:
        t, y = _sides(L)
        for side in (t, y):
            assert validate_admissible(side).ok
            assert poly_gcd_many([c.open.h for c in side.charts]).degree == 0


def test_restrict_uses_affine_trivialization_somewhere():
    # x1 = 0 meets U_1 nowhere and U_0 only away from the cut
    t, y = _sides(LineInP2.from_form((0, 1, 0)))
    assert line_transition(t, y)[1] == "affine-trivialization"


# -- splitting types ----------------------------------------------------------------------------


def test_splitting_examples(transversal):
    L, = tangent_lines(COVER, [3])
    assert splitting_on_line(COVER, 3, transversal[0]).e == (1, 1)
    assert splitting_on_line(COVER, 3, L).e == (2, 0)
    assert splitting_on_line(COVER, 0, L).e == (0, -1)
    assert splitting_on_line(COVER, 0, transversal[1]).e == (0, -1)


def test_structure_sheaf_characterization(transversal):
    for L in transversal:
        assert splitting_on_line(COVER, 0, L).e == (0, -1)
        assert splitting_on_line(COVER, 1, L).e != (0, -1)


@pytest.mark.parametrize("n", [-3, -2, -1])
def test_negative_powers_transversal(n, transversal):
    k, r = divmod(n, 2)
    expected = (k, k) if r else (k, k - 1)
    assert splitting_on_line(COVER, n, transversal[0]).e == expected


def test_non_default_conic_reproduces_pattern():
    cover = ConicCover(X0**2 - 2 * X1**2 + 3 * X0 * X2 - X2**2 + X1 * X2)
    lines = random_lines(cover, 2, 7)
    tangents = tangent_lines(cover, [H, 2])
    assert all(cover.is_tangent(L) for L in tangents)
    for n in range(5):
        k, r = divmod(n, 2)
        for L in lines:
            assert splitting_on_line(cover, n, L).e == ((k, k) if r else (k, k - 1))
        for L in tangents:
            assert splitting_on_line(cover, n, L).e == tuple(sorted((n - 1, 0), reverse=True))


# -- scans ---------------------------------------------------------------------------------------


def test_scan_flags_tangents_n5(transversal):
    lines = random_lines(COVER, 10, 1) + tangent_lines(COVER, [H, -H, 3])
    rows = jumping_scan(COVER, 5, lines)
    assert [r.line for r in rows] == lines
    for r in rows[:10]:
        assert r.splitting == (2, 2) and not r.is_jumping and not r.tangent
    for r in rows[10:]:
        assert r.splitting == (4, 0) and r.is_jumping and r.tangent


@pytest.mark.parametrize("n", [0, 2])
def test_scan_no_flags_small_n(n, transversal):
    rows = jumping_scan(COVER, n, transversal + tangent_lines(COVER, [H, 3]))
    assert not any(r.is_jumping for r in rows)


def test_scan_parallel_matches_serial(transversal):
    lines = transversal + tangent_lines(COVER, [H])
    assert jumping_scan(COVER, 4, lines, jobs=3) == jumping_scan(COVER, 4, lines, jobs=1)


def test_scan_empty():
    with pytest.raises(ValueError):
        jumping_scan(COVER, 1, [])


# -- global sections ------------------------------------------------------------------------------


@pytest.mark.parametrize("bidegree,bound,dim", [((0, 0), 2, 1), ((1, 1), 2, 4), ((2, 1), 3, 6), ((4, 2), 4, 15)])
def test_section_dimensions(bidegree, bound, dim):
    b = global_sections(COVER, bidegree, bound)
    assert b.dimension == dim
    assert b.saturated
    k1, k2 = bidegree
    assert dim == (k1 + 1) * (k2 + 1)


def test_standard_pair_sections():
    assert global_sections(COVER, (1, 0), 1).dimension == 2
    assert global_sections(COVER, (1, 0), 1).saturated
    # in the normal frame the two sections are not constants
    assert not global_sections(COVER, (1, 0), 0).saturated


def test_sections_negative_bound():
    with pytest.raises(ValueError):
        global_sections(COVER, (1, 1), -1)


def test_example_family_spans_solution_space():
    b = global_sections(COVER, (4, 2), 4)
    inside, r = family_in_span(b, sample_section_family())
    assert inside and r == 15
    s1 = set().union(*(set(s[0]) for s in b.basis))
    s2 = set().union(*(set(s[1]) for s in b.basis))
    fam = sample_section_family()
    assert s1 == set().union(*(set(s[0]) for s in fam))
    assert s2 == set().union(*(set(s[1]) for s in fam))
    assert max(a + c for a, c in s1) == 4 and max(a + c for a, c in s2) == 3


def test_image_degree_generic():
    fam = sample_section_family()
    s = ({}, {})
    for k, (p1, p2) in enumerate(fam, start=1):
        for part, p in zip(s, (p1, p2)):
            for m, c in p.items():
                part[m] = part.get(m, 0) + c * k
    h, degree = section_image_degree(COVER, s, (4, 2))
    assert degree == 6


def test_image_degree_pullback_section():
    f = {(0, 0): Fraction(1), (1, 0): Fraction(2), (0, 1): Fraction(-1)}  # 1 + 2*x20 - x21
    h, degree = section_image_degree(COVER, (f, {}), (1, 1))
    assert degree == 2
    expect = {}
    for m1, c1 in f.items():
        for m2, c2 in f.items():
            k = (m1[0] + m2[0], m1[1] + m2[1])
            expect[k] = expect.get(k, 0) + c1 * c2
    assert h == {k: v for k, v in expect.items() if v}


def test_image_degree_unit_section():
    h, degree = section_image_degree(COVER, ({(0, 0): Fraction(1)}, {}), (0, 0))
    assert h == {(0, 0): 1} and degree == 0
