"""Seeded random generators shared by the property and acceptance tests."""

import random
from fractions import Fraction

from dcbundle.exact_arith import HomPoly3, Mat2, RatFunc, UniPoly
from dcbundle.p1_bundles import E2, ONE, ZERO


def rand_poly(rng: random.Random, deg: int, lo: int = -3, hi: int = 3) -> UniPoly:
    return UniPoly([rng.randint(lo, hi) for _ in range(deg + 1)])


def rand_nonzero_poly(rng, deg):
    while True:
        p = rand_poly(rng, deg)
        if not p.is_zero():
            return p


def rand_gl(rng: random.Random, in_y: bool = False) -> Mat2:
    """Product of up to four elementary/diagonal factors with polynomial entries in x (or y = 1/x)."""
    M = E2
    for _ in range(rng.randint(1, 4)):
        kind = rng.randint(0, 2)
        r = RatFunc(rand_poly(rng, rng.randint(0, 4)))
        if in_y:
            r = r.invert_variable()
        if kind == 0:
            M = M * Mat2(ONE, r, ZERO, ONE)
        elif kind == 1:
            M = M * Mat2(ONE, ZERO, r, ONE)
        else:
            c1 = RatFunc(rng.choice([1, -2, 3]))
            c2 = RatFunc(rng.choice([1, Fraction(1, 2), -1]))
            M = M * Mat2(c1, ZERO, ZERO, c2)
    return M


def birkhoff_case(rng: random.Random):
    e1, e2 = sorted((rng.randint(-5, 5), rng.randint(-5, 5)), reverse=True)
    D = Mat2(RatFunc.monomial(e1), ZERO, ZERO, RatFunc.monomial(e2))
    return rand_gl(rng) * D * rand_gl(rng, in_y=True), (e1, e2)


def rand_hom(rng: random.Random, degree: int, lo: int = -4, hi: int = 4) -> HomPoly3:
    terms = {}
    for i in range(degree + 1):
        for j in range(degree + 1 - i):
            if rng.random() < 0.6:
                terms[(i, j, degree - i - j)] = rng.randint(lo, hi)
    return HomPoly3(terms)


def rand_local_frame(rng: random.Random, h: UniPoly) -> Mat2:
    """Random matrix in GL(2, O(D(h))): elementary factors with poles along h and diagonal h-powers."""
    hinv = RatFunc(UniPoly.constant(1), h)
    M = E2
    for _ in range(rng.randint(1, 3)):
        kind = rng.randint(0, 2)
        r = RatFunc(rand_poly(rng, rng.randint(0, 2))) * hinv ** rng.randint(0, 2)
        if kind == 0:
            M = M * Mat2(ONE, r, ZERO, ONE)
        elif kind == 1:
            M = M * Mat2(ONE, ZERO, r, ONE)
        else:
            M = M * Mat2(RatFunc(h) ** rng.randint(-2, 2) * rng.choice([1, -1, 2]), ZERO, ZERO,
                         RatFunc(h) ** rng.randint(-2, 2))
    return M


def rand_affine_cocycle(rng: random.Random):
    """2- or 3-chart cover of the affine line by D(h_i) with distinct roots, G_ij = C_i C_j^-1."""
    from dcbundle.exact_arith import DistinguishedOpen
    from dcbundle.p1_bundles import AffineCocycle

    m = rng.choice([2, 3])
    roots = rng.sample(range(-5, 6), m + 1)
    groups = [[roots[i]] for i in range(m)]
    groups[rng.randrange(m)].append(roots[m])
    hs = []
    for g in groups:
        h = UniPoly.constant(1)
        for r in g:
            h = h * UniPoly([-r, 1])
        hs.append(h)
    C = [rand_local_frame(rng, h) for h in hs]
    Cinv = [c.inverse() for c in C]
    table = {(i, j): C[i] * Cinv[j] for i in range(m) for j in range(m)}
    return AffineCocycle([DistinguishedOpen(h) for h in hs], table)
