"""Flag complexes of F_q^n: counts, distances, retractions, duality.

The polynomial coefficients frozen below come from the permutation
statistic: h_J(q) = sum of q^inv(w) over w in S_n with descent set J.
That table was computed first, directly over the symmetric group, and
the building code is required to reproduce it.
"""

import pytest

from chambers import catalog
from chambers.buildings import (
    IntPoly,
    build_building,
    check_counts,
    check_duality_lemma,
    check_gate,
    check_retraction,
    descent_polynomials,
    gaussian_binomial,
    hq_polynomials,
    inversions,
    q_factorial,
    q_int,
    render_hq_table,
)
from chambers.errors import NonPrimeField, NotOpposite, ScaleExceeded

HQ4 = {
    (): (1,),
    (1,): (0, 1, 1, 1),
    (2,): (0, 1, 2, 1, 1),
    (3,): (0, 1, 1, 1),
    (1, 2): (0, 0, 0, 1, 1, 1),
    (1, 3): (0, 0, 1, 1, 2, 1),
    (2, 3): (0, 0, 0, 1, 1, 1),
    (1, 2, 3): (0, 0, 0, 0, 0, 0, 1),
}


def bld(n, q):
    return catalog.get(f"building-{n}-{q}").building


def test_q_arithmetic():
    assert [q_int(k, 2) for k in range(1, 5)] == [1, 3, 7, 15]
    assert q_factorial(3, 2) == 21
    assert q_factorial(4, 2) == 315
    assert q_factorial(3, 3) == 52
    assert gaussian_binomial(4, 2, 2) == 35
    assert inversions((2, 0, 1)) == 2


def test_scale_guards():
    with pytest.raises(NonPrimeField):
        build_building(3, 4)
    with pytest.raises(ScaleExceeded):
        build_building(3, 5)
    with pytest.raises(ScaleExceeded):
        build_building(5, 2)
    with pytest.raises(ScaleExceeded):
        build_building(2, 2)


def test_counts():
    for n, q, chambers, frames, per_chamber in [
            (3, 2, 21, 28, 8), (4, 2, 315, 840, 64), (3, 3, 52, 234, 27)]:
        b = bld(n, q)
        assert len(b.complex.chambers) == chambers
        assert len(b.frames) == frames
        assert len(b.apartments_containing(b.standard_chamber())) == \
            per_chamber
        assert check_counts(b).ok


def test_w_distance():
    b = bld(3, 2)
    c = b.standard_chamber()
    cbar = b.standard_opposite()
    assert b.w_distance(c, c) == (1, 2, 3)
    assert b.w_distance(c, cbar) == b.longest_element
    dist = b.complex.distances_from(c)
    for d in range(len(b.complex.chambers)):
        assert dist[d] == inversions(b.w_distance(c, d))


def test_opposites():
    b = bld(3, 2)
    c = b.standard_chamber()
    opp = b.opposite_chambers(c)
    assert len(opp) == 8            # q^3
    assert b.standard_opposite() in opp
    frame = b.frame_of_opposite_pair(c, b.standard_opposite())
    assert tuple(sorted(frame)) == b.standard_frame()
    with pytest.raises(NotOpposite):
        b.frame_of_opposite_pair(c, c)


def test_retraction_fixes_the_apartment():
    b = bld(3, 2)
    frame = b.standard_frame()
    base = b.standard_chamber()
    rho = b.retraction_map(frame, base)
    for ci in b.apartment_chambers(frame):
        assert rho[ci] == ci
    for d in range(len(b.complex.chambers)):
        assert b.w_distance(base, rho[d]) == b.w_distance(base, d)
    assert check_retraction(b).ok
    assert check_gate(b).ok


def test_duality_lemma_all_sizes():
    for n, q in [(3, 2), (4, 2), (3, 3)]:
        rep = check_duality_lemma(bld(n, q))
        assert rep.ok, (n, q)
    ids = [l.check_id for l in check_duality_lemma(bld(3, 2)).checks]
    assert ids == [
        "duality.product-identity", "duality.inversion-formulas",
        "duality.length-additive", "duality.marker-bijection",
        "duality.pair-bijection", "duality.descent-complement",
        "duality.apartment-convex"]


def test_hq_polynomials_n4():
    polys, rep = hq_polynomials(bld(4, 2))
    assert rep.ok
    assert {j: p.coeffs for j, p in polys.items()} == HQ4
    assert polys[(2,)].render() == "q + 2q^2 + q^3 + q^4"
    vals = [polys[j](2) for j in sorted(HQ4, key=lambda t: (len(t), t))]
    assert vals == [1, 14, 34, 14, 56, 76, 56, 64]
    assert sum(vals) == 315


def test_hq_polynomials_n3():
    for q, total in [(2, 21), (3, 52)]:
        polys, rep = hq_polynomials(bld(3, q))
        assert rep.ok
        assert polys[(1,)].coeffs == (0, 1, 1)
        assert polys[(2,)].coeffs == (0, 1, 1)
        assert polys[(1, 2)].coeffs == (0, 0, 0, 1)
        assert sum(p(q) for p in polys.values()) == total


def test_hq_duality_coefficientwise():
    for n, q in [(3, 2), (4, 2)]:
        polys, _ = hq_polynomials(bld(n, q))
        full = tuple(range(1, n))
        top = polys[full].degree
        for j, p in polys.items():
            comp = tuple(sorted(set(full) - set(j)))
            assert polys[comp].reversed_to_degree(top) == p, (n, j)


def test_hq_at_one_is_the_descent_count():
    for n in (3, 4):
        polys, _ = hq_polynomials(bld(n, 2))
        for j, p in polys.items():
            assert p(1) == descent_polynomials(n)[j](1)


def test_descent_polynomials():
    d3 = descent_polynomials(3)
    assert {j: p.render() for j, p in sorted(d3.items())} == {
        (): "1", (1,): "q + q^2", (2,): "q + q^2", (1, 2): "q^3"}
    d4 = descent_polynomials(4)
    assert {j: p.coeffs for j, p in d4.items()} == HQ4


def test_render_hq_table():
    polys, _ = hq_polynomials(bld(3, 2))
    assert render_hq_table(polys) == [
        "h[{}] = 1",
        "h[{1}] = q + q^2",
        "h[{2}] = q + q^2",
        "h[{1,2}] = q^3",
    ]


def test_intpoly():
    p = IntPoly((0, 1, 1))
    assert p.render() == "q + q^2"
    assert p(3) == 12
    assert (p + IntPoly((1,))).coeffs == (1, 1, 1)
    assert (p * p).coeffs == (0, 0, 1, 2, 1)
    assert (p * 2).coeffs == (0, 2, 2)
    assert p.reversed_to_degree(3).coeffs == (0, 1, 1)
    assert IntPoly.monomial(3).coeffs == (0, 0, 0, 1)
    assert IntPoly((0, 0)).coeffs == ()


def test_building_complex_is_gated_not_thin():
    b = bld(3, 2)
    assert not b.complex.is_thin()[0]
    assert b.complex.check_gate_property().passed
