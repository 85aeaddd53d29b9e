"""Face walks and the commutation conditions.

Two stationary distributions are pinned against closed forms computed
independently of the walk code:

* the move-to-front chain on the free band: pick letter a_i with
  probability p_i, so a linear order a_1..a_n has weight
  prod_i p_i / (1 - p_1 - .. - p_{i-1});
* the coordinate-plane chain with weights on rays: each axis settles
  its sign independently, giving pi(signs) = prod p(ray)/p(axis).

Both are additionally re-solved here as exact nullspaces with sympy.
"""

from fractions import Fraction

import pytest
import sympy

from chambers import catalog, structures, walks
from chambers.complexes import EMPTY_FACE
from chambers.errors import (
    FormatError,
    OracleMismatch,
    RankMismatch,
    ReducibleChain,
)
from chambers.lrb import free_lrb

HEX = catalog.get("hexagon").complex


def sympy_stationary(result):
    n = len(result.states)
    m = sympy.Matrix(n, n, lambda i, j: sympy.Rational(
        result.matrix[i][j].numerator, result.matrix[i][j].denominator))
    null = (m.T - sympy.eye(n)).nullspace()
    assert len(null) == 1
    vec = null[0]
    total = sum(vec)
    return [sympy.nsimplify(v / total) for v in vec]


def check_against_sympy(result):
    want = sympy_stationary(result)
    got = [sympy.Rational(p.numerator, p.denominator)
           for p in result.stationary]
    assert got == want


def test_tsetlin_library():
    band = free_lrb(3)
    w = {band.name_index["1"]: Fraction(1, 2),
         band.name_index["2"]: Fraction(1, 4),
         band.name_index["3"]: Fraction(1, 4)}
    res = walks.walk_band(band, w)
    assert dict(zip(res.states, res.stationary)) == {
        "1,2,3": Fraction(1, 4), "1,3,2": Fraction(1, 4),
        "2,1,3": Fraction(1, 6), "2,3,1": Fraction(1, 12),
        "3,1,2": Fraction(1, 6), "3,2,1": Fraction(1, 12)}
    assert not res.uniform
    check_against_sympy(res)
    assert "pi 1,2,3 = 1/4" in res.render().splitlines()
    assert "pi\t1,2,3\t1/4" in res.render("tsv").splitlines()


def test_coordinate_walk_product_form():
    c = catalog.get("octants").complex
    p = structures.metric_structure(c).projection
    ray = {name: Fraction(k, 12) for name, k in
           [("x+", 2), ("x-", 1), ("y+", 3), ("y-", 1), ("z+", 4), ("z-", 1)]}
    w = {c.parse_face(name): q for name, q in ray.items()}
    res = walks.walk_complex(c, p, w)
    axis = {a: ray[a + "+"] + ray[a + "-"] for a in "xyz"}
    dist = dict(zip(res.states, res.stationary))
    for name, prob in dist.items():
        want = Fraction(1)
        for a, s in zip("xyz", name):
            want *= ray[a + s] / axis[a]
        assert prob == want
    assert dist["+++"] == Fraction(2, 5)
    assert dist["---"] == Fraction(1, 60)
    check_against_sympy(res)


def test_uniform_walks():
    band = free_lrb(3)
    res = walks.walk_band(band, walks.uniform_rank_weights(band, 1))
    assert res.uniform and res.stationary[0] == Fraction(1, 6)

    p = structures.metric_structure(HEX).projection
    allw = {f: Fraction(1, len(HEX.faces)) for f in HEX.faces}
    res = walks.walk_complex(HEX, p, allw)
    assert res.uniform and res.stationary[0] == Fraction(1, 6)


def test_absorbing_walk():
    p = structures.metric_structure(HEX).projection
    res = walks.walk_complex(
        HEX, p, {HEX.chambers[0]: Fraction(1, 2), EMPTY_FACE: Fraction(1, 2)})
    assert res.stationary == [Fraction(1), 0, 0, 0, 0, 0]
    assert res.terminal == (0,)
    assert not res.uniform


def test_two_chamber_weights_still_converge():
    # both chambers keep moving the walk, so the terminal class is joint
    p = structures.metric_structure(HEX).projection
    res = walks.walk_complex(
        HEX, p, {HEX.chambers[0]: Fraction(1, 2),
                 HEX.chambers[3]: Fraction(1, 2)})
    assert sorted(res.terminal) == [0, 3]
    assert res.stationary[0] == res.stationary[3] == Fraction(1, 2)


def test_reducible_chains_rejected():
    band = free_lrb(3)
    with pytest.raises(ReducibleChain):
        walks.walk_band(band, {band.name_index["1"]: Fraction(1)})
    p = structures.metric_structure(HEX).projection
    with pytest.raises(ReducibleChain):
        walks.walk_complex(HEX, p, {HEX.parse_face("v0"): Fraction(1)})


def test_weight_validation():
    p = structures.metric_structure(HEX).projection
    with pytest.raises(FormatError):
        walks.walk_complex(HEX, p, {})
    with pytest.raises(FormatError):
        walks.walk_complex(HEX, p, {EMPTY_FACE: Fraction(3, 2)})
    with pytest.raises(FormatError):
        walks.walk_complex(HEX, p, {EMPTY_FACE: Fraction(3, 2),
                                    HEX.chambers[0]: Fraction(-1, 2)})


def test_commutativity_of_free_bands():
    rep = walks.check_commutativity(free_lrb(3))
    assert rep.ok
    assert [l.check_id for l in rep.checks] == [
        "commutation.1-2", "commutation.1-3", "commutation.2-3"]
    assert walks.check_commutativity(free_lrb(2)).ok


def test_uniformity_reports():
    assert walks.check_uniformity(free_lrb(3)).ok
    from chambers.arrangements import braid_arrangement
    rep = walks.check_uniformity(braid_arrangement(3).lrb())
    assert rep.ok
    assert rep.verdict("uniformity.implies-commutation")


def test_wall_arrangement_breaks_commutativity():
    """Restricting the rank-5 type-D reflection arrangement to one of its
    walls yields a simplicial rank-4 arrangement on which five of the six
    rank-pair commutation identities fail."""
    band = catalog.get("d5-wall").arrangement.lrb()
    rep = walks.check_commutativity(band)
    verdicts = {l.check_id: l.passed for l in rep.checks}
    assert verdicts == {
        "commutation.1-2": False,
        "commutation.1-3": False,
        "commutation.1-4": False,
        "commutation.2-3": False,
        "commutation.2-4": False,
        "commutation.3-4": True,
    }


def test_type_commutativity():
    p = structures.metric_structure(HEX).projection
    rep = walks.check_type_commutativity(HEX, p)
    assert rep.ok
    assert [l.check_id for l in rep.checks] == [
        "commutation.type--", "commutation.type-s",
        "commutation.type-t", "commutation.type-s,t"]


def test_rank3_harness():
    for name in ("octants", "coxeter-a3"):
        rep = walks.rank3_harness(catalog.get(name).arrangement)
        assert rep.ok, name
    rep = walks.rank3_harness(catalog.get("generic-4").arrangement)
    verdicts = {l.check_id: l.passed for l in rep.checks}
    assert verdicts == {
        "rank3.simplicial": False,
        "rank3.commutation-1-2": False,
        "rank3.commutation-1-3": False,
        "rank3.commutation-2-3": False,
        "rank3.walk-uniform": False,
        "rank3.equivalence": True,
    }
    with pytest.raises(RankMismatch):
        walks.rank3_harness(catalog.get("braid-a2").arrangement)


def test_uniform_weight_helpers():
    band = free_lrb(3)
    w = walks.uniform_rank_weights(band, 2)
    assert len(w) == 6 and sum(w.values()) == 1
    with pytest.raises(RankMismatch):
        walks.uniform_rank_weights(band, 9)
    w = walks.uniform_type_weights(HEX, HEX.face_type_mask(HEX.parse_face("v0")))
    assert len(w) == 3 and sum(w.values()) == 1
    with pytest.raises(RankMismatch):
        walks.uniform_type_weights(HEX, 99)
