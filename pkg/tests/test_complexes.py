"""Core chamber-complex behaviour on the hexagon and its relatives.

The hexagon is small enough that every expected value below was worked
out by hand on the labelled 6-cycle (vertices v0..v5, chambers
ek = {vk, vk+1 mod 6}) before being frozen here.
"""

import pytest

from chambers import catalog
from chambers.complexes import Complex, EMPTY_FACE, bits_of, submasks
from chambers.errors import (
    Disconnected,
    GatePropertyFails,
    NotAFace,
    NotPure,
    ScaleExceeded,
)

HEX = catalog.get("hexagon").complex
PETERSEN = catalog.get("petersen").complex


def test_counts_and_repr():
    assert len(HEX.vertex_names) == 6
    assert len(HEX.chambers) == 6
    assert len(HEX) == 13          # empty + 6 vertices + 6 edges
    assert HEX.rank == 2
    assert "chambers=6" in repr(HEX)


def test_face_tokens_round_trip():
    assert HEX.parse_face("-") == EMPTY_FACE
    assert HEX.face_token(EMPTY_FACE) == "-"
    m = HEX.face_from_names(["v1", "v0"])
    assert HEX.face_token(m) == "v0,v1"
    assert HEX.parse_face("v0,v1") == m
    # chambers resolve by display name or by vertex-set token
    assert HEX.parse_chamber("e2") == HEX.parse_chamber("v2,v3")


def test_bad_tokens():
    with pytest.raises(NotAFace):
        HEX.parse_face("v9")
    with pytest.raises(NotAFace):
        HEX.parse_face("v0,v2")     # not a face of the cycle
    with pytest.raises(NotAFace):
        HEX.parse_chamber("v0")     # a face, but not a chamber


def test_adjacency_is_the_cycle():
    for ci, nbrs in enumerate(HEX.adjacency):
        assert sorted(nbrs) == sorted([(ci - 1) % 6, (ci + 1) % 6])


def test_distances_and_diameter():
    assert list(HEX.distances_from(0)) == [0, 1, 2, 3, 2, 1]
    assert HEX.diameter() == 3
    for a in range(6):
        for b in range(6):
            assert HEX.gallery_distance(a, b) == HEX.gallery_distance(b, a)


def test_geodesics():
    assert HEX.geodesic_count(0, 3) == 2
    gals, capped = HEX.geodesics(0, 3)
    assert sorted(gals) == [(0, 1, 2, 3), (0, 5, 4, 3)]
    assert not capped
    gals, capped = HEX.geodesics(0, 3, cap=1)
    assert len(gals) == 1 and capped
    assert HEX.is_on_geodesic(0, 1, 3)
    assert not HEX.is_on_geodesic(0, 4, 2)


def test_convexity():
    assert HEX.is_convex([0, 1]) == (True, None)
    assert HEX.is_convex(range(6))[0]
    ok, witness = HEX.is_convex([0, 2])
    assert not ok and witness == (0, 1, 2)
    assert not HEX.is_convex([0, 3])[0]


def test_thinness():
    assert HEX.is_thin() == (True, None)
    ok, wall = PETERSEN.is_thin()
    assert not ok and PETERSEN.face_rank[wall] == 1
    assert not catalog.get("building-3-2").complex.is_thin()[0]


def test_gate():
    v1 = HEX.parse_face("v1")
    assert HEX.gate(v1, 3) == 1
    assert HEX.gate(v1, 0) == 0
    p12 = PETERSEN.parse_face("p12")
    with pytest.raises(GatePropertyFails):
        PETERSEN.gate(p12, PETERSEN.parse_chamber("p13,p24"))


def test_gate_property_report():
    rep = HEX.check_gate_property()
    assert rep.passed
    assert len(rep.gates) == 13 * 6
    rep = PETERSEN.check_gate_property()
    assert not rep.passed
    assert rep.violation_count == 60
    assert len(rep.violations) == 50          # default keep
    assert {v.kind for v in rep.violations} == {"tie"}
    rep = PETERSEN.check_gate_property(keep=1000)
    assert len(rep.violations) == 60


def test_descent_face():
    assert HEX.descent_face(0, 0) == EMPTY_FACE
    assert HEX.descent_face(0, 1) == HEX.parse_face("v2")
    assert HEX.descent_face(0, 2) == HEX.parse_face("v3")
    # the antipodal chamber descends on its whole vertex set
    assert HEX.descent_face(0, 3) == HEX.chambers[3]


def test_euler_reduced():
    assert HEX.euler_reduced() == -1
    assert HEX.euler_reduced(max_rank=1) == 5
    assert HEX.euler_reduced(max_rank=0) == -1


def test_link():
    link, cmap = HEX.link(HEX.parse_face("v0"))
    assert len(link.chambers) == 2
    assert set(cmap) == {0, 5}
    assert link.is_thin()
    with pytest.raises(NotAFace):
        HEX.link(0b101)


def test_restrict():
    sub, ids = HEX.restrict([0, 1, 2])
    assert ids == (0, 1, 2)
    assert len(sub.chambers) == 3
    assert not sub.is_thin()[0]   # the two end walls are boundary
    with pytest.raises(Disconnected):
        HEX.restrict([0, 3])


def test_types():
    assert HEX.types is not None
    assert HEX.type_token(HEX.full_type_mask) == "s,t"
    v0 = HEX.parse_face("v0")
    assert HEX.type_token(HEX.face_type_mask(v0)) == "s"
    assert HEX.face_type_mask(HEX.chambers[0]) == HEX.full_type_mask


def test_construction_errors():
    with pytest.raises(NotPure):
        Complex([["a", "b"], ["b"]])
    with pytest.raises(Disconnected):
        Complex([["a", "b"], ["c", "d"]])
    with pytest.raises(ScaleExceeded):
        Complex([["a", "b", "c"]], max_faces=3)


def test_bit_helpers():
    assert bits_of(0b1011) == [0, 1, 3]
    subs = list(submasks(0b101))
    assert subs[0] == 0b101 and subs[-1] == 0
    assert set(subs) == {0b101, 0b100, 0b001, 0}
