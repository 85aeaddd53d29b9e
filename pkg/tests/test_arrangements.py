"""Sign-vector enumeration of hyperplane arrangements.

Face and chamber counts below were frozen from an early enumeration run
after cross-checking each against the standard counting arguments (the
braid arrangement on three letters has 13 faces: the origin, six rays,
six open sectors; the three coordinate planes cut space into 27 sign
vectors; the type-A and type-B reflection arrangements have 24 and 48
chambers).
"""

import pytest

from chambers.arrangements import (
    Arrangement,
    _primitive,
    boolean_arrangement,
    braid_arrangement,
    coxeter_arrangement,
    generic_arrangement,
)
from chambers.errors import (
    DegenerateNormal,
    RealizabilityFailure,
    ScaleExceeded,
)

# (hyperplanes, faces, chambers, rank, simplicial)
PROFILES = {
    "braid-a2": (3, 13, 6, 2, True),
    "octants": (3, 27, 8, 3, True),
    "coxeter-a3": (6, 75, 24, 3, True),
    "coxeter-b3": (9, 147, 48, 3, True),
    "coxeter-d4": (12, 865, 192, 4, True),
    "generic-4": (4, 51, 14, 3, False),
    "d5-wall": (13, 1073, 240, 4, True),
}


def profile(arr):
    return (len(arr.normals), len(arr.faces), len(arr.chambers),
            arr.rank, arr.is_simplicial())


def test_catalog_profiles():
    from chambers import catalog
    for name, want in PROFILES.items():
        assert profile(catalog.get(name).arrangement) == want, name


def test_braid_equals_type_a():
    assert profile(braid_arrangement(4)) == profile(coxeter_arrangement("A", 4))
    assert profile(braid_arrangement(3)) == (3, 13, 6, 2, True)


def test_boolean():
    arr = boolean_arrangement(3)
    assert profile(arr) == (3, 27, 8, 3, True)
    assert len(boolean_arrangement(2).chambers) == 4


def test_product_is_a_band():
    arr = braid_arrangement(3)
    zero = arr.parse_face("000")
    for x in arr.faces:
        assert arr.product(x, x) == x
        assert arr.product(zero, x) == x
    c = arr.chambers[0]
    for x in arr.faces:
        assert arr.product(c, x) == c
    for x in arr.faces[:5]:
        for y in arr.faces[:5]:
            for z in arr.chambers[:3]:
                assert arr.product(arr.product(x, y), z) == \
                    arr.product(x, arr.product(y, z))


def test_face_tokens():
    arr = boolean_arrangement(3)
    c = arr.parse_face("+-+")
    assert arr.face_token(c) == "+-+"
    assert c in arr.chambers
    with pytest.raises(RealizabilityFailure):
        arr.parse_face("++")
    with pytest.raises(RealizabilityFailure):
        braid_arrangement(3).parse_face("+-0")    # not realizable there


def test_check_faces():
    for name in ("braid-a2", "octants", "generic-4"):
        from chambers import catalog
        rep = catalog.get(name).arrangement.check_faces()
        assert rep.ok, name


def test_lrb_from_arrangement():
    band = braid_arrangement(3).lrb()
    assert band.n == 13
    assert band.check_band().ok
    rep = band.check_axioms()
    assert rep.ok
    assert rep.verdict("projection.facet-determined")


def test_to_complex():
    c = boolean_arrangement(3).to_complex()
    assert len(c.chambers) == 8
    assert len(c) == 27
    assert c.is_thin()[0]


def test_scale_and_degeneracy():
    with pytest.raises(ScaleExceeded):
        braid_arrangement(6)
    with pytest.raises(ScaleExceeded):
        coxeter_arrangement("B", 5)
    with pytest.raises(ValueError):
        coxeter_arrangement("E", 3)
    with pytest.raises(DegenerateNormal):
        Arrangement([(0, 0, 0)])
    with pytest.raises(DegenerateNormal):
        Arrangement([(1, 0), (2, 0)])
    with pytest.raises(DegenerateNormal):
        Arrangement([(1, 0, 0), (0, 1)])


def test_primitive():
    assert _primitive((2, 4)) == ((1, 2), 1)
    assert _primitive((-3, 6)) == ((1, -2), -1)
    with pytest.raises(DegenerateNormal):
        _primitive((0, 0))


def test_generic_is_rank3():
    arr = generic_arrangement()
    assert arr.rank == 3
    assert not arr.is_simplicial()
