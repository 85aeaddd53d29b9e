"""Shelling verification, certificates, closure orders, and reversal."""

import pytest

from chambers import catalog, shellings, structures
from chambers.complexes import EMPTY_FACE
from chambers.errors import EulerMismatch, NotAShelling, NotThin
from chambers.shellings import (
    ShellingCertificate,
    link_shelling,
    restriction_to_order,
    reverse_shelling_check,
    sphere_count,
    verify_shelling,
)

HEX = catalog.get("hexagon").complex


def dist_order(c, base=0):
    d = c.distances_from(base)
    return sorted(range(len(c.chambers)), key=lambda i: (d[i], i))


def test_hexagon_walk_around_is_a_shelling():
    cert = verify_shelling(HEX, range(6))
    assert [HEX.face_token(f) for f in cert.restriction] == \
        ["-", "v2", "v3", "v4", "v5", "v0,v5"]
    assert [sorted(HEX.face_token(w) for w in ws)
            for ws in cert.covered_facets] == \
        [[], ["v1"], ["v2"], ["v3"], ["v4"], ["v0", "v5"]]
    assert cert.restriction_of(5) == HEX.chambers[5]
    assert cert.covered_of(0) == frozenset()
    assert sphere_count(HEX, cert) == 1


def test_not_a_shelling():
    with pytest.raises(NotAShelling) as exc:
        verify_shelling(HEX, [0, 2, 1, 3, 4, 5])
    assert exc.value.position == 1
    assert exc.value.witness == 2
    with pytest.raises(NotAShelling):
        verify_shelling(HEX, [0, 1, 2])        # not a permutation


def test_distance_orders_shell_the_catalog():
    for name, spheres in [("hexagon", 1), ("octants", 1),
                          ("coxeter-a3", 1), ("coxeter-b3", 1),
                          ("building-3-2", 8), ("building-3-3", 27),
                          ("building-4-2", 64)]:
        c = catalog.get(name).complex
        cert = verify_shelling(c, dist_order(c))
        assert sphere_count(c, cert) == spheres, name


def test_sphere_count_crosschecks_euler():
    cert = verify_shelling(HEX, range(6))
    doctored = ShellingCertificate(
        cert.order, cert.covered_facets,
        cert.restriction[:4] + (HEX.chambers[4], cert.restriction[5]),
        cert.position)
    with pytest.raises(EulerMismatch):
        sphere_count(HEX, doctored)


def test_closure_order_of_the_metric_restriction():
    r = structures.metric_structure(HEX).restriction
    col = r.column(0)
    closure = restriction_to_order(HEX, col)
    exts = list(closure.linear_extensions())
    assert len(exts) == 6       # two chains of length 2 under a common top
    for ext in exts:
        verify_shelling(HEX, ext)
    assert closure == restriction_to_order(HEX, col, refined=True)


def test_refined_closure_agrees_on_thin_entries():
    for entry in catalog.thin_entries():
        c = entry.complex
        fam = (entry.structure.restriction if entry.structure
               else structures.metric_structure(c).restriction)
        for base in range(len(c.chambers)):
            col = fam.column(base)
            plain = restriction_to_order(c, col)
            assert plain == restriction_to_order(c, col, refined=True), \
                (entry.name, base)


def test_closure_needs_one_source():
    col = {ci: HEX.chambers[ci] for ci in range(6)}
    with pytest.raises(ValueError):
        restriction_to_order(HEX, col)


def test_link_shelling():
    a3 = catalog.get("coxeter-a3").complex
    order = dist_order(a3)
    link, cert, rep, cmap = link_shelling(a3, order, 1 << 0)
    assert rep.ok
    assert len(link.chambers) == 6
    assert len(cmap) == 6
    assert sphere_count(link, cert) == 1


def test_reversal():
    for name in ("hexagon", "octants", "coxeter-a3", "coxeter-b3"):
        c = catalog.get(name).complex
        rep = reverse_shelling_check(c, dist_order(c))
        assert rep.ok, name
        assert [l.check_id for l in rep.checks] == [
            "reversal.shelling", "reversal.restriction-complement",
            "reversal.facet-complement", "reversal.dehn-sommerville"]


def test_reversal_needs_thin():
    with pytest.raises(NotThin):
        reverse_shelling_check(catalog.get("building-3-2").complex,
                               dist_order(catalog.get("building-3-2").complex))
    with pytest.raises(NotThin):
        reverse_shelling_check(catalog.get("petersen").complex, range(15))
