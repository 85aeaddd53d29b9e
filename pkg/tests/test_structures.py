"""Projection tables, restriction families, base orders, and the
conversions between them.

Everything here runs on catalog entries small enough for exhaustive
checking; the expected verdicts were computed once and frozen.
"""

import pytest

from chambers import catalog, structures
from chambers.complexes import EMPTY_FACE
from chambers.errors import GatePropertyFails, NoUniqueMinimum
from chambers.orders import PartialOrder
from chambers.structures import (
    check_opposition,
    check_orders,
    check_projection,
    check_restriction,
    find_opposition,
    metric_structure,
    orders_to_projection,
    projection_to_restriction,
    restriction_to_orders,
)

HEX = catalog.get("hexagon").complex


@pytest.fixture(scope="module")
def hex_metric():
    return metric_structure(HEX)


def test_metric_structure_passes_axioms(hex_metric):
    p, r, s = hex_metric
    assert check_projection(HEX, p).ok
    assert check_restriction(HEX, r).ok
    assert check_orders(HEX, s, mode="exhaustive").ok


def test_projection_values(hex_metric):
    p = hex_metric.projection
    v1 = HEX.parse_face("v1")
    assert p.project(v1, 3) == 1
    assert p.project(EMPTY_FACE, 4) == 4
    assert p.project(HEX.chambers[2], 0) == 2


def test_restriction_values(hex_metric):
    r = hex_metric.restriction
    assert r.restriction(0, 0) == EMPTY_FACE
    assert r.restriction(0, 1) == HEX.parse_face("v2")
    assert r.restriction(0, 3) == HEX.chambers[3]


def test_round_trip_is_identity(hex_metric):
    p = hex_metric.projection
    r = projection_to_restriction(HEX, p)
    s = restriction_to_orders(HEX, r)
    p2 = orders_to_projection(HEX, s)
    assert p2.table == p.table
    assert r.table == hex_metric.restriction.table


def test_round_trip_on_larger_entries():
    for name in ("ngon-5", "ngon-8", "coxeter-a3", "coxeter-b3"):
        entry = catalog.get(name)
        st = entry.structure or metric_structure(entry.complex)
        r = projection_to_restriction(entry.complex, st.projection)
        s = restriction_to_orders(entry.complex, r)
        p2 = orders_to_projection(entry.complex, s)
        assert p2.table == st.projection.table, name


def test_clockwise_structure_is_not_metric():
    entry = catalog.get("ngon-6")
    st = entry.structure
    assert check_projection(entry.complex, st.projection).ok
    assert check_orders(entry.complex, st.orders, mode="exhaustive").ok
    witness = catalog.ngon_nonmetric_witness(entry)
    assert witness is not None
    f, ci, got, nearest = witness
    c = entry.complex
    assert (c.face_token(f), c.chamber_names[ci]) == ("v4", "e0")
    assert c.chamber_names[got] == "e3"
    assert [c.chamber_names[x] for x in nearest] == ["e4"]


def test_metric_structure_fails_on_ties():
    for name in ("ngon-3", "ngon-5", "petersen"):
        with pytest.raises(GatePropertyFails):
            metric_structure(catalog.get(name).complex)


def test_corrupted_projection_detected(hex_metric):
    v1 = HEX.parse_face("v1")

    table = dict(hex_metric.projection.table)
    table[(v1, 3)] = 4      # result does not contain v1
    rep = check_projection(HEX, structures.ProjectionTable(HEX, table))
    assert not rep.verdict("projection.result-contains-face")

    table = dict(hex_metric.projection.table)
    table[(v1, 1)] = 0      # v1 lies in e1, which must be fixed
    rep = check_projection(HEX, structures.ProjectionTable(HEX, table))
    assert not rep.verdict("projection.fixed-when-contained")


def test_clockwise_differs_from_metric_but_passes(hex_metric):
    # redirecting one projection to the other chamber of the residue
    # reproduces a clockwise-style choice: still a valid structure
    table = dict(hex_metric.projection.table)
    v1 = HEX.parse_face("v1")
    table[(v1, 3)] = 0
    rep = check_projection(HEX, structures.ProjectionTable(HEX, table))
    assert rep.ok


def test_antichain_orders_have_no_projection():
    anti = PartialOrder.from_pairs(6, [])
    s = structures.OrderFamily(HEX, [anti] * 6)
    with pytest.raises(NoUniqueMinimum):
        orders_to_projection(HEX, s)


def test_sampled_order_check(hex_metric):
    rep = check_orders(HEX, hex_metric.orders, mode="sampled",
                       samples=40, seed=3)
    assert rep.ok


def test_opposition():
    st = metric_structure(HEX)
    opp = find_opposition(HEX, st.restriction)
    assert opp.is_involution()
    assert [opp[ci] for ci in range(6)] == [3, 4, 5, 0, 1, 2]
    rep = check_opposition(HEX, st.projection, st.restriction,
                           st.orders, opp)
    assert rep.ok
    ids = [l.check_id for l in rep.checks]
    assert "opposite.involution" in ids
