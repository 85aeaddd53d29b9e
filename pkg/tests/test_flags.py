"""Flag vectors, restriction counts, complementarity, skeleton spheres.

Frozen values: the hexagon ones were computed by hand, the flag complex
ones (building-3-2) from subspace counts over the two-element field
(7 points, 7 lines, 21 incident pairs).
"""

import pytest

from chambers import catalog, structures
from chambers.errors import EulerMismatch, NeedsLabels
from chambers.flags import (
    beta_ranks,
    beta_vector,
    binom,
    ds_report,
    ds_report_ranks,
    flag_vectors,
    local_flag_table,
    rank_vectors,
    skeleton_sphere_count,
)

HEX = catalog.get("hexagon").complex


def by_token(c, vec):
    return {c.type_token(j): v for j, v in vec.items()}


def test_binom():
    assert [binom(4, k) for k in range(6)] == [1, 4, 6, 4, 1, 0]
    assert binom(3, -1) == 0


def test_hexagon_flag_vectors():
    f, h = flag_vectors(HEX)
    assert by_token(HEX, f) == {"-": 1, "s": 3, "t": 3, "s,t": 6}
    assert by_token(HEX, h) == {"-": 1, "s": 2, "t": 2, "s,t": 1}
    assert ds_report(HEX, h).ok


def test_hexagon_rank_vectors():
    f, h = rank_vectors(HEX)
    assert f == [1, 6, 6]
    assert h == [1, 4, 1]
    assert ds_report_ranks(h).ok


def test_ngon5_spec_values():
    c = catalog.get("ngon-5").complex
    f, h = rank_vectors(c)
    assert h == [1, 3, 1]
    assert ds_report_ranks(h).ok


def test_beta_matches_h_from_every_base():
    _, h = flag_vectors(HEX)
    fam = structures.metric_structure(HEX).restriction
    for base in range(6):
        assert beta_vector(HEX, fam.column(base)) == h
    assert beta_ranks(HEX, fam.column(0)) == [1, 4, 1]


def test_beta_needs_labels():
    c = catalog.get("ngon-5").complex
    assert c.types is None
    fam = catalog.get("ngon-5").structure.restriction
    with pytest.raises(NeedsLabels):
        beta_vector(c, fam.column(0))
    assert beta_ranks(c, fam.column(0)) == [1, 3, 1]


def test_octants_local_table_is_boolean():
    c = catalog.get("octants").complex
    fam = structures.metric_structure(c).restriction
    h_local, f_local = local_flag_table(c, fam.table)
    full = c.full_type_mask
    for d in range(8):
        for j in range(full + 1):
            assert h_local[(d, j)] == 1
        by_rank = [sum(h_local[(d, j)] for j in range(full + 1)
                       if bin(j).count("1") == k) for k in range(4)]
        assert by_rank == [binom(3, k) for k in range(4)]
        assert f_local[(d, full)] == 8


def test_building_fails_flag_ds():
    c = catalog.get("building-3-2").complex
    f, h = flag_vectors(c)
    assert by_token(c, f) == {"-": 1, "1": 7, "2": 7, "1,2": 21}
    assert by_token(c, h) == {"-": 1, "1": 6, "2": 6, "1,2": 8}
    rep = ds_report(c, h)
    assert not rep.ok
    assert [(l.check_id, l.passed, l.witness) for l in rep.checks] == [
        ("ds.-~1,2", False, (1, 8)),
        ("ds.1~2", True, (6, 6)),
    ]


def test_skeleton_spheres():
    fam = structures.metric_structure(HEX).restriction
    beta = beta_ranks(HEX, fam.column(0))
    assert [skeleton_sphere_count(HEX, beta, k) for k in range(3)] == [1, 5, 1]

    c = catalog.get("octants").complex
    beta = beta_ranks(c, structures.metric_structure(c).restriction.column(0))
    assert beta == [1, 3, 3, 1]
    assert [skeleton_sphere_count(c, beta, k) for k in range(4)] == \
        [1, 5, 7, 1]


def test_skeleton_crosscheck_catches_bad_beta():
    with pytest.raises(EulerMismatch):
        skeleton_sphere_count(HEX, [1, 5, 1], 1)
    with pytest.raises(ValueError):
        skeleton_sphere_count(HEX, [1, 4, 1], 9)
