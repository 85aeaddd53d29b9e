"""Bitmask partial orders: closure, extensions, minima."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chambers.errors import NotAPartialOrder
from chambers.orders import PartialOrder


def chain(n):
    return PartialOrder.from_pairs(n, [(i, i + 1) for i in range(n - 1)])


def test_from_pairs_closes_transitively():
    p = PartialOrder.from_pairs(3, [(0, 1), (1, 2)])
    assert p.leq(0, 2)
    assert not p.leq(2, 0)
    assert p.covers() == [(0, 1), (1, 2)]
    assert set(p.strict_pairs()) == {(0, 1), (0, 2), (1, 2)}


def test_cycle_rejected():
    with pytest.raises(NotAPartialOrder) as exc:
        PartialOrder.from_pairs(3, [(0, 1), (1, 2), (2, 0)])
    assert 0 in exc.value.cycle


def test_minima():
    p = PartialOrder.from_pairs(4, [(0, 1), (0, 2), (3, 2)])
    assert p.minima([0, 1, 2, 3]) == [0, 3]
    assert p.minima([1, 2]) == [1, 2]


def test_total():
    assert chain(4).is_total()
    assert not PartialOrder.from_pairs(3, [(0, 1)]).is_total()


def test_linear_extensions():
    anti = PartialOrder.from_pairs(3, [])
    assert len(list(anti.linear_extensions())) == 6
    assert list(chain(4).linear_extensions()) == [(0, 1, 2, 3)]
    v = PartialOrder.from_pairs(3, [(0, 1), (0, 2)])
    assert sorted(v.linear_extensions()) == [(0, 1, 2), (0, 2, 1)]
    assert v.count_linear_extensions(cap=100) == 2
    assert anti.count_linear_extensions(cap=4) is None


def test_random_extension_respects_order():
    p = PartialOrder.from_pairs(5, [(0, 3), (1, 3), (3, 4)])
    rng = random.Random(7)
    for _ in range(20):
        ext = p.random_extension(rng)
        pos = {x: i for i, x in enumerate(ext)}
        for a, b in p.strict_pairs():
            assert pos[a] < pos[b]


def test_reverse():
    p = chain(3)
    r = p.reverse()
    assert r.leq(2, 0)
    assert r.reverse() == p
    assert r != p


def test_up_and_down_masks():
    p = PartialOrder.from_pairs(3, [(0, 1), (1, 2)])
    assert p.up_mask(0) == 0b111
    assert p.up_mask(2) == 0b100
    assert p.down_masks()[2] == 0b111


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), st.data())
def test_random_dags_close_or_cycle(n, data):
    pairs = data.draw(st.lists(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
        max_size=8))
    pairs = [(a, b) for a, b in pairs if a != b]
    try:
        p = PartialOrder.from_pairs(n, pairs)
    except NotAPartialOrder:
        return
    for a, b in pairs:
        assert p.leq(a, b)
    for a, b in p.strict_pairs():
        for c in range(n):
            if p.leq(b, c):
                assert p.leq(a, c)
